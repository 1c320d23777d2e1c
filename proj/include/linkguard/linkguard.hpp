// Copyright 2026 The linkguard Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LINKGUARD_LINKGUARD_HPP_
#define LINKGUARD_LINKGUARD_HPP_

#include "linkguard/baseline.hpp"
#include "linkguard/corpus/corpus.hpp"
#include "linkguard/disclosure/audit.hpp"
#include "linkguard/disclosure/gate.hpp"
#include "linkguard/disclosure/methods.hpp"
#include "linkguard/disclosure/metrics.hpp"
#include "linkguard/disclosure/microtable.hpp"
#include "linkguard/disclosure/rumap.hpp"
#include "linkguard/errors.hpp"
#include "linkguard/kvconfig.hpp"
#include "linkguard/linkage/io.hpp"
#include "linkguard/linkage/link.hpp"
#include "linkguard/privmatch/protocol.hpp"
#include "linkguard/rng.hpp"
#include "linkguard/sha256.hpp"

namespace linkguard {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace linkguard

#endif  // LINKGUARD_LINKGUARD_HPP_
