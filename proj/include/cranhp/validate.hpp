// SPDX-License-Identifier: Apache-2.0
//
// cranhp - hybrid precoding simulator for C-RAN massive MIMO with capacity-limited fronthauls
// Copyright (C) 2026 The cranhp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CRANHP_VALIDATE_HPP
#define CRANHP_VALIDATE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace cranhp
{

struct CheckResult
{
    std::string name;
    bool passed = false;
    std::string detail;
};

// Invariant and property checks across all modules on small seeded instances.
// Runs in a few seconds.
std::vector<CheckResult> run_validation(std::uint64_t seed, int threads);

// CSV table with columns check, status, detail.
std::string validation_csv(const std::vector<CheckResult> &results);

} // namespace cranhp

#endif
