// Copyright 2026 The spinmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Named invariant suites run by `spinmech validate`.
#pragma once

#include <string>
#include <vector>

namespace spinmech {

struct InvariantResult {
    std::string name;
    std::string suite;  // "core" or "physics"
    bool passed;
    std::string detail;
};

struct ValidationOptions {
    /// Test fixture: flips the sign of the thermal absorption term in the
    /// generator used by the thermalization check.
    bool inject_thermal_sign_error = false;
};

/// suite is "core", "physics" or "all".
std::vector<InvariantResult> run_validation(const std::string& suite, const ValidationOptions& opt = {});

std::string format_report(const std::vector<InvariantResult>& results);

}  // namespace spinmech
