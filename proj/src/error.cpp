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

#include "spinmech/error.hpp"

namespace spinmech {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::SpecMismatch: return "Hilbert space mismatch";
        case ErrorCode::IndexOutOfRange: return "index out of range";
        case ErrorCode::TruncationRisk: return "Fock truncation risk";
        case ErrorCode::NegativeRate: return "negative rate";
        case ErrorCode::NonHermitian: return "non-Hermitian operator";
        case ErrorCode::StepSizeUnderflow: return "step-size underflow";
        case ErrorCode::NonUniqueSteadyState: return "non-unique steady state";
        case ErrorCode::NumericalFailure: return "numerical failure";
        case ErrorCode::ZeroProbability: return "zero-probability branch";
        case ErrorCode::Infeasible: return "infeasible";
        case ErrorCode::Precondition: return "precondition violated";
        case ErrorCode::Config: return "configuration error";
        case ErrorCode::Io: return "I/O error";
    }
    return "unknown error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace spinmech
