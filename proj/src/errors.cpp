/*
Copyright 2026 The cosched Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "cosched/errors.hpp"

namespace cosched {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::InfeasibleTunnel: return "InfeasibleTunnel";
    case ErrorCode::InfeasibleBuffer: return "InfeasibleBuffer";
    case ErrorCode::InfeasibleHeight: return "InfeasibleHeight";
    case ErrorCode::NoBusyInterval: return "NoBusyInterval";
    case ErrorCode::ExhaustedArea: return "ExhaustedArea";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NoFeasiblePoint: return "NoFeasiblePoint";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

} // namespace cosched
