// Copyright 2026 The qeraser Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Error type shared by every qeraser module.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qeraser {

enum class ErrorCode {
    ZeroNorm,
    DimensionMismatch,
    NonFinite,
    NoMarker,
    NotNormalized,
    ZeroProbability,
    IndexOutOfRange,
    InvalidDensity,
    NonFinitePhase,
    OddChannelCount,
    LengthMismatch,
    InvalidConfig,
    InvalidGeometry,
    DegeneratePattern,
    InvalidCount,
    EmptyResult,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::ZeroNorm:
        return "ZeroNorm";
    case ErrorCode::DimensionMismatch:
        return "DimensionMismatch";
    case ErrorCode::NonFinite:
        return "NonFinite";
    case ErrorCode::NoMarker:
        return "NoMarker";
    case ErrorCode::NotNormalized:
        return "NotNormalized";
    case ErrorCode::ZeroProbability:
        return "ZeroProbability";
    case ErrorCode::IndexOutOfRange:
        return "IndexOutOfRange";
    case ErrorCode::InvalidDensity:
        return "InvalidDensity";
    case ErrorCode::NonFinitePhase:
        return "NonFinitePhase";
    case ErrorCode::OddChannelCount:
        return "OddChannelCount";
    case ErrorCode::LengthMismatch:
        return "LengthMismatch";
    case ErrorCode::InvalidConfig:
        return "InvalidConfig";
    case ErrorCode::InvalidGeometry:
        return "InvalidGeometry";
    case ErrorCode::DegeneratePattern:
        return "DegeneratePattern";
    case ErrorCode::InvalidCount:
        return "InvalidCount";
    case ErrorCode::EmptyResult:
        return "EmptyResult";
    }
    return "Unknown";
}

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

} // namespace qeraser
