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
 * The two-level path marker: the which-path basis {d1, d2} and the
 * one-parameter family of erasure bases
 *
 *     d^theta_(+/-) = (e^{i theta} d1 +/- e^{-i theta} d2) / sqrt(2).
 *
 * Finding the marker in d^theta_+ selects a fringe pattern shifted by
 * -2 theta in phase relative to d_+ = d^0_+.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "core.hpp"

namespace qeraser {

/// Normalized marker vector c1 |d1> + c2 |d2>.
class MarkerState {
  public:
    MarkerState(Complex c1, Complex c2) : v_{c1, c2} {
        if (!detail::all_finite(v_)) {
            throw Error(ErrorCode::NonFinite, "marker coefficients");
        }
        if (std::abs(detail::norm_squared(v_) - 1.0) > kTolerance) {
            throw Error(ErrorCode::NotNormalized,
                        "marker coefficients must satisfy |c1|^2 + |c2|^2 = 1");
        }
    }
    explicit MarkerState(const Qubit &v) : MarkerState(v[0], v[1]) {}

    [[nodiscard]] Complex c1() const noexcept { return v_[0]; }
    [[nodiscard]] Complex c2() const noexcept { return v_[1]; }
    [[nodiscard]] const Qubit &vector() const noexcept { return v_; }

  private:
    Qubit v_;
};

inline Complex inner_product(const MarkerState &a, const MarkerState &b) noexcept {
    return inner_product(a.vector(), b.vector());
}

/// |<a|b>|^2
inline double overlap_probability(const MarkerState &a, const MarkerState &b) noexcept {
    return std::norm(inner_product(a, b));
}

using MarkerPair = std::pair<MarkerState, MarkerState>;

struct MarkerBasis {
    double theta;
    MarkerState plus;
    MarkerState minus;

    [[nodiscard]] MarkerPair states() const { return {plus, minus}; }
};

/// (|d1>, |d2>)
inline MarkerPair which_path_basis() {
    return {MarkerState(1.0, 0.0), MarkerState(0.0, 1.0)};
}

inline MarkerBasis erasure_basis(double theta) {
    if (!std::isfinite(theta)) {
        throw Error(ErrorCode::NonFinitePhase, "erasure basis phase must be finite");
    }
    const double s = 1.0 / std::numbers::sqrt2;
    const Complex a = std::polar(s, theta);
    const Complex b = std::polar(s, -theta);
    return {theta, MarkerState(a, b), MarkerState(a, -b)};
}

/// Largest deviation of |<a_i|b_j>|^2 from 1/2 over the four pairs.
inline double mutual_unbiasedness_check(const MarkerPair &a, const MarkerPair &b) {
    double worst = 0.0;
    for (const auto *x : {&a.first, &a.second}) {
        for (const auto *y : {&b.first, &b.second}) {
            worst = std::max(worst, std::abs(overlap_probability(*x, *y) - 0.5));
        }
    }
    return worst;
}

inline double mutual_unbiasedness_check(const MarkerBasis &a, const MarkerPair &b) {
    return mutual_unbiasedness_check(a.states(), b);
}

} // namespace qeraser
