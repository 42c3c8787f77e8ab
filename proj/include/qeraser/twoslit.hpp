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
 * Two-slit eraser on a discretized screen.
 *
 * Path A reaches screen position x with amplitude psi(x) e^{i theta_x} and
 * path B with psi(x) e^{-i theta_x}, where theta_x = pi x d / (lambda L)
 * and psi is a single envelope shared by both slits. The screen is cut
 * into `bins` equal cells; each cell is represented by its midpoint and
 * carries probability |amplitude(center)|^2 * dx.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "marker.hpp"

namespace qeraser::twoslit {

struct ScreenGeometry {
    double d = 2.0;
    double lambda = 1.0;
    double L = 1000.0;
    double x_min = -1000.0;
    double x_max = 1000.0;
    std::size_t bins = 512;

    /// w = lambda L / d
    [[nodiscard]] double fringe_width() const noexcept { return lambda * L / d; }
    [[nodiscard]] double bin_width() const noexcept {
        return (x_max - x_min) / static_cast<double>(bins);
    }

    void validate() const {
        const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!positive(d) || !positive(lambda) || !positive(L)) {
            throw Error(ErrorCode::InvalidGeometry,
                        "d, lambda and L must be finite and positive");
        }
        if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
            throw Error(ErrorCode::InvalidGeometry, "screen extent must satisfy x_min < x_max");
        }
        if (bins < 2) {
            throw Error(ErrorCode::InvalidGeometry, "need at least two bins");
        }
        if (!positive(fringe_width())) {
            throw Error(ErrorCode::InvalidGeometry, "fringe width is not finite");
        }
    }
};

/// d = 2, lambda = 1, L = 1000 (w = 500), screen [-2w, 2w], 512 bins.
inline ScreenGeometry default_geometry() { return {}; }

struct Envelope {
    enum class Kind { Flat, Gaussian };
    Kind kind = Kind::Flat;
    /// Standard deviation of |psi|^2 for the Gaussian kind.
    double sigma = 0.0;

    static Envelope flat() { return {Kind::Flat, 0.0}; }
    static Envelope gaussian(double sigma) { return {Kind::Gaussian, sigma}; }
};

class ScreenGrid {
  public:
    [[nodiscard]] const ScreenGeometry &geometry() const noexcept { return geometry_; }
    [[nodiscard]] std::size_t bins() const noexcept { return centers_.size(); }
    [[nodiscard]] double bin_width() const noexcept { return geometry_.bin_width(); }
    [[nodiscard]] const std::vector<double> &centers() const noexcept { return centers_; }
    [[nodiscard]] const std::vector<double> &theta_x() const noexcept { return theta_x_; }
    /// psi(x_k), normalized so that sum_k psi(x_k)^2 dx = 1.
    [[nodiscard]] const std::vector<double> &envelope() const noexcept { return envelope_; }
    /// psi(x_k)^2 dx
    [[nodiscard]] double envelope_weight(std::size_t k) const {
        return envelope_.at(k) * envelope_.at(k) * bin_width();
    }

  private:
    friend ScreenGrid build_grid(const ScreenGeometry &, const Envelope &);

    ScreenGeometry geometry_;
    std::vector<double> centers_;
    std::vector<double> theta_x_;
    std::vector<double> envelope_;
};

inline ScreenGrid build_grid(const ScreenGeometry &geometry, const Envelope &envelope) {
    geometry.validate();
    if (envelope.kind == Envelope::Kind::Gaussian &&
        !(std::isfinite(envelope.sigma) && envelope.sigma > 0.0)) {
        throw Error(ErrorCode::InvalidGeometry, "gaussian envelope needs sigma > 0");
    }
    ScreenGrid grid;
    grid.geometry_ = geometry;
    const std::size_t n = geometry.bins;
    const double dx = geometry.bin_width();
    grid.centers_.resize(n);
    grid.theta_x_.resize(n);
    grid.envelope_.resize(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = geometry.x_min + (static_cast<double>(k) + 0.5) * dx;
        grid.centers_[k] = x;
        grid.theta_x_[k] = std::numbers::pi * x * geometry.d / (geometry.lambda * geometry.L);
        double psi = 1.0;
        if (envelope.kind == Envelope::Kind::Gaussian) {
            psi = std::exp(-x * x / (4.0 * envelope.sigma * envelope.sigma));
        }
        grid.envelope_[k] = psi;
        total += psi * psi * dx;
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw Error(ErrorCode::InvalidGeometry, "envelope vanishes on the whole screen");
    }
    const double scale = 1.0 / std::sqrt(total);
    for (auto &psi : grid.envelope_) {
        psi *= scale;
    }
    return grid;
}

/// Screen state without a marker: psi(x)(e^{i theta_x} + e^{-i theta_x}) / sqrt(2).
inline PureState screen_state_bare(const ScreenGrid &grid) {
    std::vector<Complex> amps(grid.bins());
    const double root_dx = std::sqrt(grid.bin_width());
    for (std::size_t k = 0; k < grid.bins(); ++k) {
        const double a = grid.envelope()[k] * root_dx / std::numbers::sqrt2;
        amps[k] = std::polar(a, grid.theta_x()[k]) + std::polar(a, -grid.theta_x()[k]);
    }
    return make_state({grid.bins(), 1}, std::move(amps));
}

/// psi(x)(e^{i theta_x}|d1> + e^{-i theta_x}|d2>) / sqrt(2).
inline PureState screen_state_marked(const ScreenGrid &grid) {
    std::vector<Complex> amps(2 * grid.bins());
    const double root_dx = std::sqrt(grid.bin_width());
    for (std::size_t k = 0; k < grid.bins(); ++k) {
        const double a = grid.envelope()[k] * root_dx / std::numbers::sqrt2;
        amps[2 * k] = std::polar(a, grid.theta_x()[k]);
        amps[2 * k + 1] = std::polar(a, -grid.theta_x()[k]);
    }
    return make_state({grid.bins(), 2}, std::move(amps));
}

enum class Sign { Plus, Minus };

struct ScreenCondition {
    double theta;
    Sign sign;
};

struct ScreenPattern {
    std::vector<double> x;
    std::vector<double> theta_x;
    /// psi(x_k)^2 dx, used to divide out the envelope.
    std::vector<double> envelope_weight;
    std::vector<double> probabilities;
    std::optional<ScreenCondition> condition;
    /// Probability of the conditioning marker outcome; 1 when unconditioned.
    double branch_probability = 1.0;
};

namespace detail {

inline ScreenPattern pattern_from(const ScreenGrid &grid, const PureState &state) {
    ScreenPattern p;
    p.x = grid.centers();
    p.theta_x = grid.theta_x();
    p.envelope_weight.resize(grid.bins());
    p.probabilities.assign(grid.bins(), 0.0);
    const auto amps = state.amplitudes();
    const std::size_t md = state.dims().marker;
    for (std::size_t k = 0; k < grid.bins(); ++k) {
        p.envelope_weight[k] = grid.envelope_weight(k);
        for (std::size_t m = 0; m < md; ++m) {
            p.probabilities[k] += std::norm(amps[k * md + m]);
        }
    }
    return p;
}

} // namespace detail

/// Full-contrast pattern of the unmarked quanton.
inline ScreenPattern pattern_no_marker(const ScreenGrid &grid) {
    return detail::pattern_from(grid, screen_state_bare(grid));
}

/// Screen marginal of the marked state: the envelope alone.
inline ScreenPattern pattern_marked_unconditioned(const ScreenGrid &grid) {
    return detail::pattern_from(grid, screen_state_marked(grid));
}

/// Pattern of the quantons whose marker is found in d^theta_(sign).
inline ScreenPattern pattern_conditioned(const ScreenGrid &grid, double theta, Sign sign) {
    const auto basis = erasure_basis(theta);
    const auto &marker = (sign == Sign::Plus) ? basis.plus : basis.minus;
    auto [residual, p] = project_marker(screen_state_marked(grid), marker.vector());
    auto pattern = detail::pattern_from(grid, residual);
    pattern.condition = ScreenCondition{theta, sign};
    pattern.branch_probability = p;
    return pattern;
}

struct DelayedScreenReport {
    double theta_x;
    MarkerState marker;
    double fidelity_to_dplus_thetax;
    double probability;
    double purity;
};

/// Marker state left behind by a quanton landing in bin `bin_k` (0-based).
inline DelayedScreenReport delayed_marker_state_at(const ScreenGrid &grid, std::size_t bin_k) {
    if (bin_k >= grid.bins()) {
        throw Error(ErrorCode::IndexOutOfRange, "bin " + std::to_string(bin_k));
    }
    const auto [conditional, p] = project_system(screen_state_marked(grid), bin_k);
    const double theta_x = grid.theta_x()[bin_k];
    const auto rho = projector(conditional);
    return {theta_x, MarkerState(conditional),
            fidelity_pure(rho, erasure_basis(theta_x).plus.vector()), p, purity(rho)};
}

enum class VisibilityMethod {
    /// Least-squares fit of a + b cos(2 theta_x) + c sin(2 theta_x) to the
    /// envelope-divided pattern; returns sqrt(b^2 + c^2) / a, the contrast
    /// (max - min) / (max + min) of the fitted fringe.
    FringeFit,
    /// (max - min) / (max + min) over the envelope-divided bin values.
    BinExtrema,
};

inline double visibility(const ScreenPattern &pattern,
                         VisibilityMethod method = VisibilityMethod::FringeFit) {
    const std::size_t n = pattern.probabilities.size();
    if (n < 2 || pattern.envelope_weight.size() != n || pattern.theta_x.size() != n) {
        throw Error(ErrorCode::DegeneratePattern, "pattern needs at least two bins");
    }
    std::vector<double> v;
    std::vector<double> phase;
    for (std::size_t k = 0; k < n; ++k) {
        if (pattern.envelope_weight[k] > 0.0) {
            v.push_back(pattern.probabilities[k] / pattern.envelope_weight[k]);
            phase.push_back(2.0 * pattern.theta_x[k]);
        }
    }
    if (v.size() < 2) {
        throw Error(ErrorCode::DegeneratePattern, "envelope vanishes almost everywhere");
    }

    if (method == VisibilityMethod::BinExtrema) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        if (*hi + *lo < kZeroProbability) {
            throw Error(ErrorCode::DegeneratePattern, "max + min vanishes");
        }
        return std::clamp((*hi - *lo) / (*hi + *lo), 0.0, 1.0);
    }

    // Normal equations for the basis (1, cos, sin).
    double m[3][3] = {};
    double rhs[3] = {};
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double f[3] = {1.0, std::cos(phase[k]), std::sin(phase[k])};
        for (int i = 0; i < 3; ++i) {
            rhs[i] += f[i] * v[k];
            for (int j = 0; j < 3; ++j) {
                m[i][j] += f[i] * f[j];
            }
        }
    }
    const auto det3 = [](const double a[3][3]) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    const double det = det3(m);
    if (!(std::abs(det) > 1e-12 * m[0][0] * m[1][1] * m[2][2])) {
        throw Error(ErrorCode::DegeneratePattern, "fringe phases do not span a period");
    }
    double coef[3];
    for (int c = 0; c < 3; ++c) {
        double mc[3][3];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                mc[i][j] = (j == c) ? rhs[i] : m[i][j];
            }
        }
        coef[c] = det3(mc) / det;
    }
    if (coef[0] < kZeroProbability) {
        throw Error(ErrorCode::DegeneratePattern, "fitted mean vanishes");
    }
    return std::clamp(std::hypot(coef[1], coef[2]) / coef[0], 0.0, 1.0);
}

} // namespace qeraser::twoslit
