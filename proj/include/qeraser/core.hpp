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
 * Dense complex linear algebra over a system space tensored with an
 * optional two-level marker: pure states, partial projections, and the
 * reduced 2x2 marker density operator.
 *
 * Amplitudes are laid out system-major: the flat index of
 * (system s, marker m) is s * marker_dim + m.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace qeraser {

using Complex = std::complex<double>;

/// A vector in the two-dimensional marker space, in the (d1, d2) basis.
using Qubit = std::array<Complex, 2>;

/// Absolute tolerance for every algebraic identity.
inline constexpr double kTolerance = 1e-12;

/// Conditioning on an outcome less likely than this is an error.
inline constexpr double kZeroProbability = 1e-15;

struct Dims {
    std::size_t system = 1;
    std::size_t marker = 1;

    [[nodiscard]] constexpr std::size_t size() const noexcept {
        return system * marker;
    }
    friend constexpr bool operator==(const Dims &, const Dims &) = default;
};

struct BasisLabel {
    std::size_t system_index = 0;
    std::optional<std::size_t> marker_index;
};

namespace detail {

inline double norm_squared(std::span<const Complex> v) {
    double acc = 0.0;
    for (const auto &a : v) {
        acc += std::norm(a);
    }
    return acc;
}

inline bool all_finite(std::span<const Complex> v) {
    return std::all_of(v.begin(), v.end(), [](const Complex &a) {
        return std::isfinite(a.real()) && std::isfinite(a.imag());
    });
}

inline double clip_probability(double p) { return std::clamp(p, 0.0, 1.0); }

} // namespace detail

class PureState;
PureState make_state(Dims dims, std::vector<Complex> amplitudes);

/// Normalized pure state over system (x) marker.
class PureState {
  public:
    [[nodiscard]] Dims dims() const noexcept { return dims_; }
    [[nodiscard]] bool has_marker() const noexcept { return dims_.marker == 2; }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amplitudes_;
    }
    /// Factor the constructor multiplied the raw amplitudes by.
    [[nodiscard]] double normalization_factor() const noexcept {
        return normalization_factor_;
    }

    [[nodiscard]] std::size_t flat_index(const BasisLabel &label) const {
        const std::size_t m = label.marker_index.value_or(0);
        if (label.system_index >= dims_.system || m >= dims_.marker ||
            (label.marker_index.has_value() && !has_marker())) {
            throw Error(ErrorCode::IndexOutOfRange,
                        "basis label outside the state's dimensions");
        }
        return label.system_index * dims_.marker + m;
    }

    [[nodiscard]] Complex amplitude(std::size_t system_index,
                                    std::size_t marker_index = 0) const {
        return amplitudes_[flat_index(
            {system_index, has_marker() ? std::optional<std::size_t>(marker_index)
                                        : std::nullopt})];
    }

    [[nodiscard]] double norm_squared() const {
        return detail::norm_squared(amplitudes_);
    }

  private:
    PureState(Dims dims, std::vector<Complex> amplitudes, double factor)
        : dims_(dims), amplitudes_(std::move(amplitudes)),
          normalization_factor_(factor) {}

    friend PureState make_state(Dims dims, std::vector<Complex> amplitudes);

    Dims dims_;
    std::vector<Complex> amplitudes_;
    double normalization_factor_ = 1.0;
};

/// Builds a normalized state from raw amplitudes laid out system-major.
inline PureState make_state(Dims dims, std::vector<Complex> amplitudes) {
    if (dims.system == 0 || (dims.marker != 1 && dims.marker != 2) ||
        amplitudes.size() != dims.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "amplitude count " + std::to_string(amplitudes.size()) +
                        " does not match dims " + std::to_string(dims.system) +
                        "x" + std::to_string(dims.marker));
    }
    if (!detail::all_finite(amplitudes)) {
        throw Error(ErrorCode::NonFinite, "amplitudes must be finite");
    }
    const double n2 = detail::norm_squared(amplitudes);
    if (!(n2 > 0.0)) {
        throw Error(ErrorCode::ZeroNorm, "all amplitudes are zero");
    }
    const double factor = 1.0 / std::sqrt(n2);
    for (auto &a : amplitudes) {
        a *= factor;
    }
    return PureState(dims, std::move(amplitudes), factor);
}

/// <a|b>, conjugate-linear in the first argument.
inline Complex inner_product(const PureState &a, const PureState &b) {
    if (a.dims() != b.dims()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "inner product of states with different dims");
    }
    Complex acc{0.0, 0.0};
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

inline Complex inner_product(const Qubit &a, const Qubit &b) noexcept {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

/// system (x) marker, where `marker` is a marker-free state of dimension 1 or 2.
inline PureState tensor(const PureState &system, const PureState &marker) {
    if (system.has_marker() || marker.has_marker() ||
        marker.dims().system > 2) {
        throw Error(ErrorCode::DimensionMismatch,
                    "tensor expects a marker-free system and a 1- or "
                    "2-dimensional marker factor");
    }
    const std::size_t md = marker.dims().system;
    std::vector<Complex> out;
    out.reserve(system.dims().system * md);
    for (const auto &s : system.amplitudes()) {
        for (const auto &m : marker.amplitudes()) {
            out.push_back(s * m);
        }
    }
    return make_state({system.dims().system, md}, std::move(out));
}

struct MarkerProjection {
    PureState residual;
    double probability;
};

/// Conditions the system on finding the marker in `marker_state`.
inline MarkerProjection project_marker(const PureState &state,
                                       const Qubit &marker_state) {
    if (!state.has_marker()) {
        throw Error(ErrorCode::NoMarker, "state carries no marker");
    }
    if (std::abs(detail::norm_squared(marker_state) - 1.0) > kTolerance) {
        throw Error(ErrorCode::NotNormalized, "marker state is not normalized");
    }
    const auto amps = state.amplitudes();
    const std::size_t n = state.dims().system;
    std::vector<Complex> partial(n);
    for (std::size_t s = 0; s < n; ++s) {
        partial[s] = std::conj(marker_state[0]) * amps[2 * s] +
                     std::conj(marker_state[1]) * amps[2 * s + 1];
    }
    const double p = detail::norm_squared(partial);
    if (p < kZeroProbability) {
        throw Error(ErrorCode::ZeroProbability,
                    "marker outcome has zero probability");
    }
    return {make_state({n, 1}, std::move(partial)),
            detail::clip_probability(p)};
}

struct SystemProjection {
    Qubit marker_conditional;
    double probability;
};

/// Conditions the marker on finding the system at `system_index`.
inline SystemProjection project_system(const PureState &state,
                                       std::size_t system_index) {
    if (!state.has_marker()) {
        throw Error(ErrorCode::NoMarker, "state carries no marker");
    }
    if (system_index >= state.dims().system) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "system index " + std::to_string(system_index) +
                        " outside dimension " +
                        std::to_string(state.dims().system));
    }
    const auto amps = state.amplitudes();
    Qubit m{amps[2 * system_index], amps[2 * system_index + 1]};
    const double p = detail::norm_squared(m);
    if (p < kZeroProbability) {
        throw Error(ErrorCode::ZeroProbability,
                    "system outcome has zero probability");
    }
    const double f = 1.0 / std::sqrt(p);
    m[0] *= f;
    m[1] *= f;
    return {m, detail::clip_probability(p)};
}

/// Validated 2x2 density operator on the marker space.
class DensityOperator {
  public:
    using Matrix = std::array<std::array<Complex, 2>, 2>;

    static constexpr std::size_t dim() noexcept { return 2; }

    explicit DensityOperator(const Matrix &m) : m_(m) {
        for (const auto &row : m_) {
            if (!detail::all_finite(row)) {
                throw Error(ErrorCode::InvalidDensity, "non-finite entry");
            }
        }
        const double herm = std::max({std::abs(m_[0][0] - std::conj(m_[0][0])),
                                      std::abs(m_[1][1] - std::conj(m_[1][1])),
                                      std::abs(m_[0][1] - std::conj(m_[1][0]))});
        if (herm > kTolerance) {
            throw Error(ErrorCode::InvalidDensity, "matrix is not Hermitian");
        }
        if (std::abs(trace() - 1.0) > kTolerance) {
            throw Error(ErrorCode::InvalidDensity, "trace differs from 1");
        }
        if (eigenvalues()[0] < -kTolerance) {
            throw Error(ErrorCode::InvalidDensity, "negative eigenvalue");
        }
    }

    [[nodiscard]] Complex operator()(std::size_t row, std::size_t col) const {
        return m_.at(row).at(col);
    }
    [[nodiscard]] const Matrix &matrix() const noexcept { return m_; }

    [[nodiscard]] double trace() const noexcept {
        return m_[0][0].real() + m_[1][1].real();
    }

    /// Ascending eigenvalues.
    [[nodiscard]] std::array<double, 2> eigenvalues() const noexcept {
        const double mean = 0.5 * trace();
        const double half_gap = 0.5 * (m_[0][0].real() - m_[1][1].real());
        const double r = std::hypot(half_gap, std::abs(m_[0][1]));
        return {mean - r, mean + r};
    }

    /// <v|rho|v>
    [[nodiscard]] double expectation(const Qubit &v) const noexcept {
        Complex acc{0.0, 0.0};
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                acc += std::conj(v[i]) * m_[i][j] * v[j];
            }
        }
        return acc.real();
    }

  private:
    Matrix m_;
};

/// Partial trace over the system: rho[m][m'] = sum_s a(s,m) conj(a(s,m')).
inline DensityOperator reduced_marker_density(const PureState &state) {
    if (!state.has_marker()) {
        throw Error(ErrorCode::NoMarker, "state carries no marker");
    }
    DensityOperator::Matrix m{};
    const auto amps = state.amplitudes();
    for (std::size_t s = 0; s < state.dims().system; ++s) {
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                m[i][j] += amps[2 * s + i] * std::conj(amps[2 * s + j]);
            }
        }
    }
    return DensityOperator(m);
}

/// Density operator of a pure marker vector.
inline DensityOperator projector(const Qubit &v) {
    DensityOperator::Matrix m{};
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            m[i][j] = v[i] * std::conj(v[j]);
        }
    }
    return DensityOperator(m);
}

/// tr(rho^2)
inline double purity(const DensityOperator &rho) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            acc += std::norm(rho(i, j));
        }
    }
    return acc;
}

inline double fidelity_pure(const DensityOperator &rho, const Qubit &target) {
    if (std::abs(detail::norm_squared(target) - 1.0) > kTolerance) {
        throw Error(ErrorCode::NotNormalized, "target is not normalized");
    }
    return std::max(0.0, rho.expectation(target));
}

} // namespace qeraser
