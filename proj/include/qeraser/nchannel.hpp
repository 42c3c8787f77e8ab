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
 * Two-path, n-channel interferometer.
 *
 * A path splitter sends path A to (1/sqrt(n)) sum_j e^{i theta_j} |D_j>
 * and path B to (1/sqrt(n)) sum_j e^{i phi_j} |D_j>. The two images are
 * orthogonal (so the map extends to a unitary) exactly when
 * sum_j e^{i(phi_j - theta_j)} = 0. Detectors are numbered 1..n.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "marker.hpp"
#include "rng.hpp"

namespace qeraser::nchannel {

/// Largest accepted normalized unitarity residual. Looser than kTolerance so
/// decimal phase tables read from text still validate.
inline constexpr double kUnitarityTolerance = 1e-9;

/// |sum_j e^{i(phi_j - theta_j)}| / n
inline double validate_config(const std::vector<double> &thetas,
                              const std::vector<double> &phis) {
    if (thetas.size() != phis.size()) {
        throw Error(ErrorCode::LengthMismatch,
                    "theta and phi vectors differ in length");
    }
    if (thetas.empty()) {
        throw Error(ErrorCode::InvalidConfig, "no channels");
    }
    Complex sum{0.0, 0.0};
    for (std::size_t j = 0; j < thetas.size(); ++j) {
        sum += std::polar(1.0, phis[j] - thetas[j]);
    }
    return std::abs(sum) / static_cast<double>(thetas.size());
}

/// Per-channel phases of a realizable path splitter.
class PhaseConfig {
  public:
    PhaseConfig(std::vector<double> thetas, std::vector<double> phis)
        : thetas_(std::move(thetas)), phis_(std::move(phis)) {
        if (thetas_.size() != phis_.size()) {
            throw Error(ErrorCode::LengthMismatch,
                        "theta and phi vectors differ in length");
        }
        if (thetas_.size() < 2) {
            throw Error(ErrorCode::InvalidConfig, "need at least two channels");
        }
        for (std::size_t j = 0; j < thetas_.size(); ++j) {
            if (!std::isfinite(thetas_[j]) || !std::isfinite(phis_[j])) {
                throw Error(ErrorCode::NonFinitePhase,
                            "channel " + std::to_string(j + 1));
            }
        }
        const double residual = validate_config(thetas_, phis_);
        if (residual >= kUnitarityTolerance) {
            throw Error(ErrorCode::InvalidConfig,
                        "splitter images are not orthogonal (residual " +
                            std::to_string(residual) + ")");
        }
    }

    [[nodiscard]] std::size_t n() const noexcept { return thetas_.size(); }
    [[nodiscard]] const std::vector<double> &thetas() const noexcept { return thetas_; }
    [[nodiscard]] const std::vector<double> &phis() const noexcept { return phis_; }

  private:
    std::vector<double> thetas_;
    std::vector<double> phis_;
};

inline double validate_config(const PhaseConfig &config) {
    return validate_config(config.thetas(), config.phis());
}

/// theta_j = 0; phi_j = 0 for odd j and pi for even j.
inline PhaseConfig default_config(std::size_t n) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidConfig, "need at least two channels");
    }
    if (n % 2 != 0) {
        throw Error(ErrorCode::OddChannelCount,
                    "the alternating preset needs an even channel count");
    }
    std::vector<double> thetas(n, 0.0);
    std::vector<double> phis(n, 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
        phis[j - 1] = (j % 2 == 0) ? std::numbers::pi : 0.0;
    }
    return {std::move(thetas), std::move(phis)};
}

/**
 * Random realizable configuration.
 *
 * All thetas and the phis of channels 3..n are drawn uniform in [0, 2 pi).
 * Channels 1 and 2 are then repaired: with S the phasor sum of the other
 * channels, their phasors are set to e^{i(arg(-S) +/- alpha)} where
 * cos(alpha) = |S| / 2, which cancels S exactly. Draws with |S| > 2 cannot
 * be repaired and are rejected.
 */
inline PhaseConfig random_valid_config(std::size_t n, SplitMix64 &rng) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidConfig, "need at least two channels");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (;;) {
        std::vector<double> thetas(n);
        std::vector<double> phis(n);
        for (auto &t : thetas) {
            t = two_pi * rng.uniform01();
        }
        Complex rest{0.0, 0.0};
        for (std::size_t j = 2; j < n; ++j) {
            phis[j] = two_pi * rng.uniform01();
            rest += std::polar(1.0, phis[j] - thetas[j]);
        }
        const double r = std::abs(rest);
        if (r > 2.0) {
            continue;
        }
        const double target = (r > 0.0) ? std::arg(-rest) : 0.0;
        const double alpha = std::acos(r / 2.0);
        phis[0] = thetas[0] + target + alpha;
        phis[1] = thetas[1] + target - alpha;
        return {std::move(thetas), std::move(phis)};
    }
}

/// The splitter restricted to the two path inputs.
class PathSplitter {
  public:
    explicit PathSplitter(PhaseConfig config) : config_(std::move(config)) {
        const double amp = 1.0 / std::sqrt(static_cast<double>(config_.n()));
        images_[0].reserve(config_.n());
        images_[1].reserve(config_.n());
        for (std::size_t j = 0; j < config_.n(); ++j) {
            images_[0].push_back(std::polar(amp, config_.thetas()[j]));
            images_[1].push_back(std::polar(amp, config_.phis()[j]));
        }
    }

    [[nodiscard]] const PhaseConfig &config() const noexcept { return config_; }

    /// Output amplitudes for path 0 (A) or 1 (B).
    [[nodiscard]] const std::vector<Complex> &image(std::size_t path) const {
        return images_.at(path);
    }

    /// Maps a state over (path A, path B) (x) marker to detectors (x) marker.
    [[nodiscard]] PureState apply(const PureState &paths) const {
        if (paths.dims().system != 2) {
            throw Error(ErrorCode::DimensionMismatch,
                        "splitter input must be a two-path state");
        }
        const std::size_t md = paths.dims().marker;
        const std::size_t n = config_.n();
        std::vector<Complex> out(n * md);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t m = 0; m < md; ++m) {
                out[j * md + m] = images_[0][j] * paths.amplitude(0, m) +
                                  images_[1][j] * paths.amplitude(1, m);
            }
        }
        return make_state({n, md}, std::move(out));
    }

  private:
    PhaseConfig config_;
    std::array<std::vector<Complex>, 2> images_;
};

/// Equal superposition of the two paths, no marker.
inline PureState two_path_input() { return make_state({2, 1}, {1.0, 1.0}); }

/// Paths entangled with the marker: (|A>|d1> + |B>|d2>) / sqrt(2).
inline PureState marked_two_path_input() {
    return make_state({2, 2}, {1.0, 0.0, 0.0, 1.0});
}

inline PureState final_state_bare(const PhaseConfig &config) {
    return PathSplitter(config).apply(two_path_input());
}

inline PureState final_state_marked(const PhaseConfig &config) {
    return PathSplitter(config).apply(marked_two_path_input());
}

struct DetectorDistribution {
    /// Index j - 1 holds detector j.
    std::vector<double> probabilities;
    std::optional<MarkerState> condition;
    /// Probability of the conditioning marker outcome; 1 when unconditioned.
    double branch_probability = 1.0;
};

namespace detail {

inline std::vector<double> system_marginal(const PureState &state) {
    const auto amps = state.amplitudes();
    const std::size_t md = state.dims().marker;
    std::vector<double> p(state.dims().system, 0.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
        for (std::size_t m = 0; m < md; ++m) {
            p[j] += std::norm(amps[j * md + m]);
        }
    }
    return p;
}

} // namespace detail

inline DetectorDistribution detector_probabilities(const PureState &state) {
    return {detail::system_marginal(state), std::nullopt, 1.0};
}

inline DetectorDistribution conditioned_distribution(const PureState &state,
                                                     const MarkerState &marker) {
    auto [residual, p] = project_marker(state, marker.vector());
    return {detail::system_marginal(residual), marker, p};
}

struct DelayedMarkerReport {
    MarkerState marker;
    double probability;
    double purity;
    double fidelity_plus;
    double fidelity_minus;
};

/// Marker state left behind by a click at detector `detector_j` (1-based).
inline DelayedMarkerReport delayed_marker_state(const PureState &state,
                                                std::size_t detector_j) {
    if (detector_j < 1 || detector_j > state.dims().system) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "detector " + std::to_string(detector_j) + " outside 1.." +
                        std::to_string(state.dims().system));
    }
    const auto [conditional, p] = project_system(state, detector_j - 1);
    const auto rho = projector(conditional);
    const double pur = purity(rho);
    if (std::abs(pur - 1.0) > kTolerance) {
        throw std::logic_error("conditional marker state of a pure joint state "
                               "is not pure");
    }
    const auto basis = erasure_basis(0.0);
    return {MarkerState(conditional), p, pur,
            fidelity_pure(rho, basis.plus.vector()),
            fidelity_pure(rho, basis.minus.vector())};
}

} // namespace qeraser::nchannel
