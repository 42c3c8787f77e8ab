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
 * Invariant suite behind `qeraser check`: normalization, projection
 * completeness, ordering invariance, complementary patterns and delayed
 * definiteness over the built-in presets and a family of random splitters.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "nchannel.hpp"
#include "twoslit.hpp"

namespace qeraser::invariants {

struct CheckResult {
    std::string name;
    double value;     // worst deviation observed
    double tolerance; // pass iff value < tolerance
    [[nodiscard]] bool passed() const { return value < tolerance; }
};

/// 32 basis phases covering [0, pi), the full period of the erasure family.
inline std::vector<double> theta_grid() {
    std::vector<double> g(32);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = std::numbers::pi * static_cast<double>(i) / 32.0;
    }
    return g;
}

inline std::vector<PureState> marked_presets() {
    std::vector<PureState> states;
    for (std::size_t n : {2, 4, 6, 10}) {
        states.push_back(nchannel::final_state_marked(nchannel::default_config(n)));
    }
    states.push_back(twoslit::screen_state_marked(
        twoslit::build_grid(twoslit::default_geometry(), twoslit::Envelope::flat())));
    states.push_back(twoslit::screen_state_marked(
        twoslit::build_grid(twoslit::default_geometry(), twoslit::Envelope::gaussian(400.0))));
    return states;
}

inline std::vector<PureState> random_marked_states(std::size_t count, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<PureState> states;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 11);
        states.push_back(nchannel::final_state_marked(nchannel::random_valid_config(n, rng)));
    }
    return states;
}

inline std::vector<CheckResult> run_all() {
    std::vector<CheckResult> out;
    auto states = marked_presets();
    const auto randoms = random_marked_states(100, 0x5eed);
    states.insert(states.end(), randoms.begin(), randoms.end());
    const auto thetas = theta_grid();

    double norm = 0.0;
    double completeness = 0.0;
    double marginals = 0.0;
    double ordering = 0.0;
    double definiteness = 0.0;
    for (const auto &s : states) {
        norm = std::max(norm, std::abs(s.norm_squared() - 1.0));
        const auto rho = reduced_marker_density(s);
        double sys_total = 0.0;
        for (std::size_t k = 0; k < s.dims().system; ++k) {
            try {
                const auto [m, p] = project_system(s, k);
                sys_total += p;
                definiteness = std::max(definiteness, std::abs(purity(projector(m)) - 1.0));
            } catch (const Error &e) {
                if (e.code() != ErrorCode::ZeroProbability) {
                    throw;
                }
            }
        }
        completeness = std::max(completeness, std::abs(sys_total - 1.0));
        for (double t : thetas) {
            const auto basis = erasure_basis(t);
            double total = 0.0;
            for (const auto *b : {&basis.plus, &basis.minus}) {
                double p = 0.0;
                try {
                    p = project_marker(s, b->vector()).probability;
                } catch (const Error &e) {
                    if (e.code() != ErrorCode::ZeroProbability) {
                        throw;
                    }
                }
                total += p;
                marginals = std::max(marginals, std::abs(rho.expectation(b->vector()) - p));
            }
            completeness = std::max(completeness, std::abs(total - 1.0));
            ordering = std::max(ordering, analysis::ordering_invariance_residual(s, basis));
        }
    }
    out.push_back({"state normalization", norm, kTolerance});
    out.push_back({"projection completeness", completeness, kTolerance});
    out.push_back({"reduced density reproduces marker marginals", marginals, kTolerance});
    out.push_back({"ordering invariance (presets + 100 random splitters)", ordering, kTolerance});
    out.push_back({"conditional marker purity", definiteness, kTolerance});

    // Complementary branches add up to the structureless marginal.
    double comp = 0.0;
    for (std::size_t n : {2, 4, 6, 10}) {
        const auto s = nchannel::final_state_marked(nchannel::default_config(n));
        const auto flat = nchannel::detector_probabilities(s).probabilities;
        for (double t : thetas) {
            const auto b = erasure_basis(t);
            const auto plus = nchannel::conditioned_distribution(s, b.plus);
            const auto minus = nchannel::conditioned_distribution(s, b.minus);
            for (std::size_t j = 0; j < n; ++j) {
                comp = std::max(comp, std::abs(plus.branch_probability * plus.probabilities[j] +
                                               minus.branch_probability * minus.probabilities[j] -
                                               flat[j]));
            }
        }
    }
    const auto grid = twoslit::build_grid(twoslit::default_geometry(), twoslit::Envelope::flat());
    const auto washed = twoslit::pattern_marked_unconditioned(grid);
    for (double t : thetas) {
        const auto plus = twoslit::pattern_conditioned(grid, t, twoslit::Sign::Plus);
        const auto minus = twoslit::pattern_conditioned(grid, t, twoslit::Sign::Minus);
        for (std::size_t k = 0; k < grid.bins(); ++k) {
            comp = std::max(comp, std::abs(plus.branch_probability * plus.probabilities[k] +
                                           minus.branch_probability * minus.probabilities[k] -
                                           washed.probabilities[k]));
        }
    }
    out.push_back({"complementary patterns sum to no interference", comp, kTolerance});

    double delayed_discrete = 0.0;
    const auto s10 = nchannel::final_state_marked(nchannel::default_config(10));
    for (std::size_t j = 1; j <= 10; ++j) {
        const auto r = nchannel::delayed_marker_state(s10, j);
        delayed_discrete = std::max(
            delayed_discrete, std::abs((j % 2 ? r.fidelity_plus : r.fidelity_minus) - 1.0));
    }
    out.push_back({"delayed mode: detector j leaves d+ (odd) / d- (even)", delayed_discrete,
                   kTolerance});

    double delayed_screen = 0.0;
    for (std::size_t k = 0; k < grid.bins(); ++k) {
        const auto r = twoslit::delayed_marker_state_at(grid, k);
        delayed_screen = std::max(delayed_screen, std::abs(r.fidelity_to_dplus_thetax - 1.0));
    }
    out.push_back({"delayed mode: screen bin leaves d^theta_x_+", delayed_screen, kTolerance});

    double epr = 0.0;
    using analysis::SpinBasis;
    for (auto b : {SpinBasis::Z, SpinBasis::X}) {
        const auto t = analysis::epr_correlation_table(b, b);
        epr = std::max({epr, std::abs(t.at(0, 0) - 0.5), std::abs(t.at(1, 1) - 0.5), t.at(0, 1),
                        t.at(1, 0)});
    }
    epr = std::max(epr, analysis::mutual_information(
                            analysis::epr_correlation_table(SpinBasis::Z, SpinBasis::X)));
    out.push_back({"spin-pair correlation tables", epr, kTolerance});

    const auto table = analysis::joint_distribution(s10, erasure_basis(0.0),
                                                    analysis::Order::SystemFirst);
    const analysis::SampleRequest req{"check", analysis::Order::SystemFirst, 1000, 12345, 1};
    std::ostringstream a;
    std::ostringstream b;
    analysis::write_event_log(a, analysis::sample_events(table, req));
    analysis::write_event_log(b, analysis::sample_events(table, req));
    out.push_back({"sampler determinism", a.str() == b.str() ? 0.0 : 1.0, 0.5});
    return out;
}

} // namespace qeraser::invariants
