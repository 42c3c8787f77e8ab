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
 * Joint outcome tables, measurement-ordering checks, the spin-pair
 * analogy, and seeded event sampling.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "core.hpp"
#include "marker.hpp"
#include "rng.hpp"

namespace qeraser::analysis {

/// Which subsystem is projected first. SystemFirst is the delayed mode.
enum class Order { MarkerFirst, SystemFirst };

constexpr std::string_view to_string(Order order) noexcept {
    return order == Order::MarkerFirst ? "marker_first" : "system_first";
}

inline Order parse_order(std::string_view text) {
    if (text == "marker_first") {
        return Order::MarkerFirst;
    }
    if (text == "system_first") {
        return Order::SystemFirst;
    }
    throw Error(ErrorCode::InvalidConfig, "unknown order '" + std::string(text) + "'");
}

/// Rows are system outcomes, columns marker (or spin-2) outcomes.
struct JointTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<double> probabilities; // row-major

    [[nodiscard]] std::size_t rows() const noexcept { return row_labels.size(); }
    [[nodiscard]] std::size_t cols() const noexcept { return col_labels.size(); }

    [[nodiscard]] double at(std::size_t r, std::size_t c) const {
        return probabilities.at(r * cols() + c);
    }
    double &at(std::size_t r, std::size_t c) { return probabilities.at(r * cols() + c); }

    [[nodiscard]] double total() const {
        double t = 0.0;
        for (double p : probabilities) {
            t += p;
        }
        return t;
    }

    [[nodiscard]] std::vector<double> row_marginal() const {
        std::vector<double> m(rows(), 0.0);
        for (std::size_t r = 0; r < rows(); ++r) {
            for (std::size_t c = 0; c < cols(); ++c) {
                m[r] += at(r, c);
            }
        }
        return m;
    }

    [[nodiscard]] std::vector<double> col_marginal() const {
        std::vector<double> m(cols(), 0.0);
        for (std::size_t r = 0; r < rows(); ++r) {
            for (std::size_t c = 0; c < cols(); ++c) {
                m[c] += at(r, c);
            }
        }
        return m;
    }
};

namespace detail {

inline std::vector<std::string> index_labels(std::size_t n, std::size_t base) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i + base));
    }
    return labels;
}

} // namespace detail

/**
 * Joint probabilities P(system = s, marker = b) for the basis {b0, b1}.
 *
 * MarkerFirst projects the marker on each basis vector and then reads the
 * residual system state; SystemFirst projects the system on each outcome
 * and then reads the conditional marker state. Outcomes with zero
 * probability contribute zero rows/columns.
 */
inline JointTable joint_distribution(const PureState &state, const MarkerPair &basis,
                                     Order order, std::vector<std::string> row_labels = {},
                                     std::vector<std::string> col_labels = {}) {
    if (!state.has_marker()) {
        throw Error(ErrorCode::NoMarker, "joint distribution needs a marked state");
    }
    const std::size_t n = state.dims().system;
    if (row_labels.empty()) {
        row_labels = detail::index_labels(n, 0);
    }
    if (col_labels.empty()) {
        col_labels = {"0", "1"};
    }
    if (row_labels.size() != n || col_labels.size() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "label count does not match the state");
    }
    JointTable table{std::move(row_labels), std::move(col_labels),
                     std::vector<double>(2 * n, 0.0)};
    const MarkerState *outcomes[2] = {&basis.first, &basis.second};

    if (order == Order::MarkerFirst) {
        for (std::size_t c = 0; c < 2; ++c) {
            try {
                const auto [residual, p] = project_marker(state, outcomes[c]->vector());
                const auto amps = residual.amplitudes();
                for (std::size_t s = 0; s < n; ++s) {
                    table.at(s, c) = p * std::norm(amps[s]);
                }
            } catch (const Error &e) {
                if (e.code() != ErrorCode::ZeroProbability) {
                    throw;
                }
            }
        }
    } else {
        for (std::size_t s = 0; s < n; ++s) {
            try {
                const auto [conditional, p] = project_system(state, s);
                for (std::size_t c = 0; c < 2; ++c) {
                    table.at(s, c) =
                        p * std::norm(inner_product(outcomes[c]->vector(), conditional));
                }
            } catch (const Error &e) {
                if (e.code() != ErrorCode::ZeroProbability) {
                    throw;
                }
            }
        }
    }
    return table;
}

inline JointTable joint_distribution(const PureState &state, const MarkerBasis &basis,
                                     Order order, std::vector<std::string> row_labels = {}) {
    return joint_distribution(state, basis.states(), order, std::move(row_labels),
                              {"plus", "minus"});
}

/// Largest entrywise difference between the two measurement orders.
inline double ordering_invariance_residual(const PureState &state, const MarkerPair &basis) {
    const auto a = joint_distribution(state, basis, Order::MarkerFirst);
    const auto b = joint_distribution(state, basis, Order::SystemFirst);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.probabilities.size(); ++i) {
        worst = std::max(worst, std::abs(a.probabilities[i] - b.probabilities[i]));
    }
    return worst;
}

inline double ordering_invariance_residual(const PureState &state, const MarkerBasis &basis) {
    return ordering_invariance_residual(state, basis.states());
}

/// Mutual information in nats, with 0 log 0 = 0.
inline double mutual_information(const JointTable &table) {
    const auto pr = table.row_marginal();
    const auto pc = table.col_marginal();
    double mi = 0.0;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.cols(); ++c) {
            const double p = table.at(r, c);
            if (p > 0.0) {
                mi += p * std::log(p / (pr[r] * pc[c]));
            }
        }
    }
    return std::max(0.0, mi);
}

// Spin-pair analogy ---------------------------------------------------------

enum class SpinBasis { Z, X };

/// Z: (up, down) = (d1, d2). X: (+, -) = erasure basis at theta = 0.
inline MarkerPair spin_basis(SpinBasis basis) {
    return basis == SpinBasis::Z ? which_path_basis() : erasure_basis(0.0).states();
}

inline std::vector<std::string> spin_labels(SpinBasis basis) {
    return basis == SpinBasis::Z ? std::vector<std::string>{"up", "down"}
                                 : std::vector<std::string>{"plus", "minus"};
}

/// (|up>|up> + |down>|down>) / sqrt(2); spin 1 is the system, spin 2 the marker.
inline PureState epr_state() { return make_state({2, 2}, {1.0, 0.0, 0.0, 1.0}); }

/// Rewrites a two-dimensional system in the given basis: a'(i, m) = <b_i|s> a(s, m).
inline PureState express_system_in(const PureState &state, const MarkerPair &basis) {
    if (state.dims().system != 2) {
        throw Error(ErrorCode::DimensionMismatch, "system must be two-dimensional");
    }
    const std::size_t md = state.dims().marker;
    const Qubit *vecs[2] = {&basis.first.vector(), &basis.second.vector()};
    std::vector<Complex> out(2 * md);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t m = 0; m < md; ++m) {
            out[i * md + m] = std::conj((*vecs[i])[0]) * state.amplitude(0, m) +
                              std::conj((*vecs[i])[1]) * state.amplitude(1, m);
        }
    }
    return make_state(state.dims(), std::move(out));
}

inline JointTable epr_correlation_table(SpinBasis basis1, SpinBasis basis2) {
    const auto rotated = express_system_in(epr_state(), spin_basis(basis1));
    return joint_distribution(rotated, spin_basis(basis2), Order::SystemFirst,
                              spin_labels(basis1), spin_labels(basis2));
}

// Event sampling ------------------------------------------------------------

struct EventRecord {
    std::string scenario_id;
    std::uint64_t event_index = 0;
    std::int64_t system_outcome = 0;
    std::int64_t marker_outcome = 0;
    Order order = Order::MarkerFirst;
    std::uint64_t seed = 0;

    friend bool operator==(const EventRecord &, const EventRecord &) = default;
};

namespace detail {

/// First index whose cumulative weight exceeds `target`, skipping
/// zero-weight outcomes when rounding pushes the target past the end.
inline std::size_t inverse_cdf(std::span<const double> cumulative, double target) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    if (it != cumulative.end()) {
        return static_cast<std::size_t>(it - cumulative.begin());
    }
    std::size_t i = cumulative.size() - 1;
    while (i > 0 && cumulative[i] == cumulative[i - 1]) {
        --i;
    }
    return i;
}

} // namespace detail

/**
 * Draws (system, marker) outcome pairs from a joint table by sequential
 * inverse-CDF sampling in the requested order: the first subsystem from
 * its marginal, then the second from its conditional. Each draw consumes
 * exactly two uniforms from its own SplitMix64 stream.
 */
class EventSampler {
  public:
    EventSampler(const JointTable &table, Order order, std::uint64_t seed)
        : rows_(table.rows()), cols_(table.cols()), order_(order), rng_(seed) {
        const std::size_t outer = order == Order::MarkerFirst ? cols_ : rows_;
        const std::size_t inner = order == Order::MarkerFirst ? rows_ : cols_;
        outer_cdf_.resize(outer);
        inner_cdf_.resize(outer * inner);
        double acc = 0.0;
        for (std::size_t o = 0; o < outer; ++o) {
            double within = 0.0;
            for (std::size_t i = 0; i < inner; ++i) {
                within += order == Order::MarkerFirst ? table.at(i, o) : table.at(o, i);
                inner_cdf_[o * inner + i] = within;
            }
            acc += within;
            outer_cdf_[o] = acc;
        }
        if (!(acc > 0.0)) {
            throw Error(ErrorCode::ZeroProbability, "joint table is empty");
        }
    }

    /// (system index, marker index), both 0-based.
    std::pair<std::size_t, std::size_t> next() {
        const std::size_t inner = order_ == Order::MarkerFirst ? rows_ : cols_;
        const double u1 = rng_.uniform01();
        const double u2 = rng_.uniform01();
        const std::size_t o = detail::inverse_cdf(outer_cdf_, u1 * outer_cdf_.back());
        const std::span<const double> row(inner_cdf_.data() + o * inner, inner);
        const std::size_t i = detail::inverse_cdf(row, u2 * row.back());
        return order_ == Order::MarkerFirst ? std::pair{i, o} : std::pair{o, i};
    }

  private:
    std::size_t rows_;
    std::size_t cols_;
    Order order_;
    SplitMix64 rng_;
    std::vector<double> outer_cdf_;
    std::vector<double> inner_cdf_;
};

struct SampleRequest {
    std::string scenario_id;
    Order order = Order::MarkerFirst;
    std::size_t count = 1;
    std::uint64_t seed = 0;
    /// Added to 0-based system indices in the records (1 for detectors).
    std::int64_t system_label_base = 0;
};

inline std::vector<EventRecord> sample_events(const JointTable &table, const SampleRequest &req) {
    if (req.count < 1) {
        throw Error(ErrorCode::InvalidCount, "event count must be at least 1");
    }
    EventSampler sampler(table, req.order, req.seed);
    std::vector<EventRecord> events;
    events.reserve(req.count);
    for (std::size_t i = 0; i < req.count; ++i) {
        const auto [s, m] = sampler.next();
        events.push_back({req.scenario_id, i,
                          static_cast<std::int64_t>(s) + req.system_label_base,
                          static_cast<std::int64_t>(m), req.order, req.seed});
    }
    return events;
}

inline std::vector<EventRecord> sample_events(const PureState &state, const MarkerPair &basis,
                                              const SampleRequest &req) {
    return sample_events(joint_distribution(state, basis, req.order), req);
}

inline void write_event_log(std::ostream &os, std::span<const EventRecord> events) {
    os << "scenario_id,event_index,system_outcome,marker_outcome,order,seed\n";
    for (const auto &e : events) {
        os << e.scenario_id << ',' << e.event_index << ',' << e.system_outcome << ','
           << e.marker_outcome << ',' << to_string(e.order) << ',' << e.seed << '\n';
    }
}

/// Counts per (system, marker) cell, in the table's layout.
inline std::vector<std::uint64_t> tally(std::span<const EventRecord> events, std::size_t rows,
                                        std::size_t cols, std::int64_t system_label_base = 0) {
    std::vector<std::uint64_t> counts(rows * cols, 0);
    for (const auto &e : events) {
        const auto r = static_cast<std::size_t>(e.system_outcome - system_label_base);
        counts.at(r * cols + static_cast<std::size_t>(e.marker_outcome)) += 1;
    }
    return counts;
}

struct ChiSquareResult {
    double statistic;
    double degrees_of_freedom;
    double critical_value;
    bool passed;
};

/**
 * Pearson goodness-of-fit of observed counts against a probability table.
 * Cells with expected count below `min_expected` are pooled into one cell;
 * cells with zero probability must stay empty.
 */
inline ChiSquareResult chi_square_test(const JointTable &table,
                                       std::span<const std::uint64_t> counts,
                                       double confidence = 0.999, double min_expected = 5.0) {
    if (counts.size() != table.probabilities.size()) {
        throw Error(ErrorCode::DimensionMismatch, "count table shape");
    }
    double n = 0.0;
    for (auto c : counts) {
        n += static_cast<double>(c);
    }
    double stat = 0.0;
    std::size_t cells = 0;
    double pooled_expected = 0.0;
    double pooled_observed = 0.0;
    bool impossible = false;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = n * table.probabilities[i];
        const auto observed = static_cast<double>(counts[i]);
        if (table.probabilities[i] <= 0.0) {
            impossible = impossible || observed > 0.0;
            continue;
        }
        if (expected < min_expected) {
            pooled_expected += expected;
            pooled_observed += observed;
            continue;
        }
        stat += (observed - expected) * (observed - expected) / expected;
        ++cells;
    }
    if (pooled_expected > 0.0) {
        stat += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) /
                pooled_expected;
        ++cells;
    }
    const double dof = static_cast<double>(std::max<std::size_t>(cells, 2) - 1);
    const boost::math::chi_squared_distribution<double> dist(dof);
    const double critical = boost::math::quantile(dist, confidence);
    return {stat, dof, critical, !impossible && stat <= critical};
}

} // namespace qeraser::analysis
