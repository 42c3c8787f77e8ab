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

#include <cmath>
#include <numbers>

#include <catch_amalgamated.hpp>

#include "qeraser/marker.hpp"

using namespace qeraser;
using Catch::Matchers::WithinAbs;

TEST_CASE("which_path_basis is canonical", "[marker]") {
    const auto [d1, d2] = which_path_basis();
    CHECK(d1.c1() == Complex(1.0));
    CHECK(d1.c2() == Complex(0.0));
    CHECK(d2.c1() == Complex(0.0));
    CHECK(d2.c2() == Complex(1.0));
    CHECK(std::abs(inner_product(d1, d2)) == 0.0);
}

TEST_CASE("projecting the entangled state on d1 isolates path A", "[marker]") {
    const auto state = make_state({2, 2}, {1.0, 0.0, 0.0, 1.0});
    const auto [d1, d2] = which_path_basis();
    const auto [residual, p] = project_marker(state, d1.vector());
    CHECK_THAT(p, WithinAbs(0.5, kTolerance));
    CHECK(std::abs(residual.amplitude(1)) == 0.0);
}

TEST_CASE("erasure_basis follows the e^{+i theta}, e^{-i theta} convention", "[marker]") {
    const double s = 1.0 / std::numbers::sqrt2;
    const auto b0 = erasure_basis(0.0);
    CHECK_THAT(b0.plus.c1().real(), WithinAbs(s, 1e-15));
    CHECK_THAT(b0.plus.c2().real(), WithinAbs(s, 1e-15));
    CHECK_THAT(b0.minus.c2().real(), WithinAbs(-s, 1e-15));

    const auto b = erasure_basis(std::numbers::pi / 2);
    CHECK_THAT(std::abs(b.plus.c1() - Complex(0.0, s)), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(b.plus.c2() - Complex(0.0, -s)), WithinAbs(0.0, 1e-15));
    CHECK(b.theta == std::numbers::pi / 2);
}

TEST_CASE("erasure bases are unbiased against which-path for every theta", "[marker]") {
    // Brute force: 100 phases in [-2 pi, 2 pi], overlaps computed componentwise.
    const auto [d1, d2] = which_path_basis();
    for (int i = 0; i < 100; ++i) {
        const double theta = -2 * std::numbers::pi + 4 * std::numbers::pi * i / 99.0;
        const auto b = erasure_basis(theta);
        const Complex ov = std::conj(d1.c1()) * b.plus.c1() + std::conj(d1.c2()) * b.plus.c2();
        CHECK_THAT(std::norm(ov), WithinAbs(0.5, kTolerance));
        CHECK_THAT(overlap_probability(d2, b.minus), WithinAbs(0.5, kTolerance));
        CHECK_THAT(std::abs(inner_product(b.plus, b.minus)), WithinAbs(0.0, kTolerance));
    }
}

TEST_CASE("mutual_unbiasedness_check", "[marker]") {
    const auto wp = which_path_basis();
    CHECK(mutual_unbiasedness_check(erasure_basis(0.0), wp) < kTolerance);
    CHECK(mutual_unbiasedness_check(erasure_basis(1.234), wp) < kTolerance);
    CHECK_THAT(mutual_unbiasedness_check(wp, wp), WithinAbs(0.5, kTolerance));
}

TEST_CASE("theta + pi flips the global sign of both elements", "[marker]") {
    for (double theta : {0.0, 0.3, -1.7, 12.5}) {
        const auto a = erasure_basis(theta);
        const auto b = erasure_basis(theta + std::numbers::pi);
        CHECK_THAT(std::abs(a.plus.c1() + b.plus.c1()), WithinAbs(0.0, 1e-14));
        CHECK_THAT(std::abs(a.minus.c2() + b.minus.c2()), WithinAbs(0.0, 1e-14));
        CHECK_THAT(overlap_probability(a.plus, b.plus), WithinAbs(1.0, kTolerance));
        CHECK_THAT(overlap_probability(a.plus, b.minus), WithinAbs(0.0, kTolerance));
    }
}

TEST_CASE("marker errors", "[marker][errors]") {
    CHECK_THROWS_AS(erasure_basis(std::nan("")), Error);
    CHECK_THROWS_AS(erasure_basis(INFINITY), Error);
    try {
        MarkerState(1.0, 1.0);
        FAIL("unnormalized marker accepted");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NotNormalized);
    }
}
