// SPDX-License-Identifier: Apache-2.0
//
// otatrp - over-the-air total radiated power assessment toolkit
// Copyright (C) 2026 The otatrp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include "otatrp/sources.hpp"

#include <random>

using namespace otatrp;
using Catch::Approx;

TEST_CASE("element patterns integrate to unit power")
{
    for (const auto &e : {ElementModel::isotropic(), ElementModel::hertz_dipole(), ElementModel::half_wave_dipole(),
                          ElementModel::cosine_taper(1), ElementModel::cosine_taper(3)})
    {
        const double t = trp_dense([&](const Direction &d) { return e.power(d); }, 80, 160);
        CHECK(t == Approx(1.0).epsilon(1e-8));
    }
    CHECK(ElementModel::half_wave_constant() == Approx(1.6409).epsilon(1e-4));
    CHECK(ElementModel::half_wave_dipole().power(Direction(0.0, 0.0)) == 0.0);
    CHECK(ElementModel::cosine_taper(1).power(Direction(pi / 2.0, pi)) == 0.0);
}

TEST_CASE("uniform quadratic array geometry")
{
    const double lam = 1.0, k = two_pi;
    CHECK(row_count_bound(10.0 * lam, lam) == 16);
    const auto a = uniform_quadratic_array(lam, 2, k);
    REQUIRE(a.size() == 4);
    for (const auto &p : a.positions)
    {
        CHECK(p.x == 0.0);
        CHECK(std::abs(p.y) == Approx(std::sqrt(2.0) / 4.0));
    }
    for (int n = 2; n <= 15; ++n)
        CHECK(uniform_quadratic_array(10.0, n, k).sphere_radius() == Approx(5.0).epsilon(1e-12));
    CHECK_THROWS_AS(uniform_quadratic_array(10.0, 16, k), std::invalid_argument);
    CHECK_THROWS_AS(uniform_quadratic_array(10.0, 1, k), std::invalid_argument);
}

TEST_CASE("correlated weights have the prescribed moments")
{
    std::mt19937_64 rng(8);
    const auto one = correlated_weights(5, 1.0, rng);
    for (const auto &w : one)
        CHECK(w == cplx(1.0, 0.0));
    CHECK_THROWS_AS(correlated_weights(3, 1.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(correlated_weights(3, -0.1, rng), std::invalid_argument);
    for (double rho : {0.0, 0.2})
    {
        const int n = 100000;
        cplx cross{};
        double self = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const auto w = correlated_weights(2, rho, rng);
            cross += std::conj(w[0]) * w[1];
            self += std::norm(w[0]);
        }
        CHECK(std::abs(cross / double(n) - rho) < 0.02);
        CHECK(self / n == Approx(1.0).margin(0.02));
    }
}

TEST_CASE("array patterns")
{
    PointSourceArray one{{{0, 0, 0}}, {1.0}, two_pi};
    CHECK(eirp_pattern(one, ElementModel::isotropic(), Direction(0.3, 1.0)) == Approx(1.0));
    PointSourceArray two{{{0, 0, -0.25}, {0, 0, 0.25}}, {1.0, 1.0}, two_pi};
    CHECK(eirp_pattern(two, Direction(pi / 2.0, 0.0)) == Approx(4.0));
    CHECK(eirp_pattern(two, Direction(0.0, 0.0)) == Approx(0.0).margin(1e-24));

    auto ua = uniform_quadratic_array(4.0, 5, two_pi);
    CHECK(eirp_pattern(ua, Direction(pi / 2.0, 0.0)) == Approx(625.0));
}

TEST_CASE("dense quadrature agrees with the sinc mutual-power oracle")
{
    std::mt19937_64 rng(21);
    for (double D : {4.0, 10.0, 20.0})
        for (int n_row : {2, 5, 10})
        {
            if (quadratic_array_spacing(D, n_row) < 0.5)
                continue;
            auto a = uniform_quadratic_array(D, n_row, two_pi);
            a.weights = correlated_weights(a.size(), 0.3, rng);
            const double exact = trp_sinc_oracle(a);
            CHECK(trp_dense(a, ElementModel::isotropic()) == Approx(exact).epsilon(1e-9));
            // rotation invariance
            const auto r = random_rotation(rng);
            const double t = trp_dense([&](const Direction &d) { return rotated_pattern(a, r, d); },
                                       dense_half_nodes(a.k * a.sphere_radius()),
                                       dense_azimuth_nodes(a.k * a.sphere_radius()));
            CHECK(t == Approx(exact).epsilon(1e-9));
        }
}

TEST_CASE("rotated pattern")
{
    std::mt19937_64 rng(2);
    auto a = uniform_quadratic_array(3.0, 4, two_pi);
    a.weights = correlated_weights(a.size(), 0.0, rng);
    const RotationMatrix id;
    const RotationMatrix q = rotation_matrix({0, 0, 1}, pi / 2.0);
    for (double th : {0.4, 1.3, 2.2})
        for (double ph : {-2.0, 0.1, 1.7})
        {
            const Direction d(th, ph);
            CHECK(rotated_pattern(a, id, d) == Approx(eirp_pattern(a, d)).epsilon(1e-12));
            CHECK(rotated_pattern(a, q, Direction(th, ph + pi / 2.0)) == Approx(eirp_pattern(a, d)).epsilon(1e-10));
        }
}

TEST_CASE("beam grid and steering")
{
    const BeamGrid g;
    CHECK(g.count() == 45);
    CHECK(g.azimuth_span_deg() == 80.0);
    CHECK(g.elevation_span_deg() == 40.0);
    CHECK_THROWS_AS(g.direction(45), std::out_of_range);
    const int centre = 2 * 9 + 4;
    CHECK(g.azimuth(centre) == 0.0);
    CHECK(g.elevation(centre) == 0.0);
    auto a = planar_array(8, 8, 0.5, 0.5, two_pi);
    const auto w0 = steering_weights(g, centre, a.positions, a.k);
    for (const auto &w : w0)
        CHECK(std::abs(w - cplx(1.0, 0.0)) < 1e-15);

    // Steered beam peaks at the commanded direction at the fundamental
    const int idx = 3 * 9 + 7;
    const auto b = a.with_weights(steering_weights(g, idx, a.positions, a.k));
    CHECK(eirp_pattern(b, Direction::from_vector(g.direction(idx))) == Approx(64.0 * 64.0));

    // Sweep average is linear in the per-beam patterns
    std::vector<std::vector<cplx>> beams;
    for (int i = 0; i < g.count(); ++i)
        beams.push_back(steering_weights(g, i, a.positions, a.k));
    const auto e = ElementModel::cosine_taper(1);
    const auto h3 = a.at_harmonic(3);
    double mean = 0.0;
    for (const auto &w : beams)
        mean += trp_dense(h3.with_weights(w), e);
    mean /= g.count();
    const double kr = h3.k * h3.sphere_radius();
    const double avg = trp_dense([&](const Direction &d) { return sweep_average_pattern(h3, e, beams, d); },
                                 dense_half_nodes(kr), dense_azimuth_nodes(kr));
    CHECK(avg == Approx(mean).epsilon(1e-10));
    CHECK(sweep_average_pattern(a, e, {beams[5]}, Direction(1.2, 0.3)) ==
          Approx(eirp_pattern(a.with_weights(beams[5]), e, Direction(1.2, 0.3))));
}
