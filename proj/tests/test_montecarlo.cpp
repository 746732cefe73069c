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

#include "otatrp/montecarlo.hpp"

#include <catch_amalgamated.hpp>

#include <numeric>
#include <set>
#include <sstream>

using namespace otatrp;
using namespace otatrp::mc;
using Catch::Approx;

TEST_CASE("splitmix64 and per-sample generators")
{
    // First output of the reference generator seeded with 0
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    auto a = sample_rng(7, 1, 3), b = sample_rng(7, 1, 3), c = sample_rng(7, 1, 4), d = sample_rng(7, 2, 3);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
}

TEST_CASE("parallel_for visits every index once and rethrows")
{
    for (unsigned t : {1u, 3u, 8u})
    {
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), t, [&](std::size_t i) { hits[i] += 1; });
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
    CHECK_THROWS_AS(parallel_for(50, 4, [](std::size_t i)
                                 { if (i == 17) throw std::runtime_error("boom"); }),
                    std::runtime_error);
    parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("empirical CDF uses nearest rank")
{
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);
    std::reverse(v.begin(), v.end());
    const EmpiricalCdf cdf(v);
    CHECK(cdf_percentile(cdf, 5.0) == 5.0);
    CHECK(cdf_percentile(cdf, 50.0) == 50.0);
    CHECK(cdf_percentile(cdf, 0.5) == 1.0);
    CHECK(cdf_percentile(EmpiricalCdf({-3.0, 2.0, 1.0}), 5.0) == -3.0);
    CHECK_THROWS_AS(cdf_percentile(EmpiricalCdf(), 5.0), std::invalid_argument);
    CHECK_THROWS_AS(cdf_percentile(cdf, 0.0), std::invalid_argument);
    CHECK(margin_from_percentile(-0.8) == 0.8);
    CHECK(margin_from_percentile(0.1) == 0.0);
}

TEST_CASE("study config validation")
{
    StudyConfig c;
    CHECK_NOTHROW(c.validate());
    c.rho_max = {1.5};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = StudyConfig{};
    c.n_samples = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = StudyConfig{};
    c.sf = {0.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("array samples: unit TRP, feasible spacing, fast pattern agrees with the direct sum")
{
    for (double D : {2.0, 5.0, 10.0})
        for (std::size_t s = 0; s < 4; ++s)
        {
            auto rng = sample_rng(99, 5, s);
            const auto smp = draw_array_sample(D, 0.5, two_pi, rng);
            CHECK(smp.n_row >= 2);
            CHECK(smp.n_row <= 10);
            CHECK(smp.spacing >= 0.5 - 1e-12);
            CHECK(smp.rho >= 0.0);
            CHECK(smp.rho <= 0.5);
            const auto a = to_array(smp, D, two_pi);
            CHECK(trp_sinc_oracle(a) == Approx(1.0).epsilon(1e-12));
            std::vector<Vec3> dirs;
            std::vector<Direction> dd;
            for (int i = 0; i < 7; ++i)
            {
                dd.emplace_back(0.3 + 0.4 * i, 1.1 * i);
                dirs.push_back(unit_radial(dd.back()));
            }
            std::vector<double> fast;
            quadratic_array_eirp(smp, two_pi, dirs, fast);
            for (std::size_t i = 0; i < dd.size(); ++i)
                CHECK(fast[i] == Approx(eirp_pattern(a, dd[i])).epsilon(1e-10).margin(1e-12));
        }
    auto rng = sample_rng(1, 1, 1);
    CHECK_THROWS_AS(draw_array_sample(0.5, 0.0, two_pi, rng), std::invalid_argument);
}

TEST_CASE("grid nesting: dense full sphere agrees with the sinc oracle")
{
    // 1e-4 dB at D >= 10; at D = 5 the SF 0.5 grid sits at the band edge, so only the 1e-4 relative bound holds
    for (double D : {5.0, 10.0, 20.0})
    {
        const auto ref = reference_steps(D / 2.0, D / 2.0, 1.0);
        const auto g = grid_for_sf(GridVariant::full_sphere, 0.5, ref);
        std::vector<Vec3> dirs;
        for (const auto &p : g.points())
            dirs.push_back(unit_radial(p.dir));
        for (std::size_t s = 0; s < 20; ++s)
        {
            auto rng = sample_rng(3, 9, s);
            const auto smp = draw_array_sample(D, 0.5, two_pi, rng);
            std::vector<double> v;
            quadratic_array_eirp(smp, two_pi, dirs, v);
            if (D >= 10.0)
                CHECK(std::abs(to_db(g.average(v))) < 1e-4);
            else
                CHECK(g.average(v) == Approx(1.0).epsilon(1e-4));
        }
    }
}

TEST_CASE("small-source study is reproducible and thread-count independent")
{
    StudyConfig c;
    c.n_samples = 120;
    c.seed = 5;
    c.threads = 1;
    const auto a = run_small_source_study(c);
    c.threads = 4;
    const auto b = run_small_source_study(c);
    REQUIRE(a.grids.size() == 3);
    for (std::size_t g = 0; g < a.grids.size(); ++g)
        CHECK(a.grids[g].errors.samples() == b.grids[g].errors.samples());
    CHECK(a.mode_counts == b.mode_counts);
    for (int n : a.mode_counts)
    {
        CHECK(n >= 1);
        CHECK(n <= 336);
    }
    // Full-sphere errors are the smallest, two cuts the largest
    CHECK(a.grids[0].delta_trp_db < a.grids[2].delta_trp_db);
    CHECK(a.grids[2].delta_trp_db < a.grids[1].delta_trp_db);
    std::ostringstream os;
    write_small_csv(os, a);
    CHECK(os.str().rfind("grid,step_deg,delta_trp_db,p5_db,median_db,n\n", 0) == 0);
}

TEST_CASE("large-array study rows and determinism")
{
    StudyConfig c;
    c.n_samples = 40;
    c.seed = 8;
    c.sizes = {5.0};
    c.rho_max = {0.2};
    c.sf = {1.0, 2.0};
    c.threads = 1;
    const auto a = run_large_array_study(c);
    c.threads = 3;
    const auto b = run_large_array_study(c);
    REQUIRE(a.rows.size() == 6);
    std::ostringstream oa, ob;
    write_sparse_csv(oa, a);
    write_sparse_csv(ob, b);
    CHECK(oa.str() == ob.str());
    for (const auto &r : a.rows)
    {
        CHECK(r.n == 40);
        CHECK(r.sf <= r.sf_max * (1.0 + 1e-12));
        CHECK(r.step_deg <= 15.0 + 1e-9);
        CHECK(r.delta_trp_db >= 0.0);
    }
}

TEST_CASE("beam sweep: linearity of the sweep average and per-beam normalization")
{
    StudyConfig c;
    c.harmonics = {1, 2};
    c.sf = {1.0, 2.0};
    c.threads = 2;
    const auto r = run_beam_sweep_study(c);
    REQUIRE(r.harmonics.size() == 2);
    for (std::size_t h = 0; h < 2; ++h)
    {
        CHECK(r.average_pattern_trp[h] == Approx(r.mean_trp[h]).epsilon(1e-10));
        double mean_db = 0.0;
        for (double t : r.beam_trp_db[h])
            mean_db += from_db(t);
        CHECK(mean_db / 45.0 == Approx(1.0).epsilon(1e-12));
    }
    // Grid sweeps: full sphere and two cuts, per SF and harmonic
    CHECK(r.curves.size() == 2 * 2 * 2);
    for (const auto &cv : r.curves)
        CHECK(cv.beam_error_db.size() == 45);
    // Fundamental, dense grid: every beam accurate
    for (const auto &cv : r.curves)
        if (cv.harmonic == 1 && cv.grid == "full_sphere" && cv.sf_requested == 1.0)
            for (double e : cv.beam_error_db)
                CHECK(std::abs(e) < 0.05);
}

TEST_CASE("near-field study on a small array")
{
    StudyConfig c;
    c.nearfield_offsets = {1.0, 3.0, 100.0};
    const auto r = run_nearfield_error_study(c, {{1, 2}});
    REQUIRE(r.size() == 1);
    CHECK(r[0].name == "1x2");
    REQUIRE(r[0].rows.size() == 3);
    CHECK(r[0].max_err_db == Approx(r[0].rows[0].err_db));
    CHECK(r[0].max_err_beyond_3_db < r[0].max_err_db);
    std::ostringstream os;
    write_nearfield_csv(os, r);
    CHECK(os.str().rfind("array,r_over_lambda,r_minus_R_over_lambda,err_db,backprop_err_db\n", 0) == 0);
}
