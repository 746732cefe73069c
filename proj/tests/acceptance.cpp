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

// Acceptance run: one PASS/FAIL line per criterion with the measured figures. Exit status is the failure count.

#include "otatrp/otatrp.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>

using namespace otatrp;

namespace
{
    int failures = 0;

    struct Timer
    {
        std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
        double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
    };

    void report(int id, bool ok, const std::string &detail, double seconds)
    {
        std::printf("[%s] criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, detail.c_str(), seconds);
        std::fflush(stdout);
        if (!ok)
            ++failures;
    }

    double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

    std::string fmt(const char *f, double a)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, a);
        return buf;
    }

    // ------------------------------------------------------------------------------------------------

    void analytic_table()
    {
        Timer t;
        struct Case
        {
            std::function<double(const Direction &)> s;
            double two, three, pm, trp;
        };
        const std::vector<Case> cases = {
            {[](const Direction &d) { return std::pow(std::sin(d.theta()), 2); }, 3 * pi, 8 * pi / 3, 8 * pi / 3, 8 * pi / 3},
            {[](const Direction &d) { return std::pow(std::sin(d.theta()) * std::cos(d.phi()), 2); }, 2 * pi, 4 * pi / 3,
             8 * pi / 5, 4 * pi / 3}};
        const double step = 5.0 * deg;
        double worst = 0.0;
        for (const auto &c : cases)
        {
            const auto g2 = SamplingGrid::orthogonal_cuts(2, step);
            const auto g3 = SamplingGrid::orthogonal_cuts(3, step);
            const auto v2 = sample_grid(g2, c.s);
            const double two = 4 * pi * g2.average(v2);
            const double three = 4 * pi * trp_grid(c.s, g3);
            const auto [h, v] = cut_profiles(g2, v2);
            const double pm = 4 * pi * trp_pattern_multiplication(pattern_multiply(h, v));
            const double full = 4 * pi * trp_dense(c.s, 40, 80);
            worst = std::max({worst, rel(two, c.two), rel(three, c.three), rel(pm, c.pm), rel(full, c.trp)});
        }
        report(1, worst < 1e-4 && t.seconds() < 1.0, "analytic table, worst relative error " + fmt("%.2e", worst) + " (< 1e-4)",
               t.seconds());
    }

    void swe_round_trip()
    {
        Timer t;
        auto rng = mc::sample_rng(2024, 0xA2, 0);
        const int L = 12;
        const auto c = swe::random_mode_coeffs(static_cast<int>(swe::SweCoefficients::mode_count(L)), rng, L);
        auto g = swe::FarFieldGrid::for_order(L);
        g.sample_from(c);
        const auto back = swe::coeffs_from_farfield(g, L, c.wavenumber(), c.source_radius());
        double worst = 0.0;
        for (std::size_t i = 0; i < c.data().size(); ++i)
            worst = std::max(worst, std::abs(back.data()[i] - c.data()[i]) / std::abs(c.data()[i]));
        const double lam = c.wavelength();
        double flux_err = 0.0;
        for (double r : {c.source_radius() + lam, 1e3 * lam})
            flux_err = std::max(flux_err, rel(nearfield::integrate_flux(c, r).trp_true, swe::trp_of(c)));
        const bool ok = worst < 1e-8 && flux_err < 1e-4 && t.seconds() < 10.0;
        report(2, ok,
               "SWE round trip, max coefficient error " + fmt("%.2e", worst) + " (< 1e-8), flux vs Parseval " +
                   fmt("%.2e", flux_err) + " (< 1e-4)",
               t.seconds());
    }

    void small_source()
    {
        Timer t;
        mc::StudyConfig cfg;
        cfg.n_samples = 10000;
        cfg.seed = 1;
        cfg.order = 12;
        cfg.grids = {GridVariant::full_sphere, GridVariant::two_cuts};
        const auto r = mc::run_small_source_study(cfg);
        const double full = r.grids[0].delta_trp_db, two = r.grids[1].delta_trp_db;
        const bool ok = std::abs(two - 0.8) <= 0.2 && full <= 0.3 && t.seconds() < 300.0 &&
                        swe::SweCoefficients::mode_count(12) == 336;
        report(3, ok,
               "small sources, two-cut p5 magnitude " + fmt("%.3f", two) + " dB (0.8 +- 0.2), full sphere " + fmt("%.3f", full) +
                   " dB (<= 0.3)",
               t.seconds());
    }

    void large_array()
    {
        Timer t;
        mc::StudyConfig cfg;
        cfg.n_samples = 10000;
        cfg.seed = 1;
        cfg.sizes = {5.0, 10.0, 20.0};
        cfg.rho_max = {0.0, 0.2, 0.5};
        cfg.sf = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
        const auto r = mc::run_large_array_study(cfg);
        bool ok = true;
        double worst_excess = -1e9;
        std::string worst_row;
        double dense_10 = 0.0;
        for (const auto &w : r.rows)
        {
            double bound = 0.0;
            if (w.grid == "two_cuts")
                bound = 2.0;
            else if (w.grid == "three_cuts")
                bound = 1.5;
            else
                bound = std::max(0.0, (w.sf - 1.0) / (w.sf_max - 1.0)) + 0.3;
            const double excess = w.delta_trp_db - bound;
            if (excess > worst_excess)
            {
                worst_excess = excess;
                std::ostringstream os;
                os << w.grid << " D=" << w.d_over_lambda << " rho_max=" << w.rho_max << " SF=" << w.sf;
                worst_row = os.str();
            }
            ok = ok && excess <= 0.0;
            if (w.grid == "full_sphere" && w.d_over_lambda == 10.0 && w.rho_max == 0.2 && w.sf <= 1.0)
                dense_10 = std::max(dense_10, w.delta_trp_db);
        }
        ok = ok && dense_10 <= 0.1;
        report(4, ok,
               "large-array margins, worst (measured - bound) " + fmt("%+.3f", worst_excess) + " dB at " + worst_row +
                   "; D=10 rho_max=0.2 dense full sphere " + fmt("%.3f", dense_10) + " dB (<= 0.1)",
               t.seconds());
    }

    void pattern_multiplication()
    {
        Timer t;
        const auto a = planar_array(8, 8, 0.5, 0.5, two_pi);
        const auto e = ElementModel::half_wave_dipole();
        auto eirp = [&](const Direction &d) { return eirp_pattern(a, e, d); };
        const double dense = trp_dense(a, e);
        const auto ref = reference_steps(a.sphere_radius(), a.cylinder_radius(), a.wavelength());
        const auto g = grid_for_sf(GridVariant::two_cuts, 1.0, ref);
        const auto v = sample_grid(g, eirp);
        const double over = to_db(g.average(v) / dense);
        const auto [h, vc] = cut_profiles(g, v);
        const double pm = to_db(trp_pattern_multiplication(pattern_multiply(h, vc)) / dense);
        const bool ok = std::abs(over - 9.0) <= 1.5 && std::abs(pm) <= 0.2 && t.seconds() < 60.0;
        report(5, ok,
               "8x8 half-wave dipoles, two-cut overestimate " + fmt("%.2f", over) + " dB (9 +- 1.5), PM error " + fmt("%+.3f", pm) +
                   " dB (<= 0.2)",
               t.seconds());
    }

    void nearfield_dipoles()
    {
        Timer t;
        mc::StudyConfig cfg;
        const auto r = mc::run_nearfield_error_study(cfg);
        bool ok = t.seconds() < 600.0;
        std::ostringstream os;
        for (const auto &a : r)
        {
            ok = ok && a.max_err_beyond_3_db < 0.05 && a.max_backprop_err_db <= 0.1 * a.max_err_db;
            os << a.name << " " << fmt("%.4f", a.max_err_beyond_3_db) << "/" << fmt("%.1e", a.max_backprop_err_db) << " dB; ";
        }
        report(6, ok, "dipole arrays, flux error beyond R+3 lambda / back-propagation: " + os.str() + "(< 0.05, <= 0.1x max)",
               t.seconds());
    }

    void dipole_closed_form()
    {
        Timer t;
        double worst = 0.0;
        for (int n : {1, 2})
        {
            swe::SweCoefficients c(1, two_pi, 0.0);
            c.at(1, 0, n) = 1.0;
            for (int i = 0; i <= 200; ++i)
            {
                const double kr = std::pow(100.0, i / 200.0);
                const auto s = nearfield::flux_sample(c, kr / two_pi, Direction(1.0, 0.3));
                worst = std::max(worst, rel(s.s_ff / s.s_true, nearfield::dipole_flux_ratio(n, kr)));
            }
        }
        // One wavelength from the source and beyond the ratio decreases monotonically to 1
        const double at_lambda = std::max(std::abs(to_db(nearfield::dipole_flux_ratio(1, two_pi))),
                                          std::abs(to_db(nearfield::dipole_flux_ratio(2, two_pi))));
        const bool ok = worst < 1e-10 && at_lambda <= 0.1;
        report(7, ok,
               "l=1 flux ratios vs closed form " + fmt("%.2e", worst) + " (< 1e-10); worst deviation at r = lambda " +
                   fmt("%.4f", at_lambda) + " dB (<= 0.1)",
               t.seconds());
    }

    void probe_criteria()
    {
        Timer t;
        const bool dmin = nearfield::min_distance_resolution(3.0, 1.0, 8.0, 1.0) == 16.0 * 4.0 &&
                          nearfield::min_distance_resolution(14.15, 1.0, 8.0, 1.0) == 16.0 * 15.15;
        // 8 x 8 vertical half-wave dipoles, 4.3 cm by 30 cm at 28 GHz; lengths in wavelengths
        const double lam = 299792458.0 / 28e9;
        const auto a = planar_array(8, 8, 0.043 / 7.0 / lam, 0.30 / 7.0 / lam, two_pi);
        const auto c = nearfield::fit_swe(a, ElementModel::half_wave_dipole());
        const double R = c.source_radius();
        swe::SweCoefficients ref(1, two_pi, 0.0);
        ref.at(1, 0, 2) = 1.0;

        const auto p05 = nearfield::ProbeModel::with_width(0.5);
        const double cal05 = nearfield::calibrate_probe(p05, ref, 1000.0, 1.0);
        const Direction xaxis(pi / 2, 0.0);
        const double r1 = R + 1.0;
        const double radial = to_db(cal05 * nearfield::probe_power(p05, c, r1, xaxis, 1.0) /
                                    nearfield::flux_sample(c, r1, xaxis).s_true);

        const auto p125 = nearfield::ProbeModel::with_width(1.25);
        const double cal125 = nearfield::calibrate_probe(p125, ref, 1000.0, 1.0);
        const double r2 = 2.5 * (R + 1.0);
        std::vector<double> truth, probe;
        for (int i = 0; i < 120; ++i)
        {
            const Direction d(pi / 2, (3.0 * i - 180.0) * deg);
            truth.push_back(nearfield::flux_sample(c, r2, d).s_true);
            probe.push_back(cal125 * nearfield::probe_power(p125, c, r2, d, 1.0));
        }
        const double peak = *std::max_element(truth.begin(), truth.end());
        double hcut = 0.0;
        for (std::size_t i = 0; i < truth.size(); ++i)
            if (truth[i] >= 0.1 * peak)
                hcut = std::max(hcut, std::abs(to_db(probe[i] / truth[i])));

        const bool ok = dmin && std::abs(radial) <= 0.2 && hcut <= 0.5;
        report(8, ok,
               std::string("probe: 16(R+lambda) for w=8 lambda ") + (dmin ? "exact" : "WRONG") + "; w=0.5 lambda radial at R+lambda " +
                   fmt("%+.3f", radial) + " dB (<= 0.2); w=1.25 lambda horizontal cut within 10 dB of peak " + fmt("%.3f", hcut) +
                   " dB (<= 0.5)",
               t.seconds());
    }

    void beam_sweep()
    {
        Timer t;
        mc::StudyConfig cfg;
        cfg.harmonics = {1, 2, 3};
        cfg.sf = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
        cfg.grids = {GridVariant::full_sphere, GridVariant::two_cuts};
        const auto r = mc::run_beam_sweep_study(cfg);
        double lin = 0.0;
        for (std::size_t h = 0; h < r.harmonics.size(); ++h)
            lin = std::max(lin, rel(r.average_pattern_trp[h], r.mean_trp[h]));
        const bool argmax_differs = r.argmax_beam[1] != r.argmax_beam[2];
        double avg_worst = 0.0, beam_worst = 0.0;
        for (const auto &cv : r.curves)
            if (cv.harmonic == 3 && cv.grid == "two_cuts")
            {
                avg_worst = std::max(avg_worst, std::abs(cv.average_error_db));
                for (double e : cv.beam_error_db)
                    beam_worst = std::max(beam_worst, std::abs(e));
            }
        const bool ok = lin < 1e-10 && argmax_differs && avg_worst <= 3.0 && beam_worst > 6.0;
        report(9, ok,
               "beam sweep: linearity " + fmt("%.1e", lin) + "; argmax beam h=2 " + std::to_string(r.argmax_beam[1]) + ", h=3 " +
                   std::to_string(r.argmax_beam[2]) + "; h=3 two-cut sweep-average worst " + fmt("%.2f", avg_worst) +
                   " dB (<= 3), worst single beam " + fmt("%.2f", beam_worst) + " dB (> 6)",
               t.seconds());
    }

    void determinism()
    {
        Timer t;
        auto csv = [](const std::function<void(std::ostream &)> &w)
        {
            std::ostringstream os;
            w(os);
            return os.str();
        };
        bool ok = true;
        for (unsigned threads : {2u, 4u})
        {
            mc::StudyConfig a;
            a.seed = 77;
            a.n_samples = 300;
            a.sizes = {5.0, 10.0};
            a.rho_max = {0.5};
            a.sf = {1.0, 2.5};
            a.threads = 1;
            mc::StudyConfig b = a;
            b.threads = threads;
            ok = ok && csv([&](std::ostream &os) { mc::write_small_csv(os, mc::run_small_source_study(a)); }) ==
                           csv([&](std::ostream &os) { mc::write_small_csv(os, mc::run_small_source_study(b)); });
            ok = ok && csv([&](std::ostream &os) { mc::write_sparse_csv(os, mc::run_large_array_study(a)); }) ==
                           csv([&](std::ostream &os) { mc::write_sparse_csv(os, mc::run_large_array_study(b)); });
            a.harmonics = b.harmonics = {2};
            ok = ok && csv([&](std::ostream &os) { mc::write_beam_sweep_csv(os, mc::run_beam_sweep_study(a)); }) ==
                           csv([&](std::ostream &os) { mc::write_beam_sweep_csv(os, mc::run_beam_sweep_study(b)); });
            ok = ok && csv([&](std::ostream &os) { mc::write_nearfield_csv(os, mc::run_nearfield_error_study(a, {{1, 4}, {4, 4}})); }) ==
                           csv([&](std::ostream &os) { mc::write_nearfield_csv(os, mc::run_nearfield_error_study(b, {{1, 4}, {4, 4}})); });
        }
        report(10, ok, std::string("determinism: study CSVs at 1, 2 and 4 threads ") + (ok ? "byte-identical" : "DIFFER"),
               t.seconds());
    }
} // namespace

int main()
{
    analytic_table();
    swe_round_trip();
    small_source();
    large_array();
    pattern_multiplication();
    nearfield_dipoles();
    dipole_closed_form();
    probe_criteria();
    beam_sweep();
    determinism();
    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
