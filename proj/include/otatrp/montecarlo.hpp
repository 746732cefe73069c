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

#ifndef OTATRP_MONTECARLO_HPP
#define OTATRP_MONTECARLO_HPP

#include "otatrp/nearfield.hpp"
#include "otatrp/sampling.hpp"
#include "otatrp/sources.hpp"
#include "otatrp/swe.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

// Monte Carlo drivers for the sparse-sampling studies, the beam-sweep study and the near-field error study.
// Every sample draws from its own generator seeded from (seed, stream, sample index), so results do not depend
// on the number of worker threads.

namespace otatrp::mc
{
    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
    {
        return std::mt19937_64(splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index));
    }

    inline unsigned resolve_threads(unsigned requested)
    {
        if (requested > 0)
            return requested;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : hw;
    }

    /// Runs fn(i) for i in [0, n) on up to `threads` workers; the first exception is rethrown.
    inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &fn)
    {
        const unsigned t = std::max(1u, std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(n, 1))));
        if (t == 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr err;
        std::mutex err_mutex;
        std::vector<std::thread> pool;
        pool.reserve(t);
        for (unsigned w = 0; w < t; ++w)
            pool.emplace_back([&]
                              {
                                  for (;;)
                                  {
                                      const std::size_t i = next.fetch_add(1);
                                      if (i >= n)
                                          return;
                                      try
                                      {
                                          fn(i);
                                      }
                                      catch (...)
                                      {
                                          std::lock_guard<std::mutex> lk(err_mutex);
                                          if (!err)
                                              err = std::current_exception();
                                          next.store(n);
                                          return;
                                      }
                                  }
                              });
        for (auto &th : pool)
            th.join();
        if (err)
            std::rethrow_exception(err);
    }

    /// Sorted error samples [dB] with nearest-rank queries.
    class EmpiricalCdf
    {
    public:
        EmpiricalCdf() = default;
        explicit EmpiricalCdf(std::vector<double> samples) : s_(std::move(samples)) { std::sort(s_.begin(), s_.end()); }

        const std::vector<double> &samples() const { return s_; }
        std::size_t size() const { return s_.size(); }
        bool empty() const { return s_.empty(); }

        /// Nearest rank: the ceil(p/100 N)-th smallest sample.
        double query(double p) const
        {
            if (s_.empty())
                throw std::invalid_argument("EmpiricalCdf: empty sample set");
            if (!(p > 0.0 && p < 100.0))
                throw std::invalid_argument("EmpiricalCdf: percentile must lie in (0, 100)");
            auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(s_.size()) - 1e-9));
            rank = std::clamp<std::size_t>(rank, 1, s_.size());
            return s_[rank - 1];
        }

    private:
        std::vector<double> s_;
    };

    inline double cdf_percentile(const EmpiricalCdf &cdf, double p) { return cdf.query(p); }

    /// Margin from a lower percentile: |p| if negative, else 0.
    inline double margin_from_percentile(double p_db) { return p_db < 0.0 ? -p_db : 0.0; }

    struct StudyConfig
    {
        std::string kind = "sparse";
        std::size_t n_samples = 10000;
        std::uint64_t seed = 1;
        unsigned threads = 0;
        double percentile = 5.0;
        std::vector<double> sizes = {5.0, 10.0, 20.0};                          // D / lambda
        std::vector<double> rho_max = {0.0, 0.2, 0.5};
        std::vector<double> sf = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
        std::vector<GridVariant> grids = {GridVariant::full_sphere, GridVariant::two_cuts, GridVariant::three_cuts};
        int order = 12;              // small-source truncation order
        double small_step_deg = 15.0;
        std::vector<int> harmonics = {1, 2, 3};
        std::vector<double> nearfield_offsets = {1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0, 5.0, 7.5, 10.0, 20.0,
                                                 50.0, 100.0, 1e3, 1e4, 1e5, 1e6}; // (r - R) / lambda

        void validate() const
        {
            if (n_samples < 1)
                throw std::invalid_argument("StudyConfig: n_samples must be >= 1");
            if (!(percentile > 0.0 && percentile <= 50.0))
                throw std::invalid_argument("StudyConfig: percentile must lie in (0, 50]");
            for (double r : rho_max)
                if (!(r >= 0.0 && r <= 1.0))
                    throw std::invalid_argument("StudyConfig: rho_max entries must lie in [0, 1]");
            for (double s : sf)
                if (!(s > 0.0))
                    throw std::invalid_argument("StudyConfig: SF entries must be positive");
            for (double d : sizes)
                if (!(d > 0.0))
                    throw std::invalid_argument("StudyConfig: sizes must be positive");
        }
    };

    // ---------------------------------------------------------------------------------------------
    // Small-source study
    // ---------------------------------------------------------------------------------------------

    struct GridResult
    {
        std::string grid;
        double step_deg = 0.0;
        EmpiricalCdf errors; // 10 log10(TRP_grid / TRP)
        double p_db = 0.0;
        double median_db = 0.0;
        double delta_trp_db = 0.0;
    };

    struct SmallSourceResult
    {
        std::vector<GridResult> grids;
        std::vector<int> mode_counts;
    };

    namespace detail
    {
        // Far-field contribution of every mode at every grid point: table[point][mode]
        struct ModeTable
        {
            std::size_t n_modes = 0;
            std::vector<TangentialField> t;
            const TangentialField &at(std::size_t p, std::size_t j) const { return t[p * n_modes + j]; }
        };

        inline ModeTable mode_table(const SamplingGrid &g, int L)
        {
            ModeTable mt;
            mt.n_modes = swe::SweCoefficients::mode_count(L);
            mt.t.resize(g.size() * mt.n_modes);
            const double nrm = std::sqrt(4.0 * pi);
            for (std::size_t p = 0; p < g.size(); ++p)
            {
                const Direction &d = g.points()[p].dir;
                const LegendreTable t(L, d.theta());
                for (int l = 1; l <= L; ++l)
                {
                    const cplx jl = std::pow(cplx(0.0, 1.0), l);
                    for (int m = -l; m <= l; ++m)
                    {
                        const ModeAngular a = mode_angular(t, l, m, std::polar(1.0, m * d.phi()));
                        mt.t[p * mt.n_modes + swe::SweCoefficients::index(l, m, 1)] = a.a1 * (nrm * jl * cplx(0.0, 1.0));
                        mt.t[p * mt.n_modes + swe::SweCoefficients::index(l, m, 2)] = a.a2 * (nrm * jl);
                    }
                }
            }
            return mt;
        }

        inline GridResult summarize(std::string name, double step_deg, std::vector<double> errs, double percentile)
        {
            GridResult r;
            r.grid = std::move(name);
            r.step_deg = step_deg;
            r.errors = EmpiricalCdf(std::move(errs));
            r.p_db = r.errors.query(percentile);
            r.median_db = r.errors.query(50.0);
            r.delta_trp_db = margin_from_percentile(r.p_db);
            return r;
        }
    } // namespace detail

    inline constexpr std::uint64_t stream_small = 0x51;
    inline constexpr std::uint64_t stream_sparse = 0x52;

    /// Random-mode sources of order L normalized to unit TRP, evaluated on the configured grids at a fixed step.
    inline SmallSourceResult run_small_source_study(const StudyConfig &cfg)
    {
        cfg.validate();
        const int L = cfg.order;
        const double step = cfg.small_step_deg * deg;
        std::vector<SamplingGrid> grids;
        for (auto v : cfg.grids)
            grids.push_back(v == GridVariant::full_sphere ? SamplingGrid::full_sphere(step, step)
                                                          : SamplingGrid::orthogonal_cuts(v == GridVariant::two_cuts ? 2 : 3, step));
        std::vector<detail::ModeTable> tables;
        for (const auto &g : grids)
            tables.push_back(detail::mode_table(g, L));
        const std::size_t J = swe::SweCoefficients::mode_count(L);

        const std::size_t n = cfg.n_samples;
        std::vector<std::vector<double>> errs(grids.size(), std::vector<double>(n));
        std::vector<int> counts(n);
        parallel_for(n, cfg.threads, [&](std::size_t s)
                     {
                         auto rng = sample_rng(cfg.seed, stream_small, s);
                         std::uniform_int_distribution<int> nd(1, static_cast<int>(J));
                         const int nm = nd(rng);
                         counts[s] = nm;
                         const auto c = swe::random_mode_coeffs(nm, rng, L);
                         std::vector<std::size_t> idx;
                         for (std::size_t j = 0; j < J; ++j)
                             if (c.data()[j] != cplx{})
                                 idx.push_back(j);
                         std::vector<double> vals;
                         for (std::size_t gi = 0; gi < grids.size(); ++gi)
                         {
                             vals.assign(grids[gi].size(), 0.0);
                             for (std::size_t p = 0; p < grids[gi].size(); ++p)
                             {
                                 TangentialField f;
                                 for (std::size_t j : idx)
                                     f = f + tables[gi].at(p, j) * c.data()[j];
                                 vals[p] = f.norm2();
                             }
                             errs[gi][s] = to_db(grids[gi].average(vals) / swe::trp_of(c));
                         }
                     });
        SmallSourceResult out;
        out.mode_counts = std::move(counts);
        for (std::size_t gi = 0; gi < grids.size(); ++gi)
            out.grids.push_back(detail::summarize(to_string(cfg.grids[gi]), cfg.small_step_deg, std::move(errs[gi]), cfg.percentile));
        return out;
    }

    // ---------------------------------------------------------------------------------------------
    // Large-array study
    // ---------------------------------------------------------------------------------------------

    /// Randomized uniform quadratic array of one Monte Carlo sample.
    struct ArraySample
    {
        int n_row = 0;
        double spacing = 0.0; // m
        double rho = 0.0;
        RotationMatrix rotation;
        std::vector<cplx> weights; // row-major [i * n_row + j], normalized to unit TRP
    };

    /// Draw n_row ~ U{2..10} (resampled until spacing >= lambda/2), rotation, rho ~ U(0, rho_max), weights.
    template <class Urbg>
    ArraySample draw_array_sample(double diameter, double rho_max, double k, Urbg &rng)
    {
        const double lambda = two_pi / k;
        if (quadratic_array_spacing(diameter, 2) < 0.5 * lambda)
            throw std::invalid_argument("draw_array_sample: no feasible row count for this size");
        std::uniform_int_distribution<int> nr(2, 10);
        ArraySample s;
        do
            s.n_row = nr(rng);
        while (quadratic_array_spacing(diameter, s.n_row) < 0.5 * lambda * (1.0 - 1e-12));
        s.spacing = quadratic_array_spacing(diameter, s.n_row);
        s.rotation = random_rotation(rng);
        std::uniform_real_distribution<double> ur(0.0, rho_max);
        s.rho = rho_max > 0.0 ? ur(rng) : 0.0;
        s.weights = correlated_weights(static_cast<std::size_t>(s.n_row * s.n_row), s.rho, rng);
        PointSourceArray a = uniform_quadratic_array(diameter, s.n_row, k);
        a.weights = s.weights;
        const double t = trp_sinc_oracle(rotated(a, s.rotation));
        const double scale = 1.0 / std::sqrt(t);
        for (auto &w : s.weights)
            w *= scale;
        return s;
    }

    inline PointSourceArray to_array(const ArraySample &s, double diameter, double k)
    {
        PointSourceArray a = uniform_quadratic_array(diameter, s.n_row, k);
        a.weights = s.weights;
        return rotated(a, s.rotation);
    }

    /// EIRP of a sample at the given unit vectors, exploiting the separable lattice phase in the array frame.
    inline void quadratic_array_eirp(const ArraySample &s, double k, const std::vector<Vec3> &dirs, std::vector<double> &out)
    {
        const int n = s.n_row;
        const double c = 0.5 * (n - 1);
        const RotationMatrix rt = s.rotation.transposed();
        out.resize(dirs.size());
        std::vector<cplx> p(static_cast<std::size_t>(n)), q(p.size());
        for (std::size_t i = 0; i < dirs.size(); ++i)
        {
            const Vec3 r = rt * dirs[i];
            const double au = k * s.spacing * r.y, av = k * s.spacing * r.z;
            const cplx su = std::polar(1.0, au), sv = std::polar(1.0, av);
            cplx pu = std::polar(1.0, -c * au), pv = std::polar(1.0, -c * av);
            for (int a = 0; a < n; ++a)
            {
                p[a] = pu;
                q[a] = pv;
                pu *= su;
                pv *= sv;
            }
            cplx af{};
            for (int a = 0; a < n; ++a)
            {
                cplx row{};
                const cplx *w = &s.weights[static_cast<std::size_t>(a * n)];
                for (int b = 0; b < n; ++b)
                    row += w[b] * q[b];
                af += p[a] * row;
            }
            out[i] = std::norm(af);
        }
    }

    struct SparseRow
    {
        std::string grid;
        double d_over_lambda = 0.0;
        double rho_max = 0.0;
        double sf_requested = 0.0;
        double sf = 0.0; // realized (radius convention)
        double sf_max = 0.0;
        double step_deg = 0.0;
        double p_db = 0.0, median_db = 0.0, delta_trp_db = 0.0;
        double margin_db = 0.0; // proposed table value at the realized SF
        std::size_t n = 0;
        EmpiricalCdf errors;
    };

    struct SparseResult
    {
        std::vector<SparseRow> rows;
    };

    /// Unit TRP randomized arrays on every (grid, SF) for each size and rho_max. Wavelength 1 m.
    inline SparseResult run_large_array_study(const StudyConfig &cfg)
    {
        cfg.validate();
        const double k = two_pi, lambda = 1.0;
        SparseResult out;
        std::uint64_t combo = 0;
        for (double D : cfg.sizes)
        {
            const auto ref = reference_steps(D / 2.0, D / 2.0, lambda);
            const double sfm = sparsity_factor_max(ref);
            struct Entry
            {
                GridVariant v;
                double sf_req;
                SamplingGrid g;
                std::vector<Vec3> dirs;
            };
            std::vector<Entry> entries;
            for (auto v : cfg.grids)
                for (double sf : cfg.sf)
                {
                    Entry e{v, sf, grid_for_sf(v, sf, ref), {}};
                    for (const auto &p : e.g.points())
                        e.dirs.push_back(unit_radial(p.dir));
                    entries.push_back(std::move(e));
                }
            for (double rm : cfg.rho_max)
            {
                const std::size_t n = cfg.n_samples;
                std::vector<std::vector<double>> errs(entries.size(), std::vector<double>(n));
                const std::uint64_t stream = stream_sparse ^ (splitmix64(combo++) << 8);
                parallel_for(n, cfg.threads, [&](std::size_t s)
                             {
                                 auto rng = sample_rng(cfg.seed, stream, s);
                                 const auto smp = draw_array_sample(D * lambda, rm, k, rng);
                                 std::vector<double> vals;
                                 for (std::size_t e = 0; e < entries.size(); ++e)
                                 {
                                     quadratic_array_eirp(smp, k, entries[e].dirs, vals);
                                     errs[e][s] = to_db(entries[e].g.average(vals));
                                 }
                             });
                for (std::size_t e = 0; e < entries.size(); ++e)
                {
                    SparseRow row;
                    row.grid = to_string(entries[e].v);
                    row.d_over_lambda = D;
                    row.rho_max = rm;
                    row.sf_requested = entries[e].sf_req;
                    row.sf = sparsity_factor(entries[e].g, ref);
                    row.sf_max = sfm;
                    row.step_deg = entries[e].g.step_theta() / deg;
                    row.errors = EmpiricalCdf(std::move(errs[e]));
                    row.p_db = row.errors.query(cfg.percentile);
                    row.median_db = row.errors.query(50.0);
                    row.delta_trp_db = margin_from_percentile(row.p_db);
                    row.margin_db = (entries[e].v == GridVariant::full_sphere && !(sfm > 1.0))
                                        ? 0.0
                                        : delta_trp_margin(entries[e].v, row.sf, sfm);
                    row.n = n;
                    out.rows.push_back(std::move(row));
                }
            }
        }
        return out;
    }

    // ---------------------------------------------------------------------------------------------
    // Beam-sweep study
    // ---------------------------------------------------------------------------------------------

    struct BeamSweepCurve
    {
        int harmonic = 1;
        std::string grid;
        double sf_requested = 0.0, sf = 0.0;
        std::vector<double> beam_error_db; // per beam: 10 log10(TRP_grid / TRP)
        double average_error_db = 0.0;     // sweep-average pattern
    };

    struct BeamSweepResult
    {
        BeamGrid beams;
        std::vector<int> harmonics;
        std::vector<std::vector<double>> beam_trp;      // [harmonic][beam], W
        std::vector<std::vector<double>> beam_trp_db;   // normalized to the per-harmonic mean
        std::vector<double> mean_trp;                   // per harmonic
        std::vector<double> average_pattern_trp;        // dense TRP of the sweep-average pattern
        std::vector<int> argmax_beam;                   // per harmonic, lowest index among ties
        std::vector<BeamSweepCurve> curves;
    };

    /// Stand-in array for the beam-sweep study: 8 x 8, half-wavelength spacing at the fundamental, yz-plane.
    inline PointSourceArray beam_sweep_array(double k0 = two_pi)
    {
        const double half = 0.5 * two_pi / k0;
        return planar_array(8, 8, half, half, k0);
    }

    /// Per-beam and sweep-average TRP errors on full-sphere and two-cut grids at each harmonic.
    inline BeamSweepResult run_beam_sweep_study(const StudyConfig &cfg, const PointSourceArray &geometry = beam_sweep_array(),
                                                const ElementModel &element = ElementModel::cosine_taper(1),
                                                const BeamGrid &bg = BeamGrid{})
    {
        cfg.validate();
        BeamSweepResult res;
        res.beams = bg;
        res.harmonics = cfg.harmonics;
        const double k0 = geometry.k;
        std::vector<std::vector<cplx>> weights;
        for (int b = 0; b < bg.count(); ++b)
            weights.push_back(steering_weights(bg, b, geometry.positions, k0));
        const std::size_t nb = weights.size(), ne = geometry.size();

        // Per-beam EIRP at a set of directions, reusing the element phases across beams
        auto beam_eirp = [&](const PointSourceArray &a, const std::vector<Direction> &dirs, std::vector<std::vector<double>> &out)
        {
            out.assign(nb, std::vector<double>(dirs.size()));
            parallel_for(dirs.size(), cfg.threads, [&](std::size_t i)
                         {
                             const double pe = element.power(dirs[i]);
                             if (pe == 0.0)
                             {
                                 for (std::size_t b = 0; b < nb; ++b)
                                     out[b][i] = 0.0;
                                 return;
                             }
                             const Vec3 r = unit_radial(dirs[i]);
                             std::vector<cplx> ph(ne);
                             for (std::size_t n = 0; n < ne; ++n)
                                 ph[n] = std::polar(1.0, a.k * r.dot(a.positions[n]));
                             for (std::size_t b = 0; b < nb; ++b)
                             {
                                 cplx af{};
                                 for (std::size_t n = 0; n < ne; ++n)
                                     af += weights[b][n] * ph[n];
                                 out[b][i] = pe * std::norm(af);
                             }
                         });
        };

        for (int h : cfg.harmonics)
        {
            const PointSourceArray a = geometry.at_harmonic(h);
            const double kr = a.k * a.sphere_radius();
            // Dense TRP per beam
            const int nh = dense_half_nodes(kr), na = dense_azimuth_nodes(kr);
            const auto gl = gauss_legendre(nh, 0.0, 1.0);
            std::vector<Direction> dd;
            std::vector<double> dw;
            for (int side = 0; side < 2; ++side)
                for (std::size_t i = 0; i < gl.nodes.size(); ++i)
                {
                    const double t = std::acos(side == 0 ? gl.nodes[i] : -gl.nodes[i]);
                    for (int j = 0; j < na; ++j)
                    {
                        dd.push_back(direction_about_x(t, two_pi * (j + 0.5) / na));
                        dw.push_back(gl.weights[i] * two_pi / na / (4.0 * pi));
                    }
                }
            std::vector<std::vector<double>> dense;
            beam_eirp(a, dd, dense);
            std::vector<double> trp(nb, 0.0);
            double avg_trp = 0.0;
            for (std::size_t b = 0; b < nb; ++b)
                for (std::size_t i = 0; i < dd.size(); ++i)
                    trp[b] += dw[i] * dense[b][i];
            for (std::size_t i = 0; i < dd.size(); ++i)
            {
                double s = 0.0;
                for (std::size_t b = 0; b < nb; ++b)
                    s += dense[b][i];
                avg_trp += dw[i] * s / static_cast<double>(nb);
            }
            double mean = 0.0;
            for (double t : trp)
                mean += t;
            mean /= static_cast<double>(nb);
            std::vector<double> tdb;
            int arg = 0;
            for (std::size_t b = 0; b < nb; ++b)
            {
                tdb.push_back(to_db(trp[b] / mean));
                if (trp[b] > trp[static_cast<std::size_t>(arg)] * (1.0 + 1e-9))
                    arg = static_cast<int>(b);
            }
            res.beam_trp.push_back(trp);
            res.beam_trp_db.push_back(tdb);
            res.mean_trp.push_back(mean);
            res.average_pattern_trp.push_back(avg_trp);
            res.argmax_beam.push_back(arg);

            const auto ref = reference_steps(a.sphere_radius(), a.sphere_radius(), a.wavelength());
            for (auto v : cfg.grids)
            {
                if (v == GridVariant::three_cuts)
                    continue;
                for (double sf : cfg.sf)
                {
                    const auto g = grid_for_sf(v, sf, ref);
                    std::vector<Direction> gd;
                    for (const auto &p : g.points())
                        gd.push_back(p.dir);
                    std::vector<std::vector<double>> vals;
                    beam_eirp(a, gd, vals);
                    BeamSweepCurve cv;
                    cv.harmonic = h;
                    cv.grid = to_string(v);
                    cv.sf_requested = sf;
                    cv.sf = sparsity_factor(g, ref);
                    std::vector<double> avg(gd.size(), 0.0);
                    for (std::size_t b = 0; b < nb; ++b)
                    {
                        cv.beam_error_db.push_back(to_db(g.average(vals[b]) / trp[b]));
                        for (std::size_t i = 0; i < gd.size(); ++i)
                            avg[i] += vals[b][i] / static_cast<double>(nb);
                    }
                    cv.average_error_db = to_db(g.average(avg) / mean);
                    res.curves.push_back(std::move(cv));
                }
            }
        }
        return res;
    }

    // ---------------------------------------------------------------------------------------------
    // Near-field error study
    // ---------------------------------------------------------------------------------------------

    struct NearfieldArrayResult
    {
        std::string name;
        int n_y = 0, n_z = 0;
        double source_radius = 0.0; // m (lambda = 1 m)
        int order = 0;
        double trp = 0.0;
        std::vector<nearfield::DistanceError> rows;
        double max_err_db = 0.0;           // over all radii
        double max_err_beyond_3_db = 0.0;  // over r >= R + 3 lambda
        double max_backprop_err_db = 0.0;
    };

    inline std::vector<std::pair<int, int>> default_nearfield_arrays() { return {{1, 4}, {4, 4}, {8, 8}, {12, 12}}; }

    /// Vertical Hertz-dipole arrays (half-wavelength spacing, yz-plane) fitted with an SWE; flux-approximation and
    /// back-propagation TRP errors versus distance with dR = lambda.
    inline std::vector<NearfieldArrayResult> run_nearfield_error_study(const StudyConfig &cfg,
                                                                       const std::vector<std::pair<int, int>> &arrays = default_nearfield_arrays())
    {
        cfg.validate();
        std::vector<NearfieldArrayResult> out(arrays.size());
        parallel_for(arrays.size(), cfg.threads, [&](std::size_t i)
                     {
                         const auto [ny, nz] = arrays[i];
                         const auto a = planar_array(ny, nz, 0.5, 0.5, two_pi);
                         const auto c = nearfield::fit_swe(a, ElementModel::hertz_dipole());
                         NearfieldArrayResult r;
                         r.name = std::to_string(ny) + "x" + std::to_string(nz);
                         r.n_y = ny;
                         r.n_z = nz;
                         r.source_radius = c.source_radius();
                         r.order = c.order();
                         r.trp = swe::trp_of(c);
                         std::vector<double> radii;
                         for (double x : cfg.nearfield_offsets)
                             radii.push_back(c.source_radius() + x);
                         r.rows = nearfield::approximation_error_vs_distance(c, radii, 1.0);
                         for (const auto &e : r.rows)
                         {
                             r.max_err_db = std::max(r.max_err_db, e.err_db);
                             if (e.r_minus_R_over_lambda >= 3.0 - 1e-12)
                                 r.max_err_beyond_3_db = std::max(r.max_err_beyond_3_db, e.err_db);
                             r.max_backprop_err_db = std::max(r.max_backprop_err_db, e.backprop_err_db);
                         }
                         out[i] = std::move(r);
                     });
        return out;
    }

    // ---------------------------------------------------------------------------------------------
    // CSV output
    // ---------------------------------------------------------------------------------------------

    inline void write_small_csv(std::ostream &os, const SmallSourceResult &r)
    {
        os.precision(17);
        os << "grid,step_deg,delta_trp_db,p5_db,median_db,n\n";
        for (const auto &g : r.grids)
            os << g.grid << ',' << g.step_deg << ',' << g.delta_trp_db << ',' << g.p_db << ',' << g.median_db << ','
               << g.errors.size() << '\n';
    }

    inline void write_cdf_csv(std::ostream &os, const std::vector<std::pair<std::string, const EmpiricalCdf *>> &series)
    {
        os.precision(17);
        os << "series,error_db,cdf\n";
        for (const auto &[name, cdf] : series)
        {
            const auto &s = cdf->samples();
            for (std::size_t i = 0; i < s.size(); ++i)
                os << name << ',' << s[i] << ',' << static_cast<double>(i + 1) / static_cast<double>(s.size()) << '\n';
        }
    }

    inline void write_sparse_csv(std::ostream &os, const SparseResult &r)
    {
        os.precision(17);
        os << "grid,d_over_lambda,rho_max,sf_requested,sf,sf_diameter_convention,sf_max,step_deg,delta_trp_db,p5_db,"
              "median_db,margin_db,n\n";
        for (const auto &w : r.rows)
            os << w.grid << ',' << w.d_over_lambda << ',' << w.rho_max << ',' << w.sf_requested << ',' << w.sf << ','
               << 2.0 * w.sf << ',' << w.sf_max << ',' << w.step_deg << ',' << w.delta_trp_db << ',' << w.p_db << ','
               << w.median_db << ',' << w.margin_db << ',' << w.n << '\n';
    }

    inline void write_beam_sweep_csv(std::ostream &os, const BeamSweepResult &r)
    {
        os.precision(17);
        os << "harmonic,grid,sf_requested,sf,signal,error_db\n";
        for (const auto &c : r.curves)
        {
            for (std::size_t b = 0; b < c.beam_error_db.size(); ++b)
                os << c.harmonic << ',' << c.grid << ',' << c.sf_requested << ',' << c.sf << ",beam" << b << ','
                   << c.beam_error_db[b] << '\n';
            os << c.harmonic << ',' << c.grid << ',' << c.sf_requested << ',' << c.sf << ",average," << c.average_error_db
               << '\n';
        }
    }

    inline void write_beam_trp_csv(std::ostream &os, const BeamSweepResult &r)
    {
        os.precision(17);
        os << "harmonic,beam,az_deg,el_deg,trp_w,trp_rel_db\n";
        for (std::size_t hi = 0; hi < r.harmonics.size(); ++hi)
            for (int b = 0; b < r.beams.count(); ++b)
                os << r.harmonics[hi] << ',' << b << ',' << r.beams.azimuth(b) / deg << ',' << r.beams.elevation(b) / deg
                   << ',' << r.beam_trp[hi][static_cast<std::size_t>(b)] << ','
                   << r.beam_trp_db[hi][static_cast<std::size_t>(b)] << '\n';
    }

    inline void write_nearfield_csv(std::ostream &os, const std::vector<NearfieldArrayResult> &r)
    {
        os.precision(17);
        os << "array,r_over_lambda,r_minus_R_over_lambda,err_db,backprop_err_db\n";
        for (const auto &a : r)
            for (const auto &e : a.rows)
                os << a.name << ',' << e.r_over_lambda << ',' << e.r_minus_R_over_lambda << ',' << e.err_db << ','
                   << e.backprop_err_db << '\n';
    }

    inline void write_nearfield_summary_csv(std::ostream &os, const std::vector<NearfieldArrayResult> &r)
    {
        os.precision(17);
        os << "array,source_radius_over_lambda,order,max_err_db,max_err_beyond_3lambda_db,max_backprop_err_db\n";
        for (const auto &a : r)
            os << a.name << ',' << a.source_radius << ',' << a.order << ',' << a.max_err_db << ',' << a.max_err_beyond_3_db
               << ',' << a.max_backprop_err_db << '\n';
    }

} // namespace otatrp::mc

#endif
