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

#ifndef OTATRP_SWE_HPP
#define OTATRP_SWE_HPP

#include "otatrp/special.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <span>
#include <sstream>
#include <vector>

// Spherical wave expansion of radiated fields.
//
// Conventions: time dependence exp(+j w t), outgoing waves carried by h_l^(2), orthonormal Y_lm with
// Condon-Shortley phase. Coefficients a_lmn carry units sqrt(W) so that
//     TRP = sum_{n=1,2} sum_l sum_m |a_lmn|^2
// holds with unit constant. The fields are
//     E   = k sqrt(Z0)   sum [ a_lm1 f1 A_lm1 + a_lm2 (f2 A_lm2 + f3 A_lm3) ]
//     H   = j k / sqrt(Z0) sum [ a_lm1 (f2 A_lm2 + f3 A_lm3) + a_lm2 f1 A_lm1 ]
// which satisfy Maxwell's equations (curl E = -j w mu H) mode by mode.

namespace otatrp::swe
{
    /// Mode amplitudes a_lmn for l in [1, L], m in [-l, l], n in {1, 2}.
    class SweCoefficients
    {
    public:
        SweCoefficients() = default;
        SweCoefficients(int order, double wavenumber, double source_radius)
            : order_(order), k_(wavenumber), radius_(source_radius),
              a_(mode_count(order), cplx{})
        {
            if (order < 0)
                throw std::invalid_argument("SweCoefficients: order must be >= 0");
            if (!(wavenumber > 0.0))
                throw std::invalid_argument("SweCoefficients: wavenumber must be positive");
            if (!(source_radius >= 0.0))
                throw std::invalid_argument("SweCoefficients: source radius must be >= 0");
        }

        /// J = 2 (L^2 + 2L)
        static std::size_t mode_count(int order)
        {
            return order <= 0 ? 0 : 2 * static_cast<std::size_t>(order * order + 2 * order);
        }

        static std::size_t index(int l, int m, int n)
        {
            return 2 * static_cast<std::size_t>(l * l + l + m - 1) + static_cast<std::size_t>(n - 1);
        }

        /// Inverse of index(): linear index -> (l, m, n)
        static void unpack(std::size_t j, int &l, int &m, int &n)
        {
            n = static_cast<int>(j % 2) + 1;
            const int lm = static_cast<int>(j / 2) + 1; // = l*l + l + m
            l = static_cast<int>(std::floor(std::sqrt(static_cast<double>(lm))));
            while (l * l > lm)
                --l;
            while ((l + 1) * (l + 1) <= lm)
                ++l;
            m = lm - l * l - l;
        }

        int order() const { return order_; }
        double wavenumber() const { return k_; }
        double wavelength() const { return two_pi / k_; }
        double source_radius() const { return radius_; }

        cplx &at(int l, int m, int n)
        {
            check(l, m, n);
            return a_[index(l, m, n)];
        }
        cplx at(int l, int m, int n) const
        {
            check(l, m, n);
            return a_[index(l, m, n)];
        }

        std::span<cplx> data() { return a_; }
        std::span<const cplx> data() const { return a_; }

        bool finite() const
        {
            return std::all_of(a_.begin(), a_.end(), [](const cplx &v)
                               { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
        }

        /// Copy truncated at order lp (lp >= order keeps everything).
        SweCoefficients truncated(int lp) const
        {
            const int lt = std::clamp(lp, 0, order_);
            SweCoefficients out(lt, k_, radius_);
            std::copy_n(a_.begin(), out.a_.size(), out.a_.begin());
            return out;
        }

    private:
        void check(int l, int m, int n) const
        {
            if (l < 1 || l > order_ || std::abs(m) > l || n < 1 || n > 2)
                throw std::out_of_range("SweCoefficients: mode index out of range");
        }

        int order_ = 0;
        double k_ = two_pi;
        double radius_ = 0.0;
        std::vector<cplx> a_;
    };

    inline double trp_of(const SweCoefficients &c)
    {
        double s = 0.0;
        for (const auto &v : c.data())
            s += std::norm(v);
        return s;
    }

    /// Truncation order with the customary margin: ceil(k R) + margin.
    inline int default_order(double k, double source_radius, int margin = 10)
    {
        return static_cast<int>(std::ceil(k * source_radius)) + margin;
    }

    /// Field components at one point. Tangential parts are given in the (theta-hat, phi-hat) basis.
    struct FieldSample
    {
        double r = 1.0;
        Direction dir;
        TangentialField e_t, h_t;
        cplx e_r{}, h_r{};

        ComplexVec3 e_cartesian() const { return to_cartesian(e_t, dir) + e_r * unit_radial(dir); }
        ComplexVec3 h_cartesian() const { return to_cartesian(h_t, dir) + h_r * unit_radial(dir); }
    };

    namespace detail
    {
        // Mode sums of one polar ring: for each m the sums over l of the angular functions weighted by
        // per-order radial factors. Layout [m + L].
        struct RingModeSums
        {
            std::vector<cplx> t_theta, t_phi, rad;
        };

        // Accumulates sum_l [ b1 R1_l A1 + b2 (R2_l A2 + R3_l Y r-hat) ] for one ring, with (b1, b2) taken
        // from the coefficients either directly (swap = false) or swapped (swap = true).
        inline RingModeSums ring_sums(const SweCoefficients &c, const LegendreTable &t,
                                      std::span<const cplx> r1, std::span<const cplx> r2, std::span<const cplx> r3,
                                      bool swap)
        {
            const int L = c.order();
            RingModeSums s;
            s.t_theta.assign(2 * static_cast<std::size_t>(L) + 1, cplx{});
            s.t_phi.assign(s.t_theta.size(), cplx{});
            s.rad.assign(s.t_theta.size(), cplx{});
            const auto a = c.data();
            for (int l = 1; l <= L; ++l)
            {
                for (int m = -l; m <= l; ++m)
                {
                    cplx b1 = a[SweCoefficients::index(l, m, 1)];
                    cplx b2 = a[SweCoefficients::index(l, m, 2)];
                    if (swap)
                        std::swap(b1, b2);
                    if (b1 == cplx{} && b2 == cplx{})
                        continue;
                    const ModeAngular ang = mode_angular(t, l, m, cplx(1.0, 0.0));
                    const cplx c1 = b1 * r1[l], c2 = b2 * r2[l];
                    const auto im = static_cast<std::size_t>(m + L);
                    s.t_theta[im] += c1 * ang.a1.theta + c2 * ang.a2.theta;
                    s.t_phi[im] += c1 * ang.a1.phi + c2 * ang.a2.phi;
                    if (!r3.empty())
                        s.rad[im] += b2 * r3[l] * ang.y;
                }
            }
            return s;
        }

        inline std::vector<cplx> phase_powers(int L, double phi)
        {
            std::vector<cplx> e(2 * static_cast<std::size_t>(L) + 1);
            const cplx step = std::polar(1.0, phi);
            cplx cur = std::polar(1.0, -L * phi);
            for (std::size_t i = 0; i < e.size(); ++i)
            {
                e[i] = cur;
                cur *= step;
            }
            return e;
        }

        inline cplx synth(const std::vector<cplx> &sums, const std::vector<cplx> &ph)
        {
            cplx v{};
            for (std::size_t i = 0; i < sums.size(); ++i)
                v += sums[i] * ph[i];
            return v;
        }

        inline std::vector<cplx> farfield_factors(int L, int shift)
        {
            std::vector<cplx> f(static_cast<std::size_t>(L) + 1);
            for (int l = 0; l <= L; ++l)
            {
                const int p = ((l + shift) % 4 + 4) % 4;
                f[l] = p == 0 ? cplx(1, 0) : (p == 1 ? cplx(0, 1) : (p == 2 ? cplx(-1, 0) : cplx(0, -1)));
            }
            return f;
        }
    } // namespace detail

    /// E and H on a ring of constant (r, theta), one sample per requested azimuth.
    inline std::vector<FieldSample> evaluate_fields_ring(const SweCoefficients &c, double r, double theta,
                                                         std::span<const double> phis)
    {
        if (!(r > 0.0) || r < c.source_radius())
            throw std::domain_error("evaluate_fields: radius lies inside the minimum sphere of the source");
        if (!(theta >= 0.0 && theta <= pi))
            throw std::domain_error("evaluate_fields: theta must lie in [0, pi]");
        const int L = c.order();
        std::vector<FieldSample> out;
        out.reserve(phis.size());
        if (L == 0)
        {
            for (double ph : phis)
                out.push_back(FieldSample{r, Direction(theta, ph), {}, {}, {}, {}});
            return out;
        }
        const double k = c.wavenumber();
        const auto rf = radial_functions(L, k * r);
        const LegendreTable t(L, theta);
        const auto es = detail::ring_sums(c, t, rf.f1, rf.f2, rf.f3, false);
        const auto hs = detail::ring_sums(c, t, rf.f1, rf.f2, rf.f3, true);
        const double ce = k * std::sqrt(free_space_impedance);
        const cplx ch(0.0, k / std::sqrt(free_space_impedance));
        for (double ph : phis)
        {
            const auto p = detail::phase_powers(L, ph);
            FieldSample f;
            f.r = r;
            f.dir = Direction(theta, ph);
            f.e_t = {ce * detail::synth(es.t_theta, p), ce * detail::synth(es.t_phi, p)};
            f.e_r = ce * detail::synth(es.rad, p);
            f.h_t = {ch * detail::synth(hs.t_theta, p), ch * detail::synth(hs.t_phi, p)};
            f.h_r = ch * detail::synth(hs.rad, p);
            out.push_back(f);
        }
        return out;
    }

    inline FieldSample evaluate_fields(const SweCoefficients &c, double r, const Direction &d)
    {
        const double ph = d.phi();
        return evaluate_fields_ring(c, r, d.theta(), std::span<const double>(&ph, 1)).front();
    }

    /// Far-field pattern F(theta, phi) normalized so that EIRP = |F|^2 [W]; F = sqrt(4 pi / Z0) r E_t exp(j k r)
    /// in the limit r -> infinity.
    inline std::vector<TangentialField> farfield_ring(const SweCoefficients &c, double theta, std::span<const double> phis)
    {
        const int L = c.order();
        std::vector<TangentialField> out(phis.size());
        if (L == 0)
            return out;
        const auto g1 = detail::farfield_factors(L, 1);
        const auto g2 = detail::farfield_factors(L, 0);
        const LegendreTable t(L, theta);
        const auto s = detail::ring_sums(c, t, g1, g2, {}, false);
        const double nrm = std::sqrt(4.0 * pi);
        for (std::size_t i = 0; i < phis.size(); ++i)
        {
            const auto p = detail::phase_powers(L, phis[i]);
            out[i] = {nrm * detail::synth(s.t_theta, p), nrm * detail::synth(s.t_phi, p)};
        }
        return out;
    }

    inline TangentialField farfield(const SweCoefficients &c, const Direction &d)
    {
        const double ph = d.phi();
        return farfield_ring(c, d.theta(), std::span<const double>(&ph, 1)).front();
    }

    inline double eirp(const SweCoefficients &c, const Direction &d) { return farfield(c, d).norm2(); }

    /// Sampling grid for projecting a far-field pattern: Gauss-Legendre nodes in cos(theta) times a uniform
    /// azimuth grid, with the pattern values F (EIRP = |F|^2) stored row-major [theta][phi].
    struct FarFieldGrid
    {
        std::vector<double> theta, theta_weight; // weight of d(cos theta)
        std::vector<double> phi;
        std::vector<TangentialField> values;

        static FarFieldGrid make(int n_theta, int n_phi)
        {
            if (n_theta < 1 || n_phi < 1)
                throw std::invalid_argument("FarFieldGrid: empty grid");
            FarFieldGrid g;
            const auto gl = gauss_legendre(n_theta);
            for (int i = n_theta - 1; i >= 0; --i) // ascending theta
            {
                g.theta.push_back(std::acos(gl.nodes[i]));
                g.theta_weight.push_back(gl.weights[i]);
            }
            for (int j = 0; j < n_phi; ++j)
                g.phi.push_back(two_pi * j / n_phi);
            g.values.assign(static_cast<std::size_t>(n_theta) * n_phi, TangentialField{});
            return g;
        }

        /// Grid used for order-L projections: 2L+2 nodes in each angle.
        static FarFieldGrid for_order(int L) { return make(2 * L + 2, 2 * L + 2); }

        std::size_t n_theta() const { return theta.size(); }
        std::size_t n_phi() const { return phi.size(); }
        TangentialField &value(std::size_t i, std::size_t j) { return values[i * phi.size() + j]; }
        const TangentialField &value(std::size_t i, std::size_t j) const { return values[i * phi.size() + j]; }

        /// Fill with a pattern evaluator F(Direction) -> TangentialField.
        template <class Fn>
        void sample(Fn &&pattern)
        {
            for (std::size_t i = 0; i < theta.size(); ++i)
                for (std::size_t j = 0; j < phi.size(); ++j)
                    value(i, j) = pattern(Direction(theta[i], phi[j]));
        }

        void sample_from(const SweCoefficients &c)
        {
            for (std::size_t i = 0; i < theta.size(); ++i)
            {
                const auto row = farfield_ring(c, theta[i], phi);
                std::copy(row.begin(), row.end(), values.begin() + static_cast<std::ptrdiff_t>(i * phi.size()));
            }
        }

        /// (1/4pi) * integral of |F|^2 = TRP of the sampled pattern
        double trp() const
        {
            double s = 0.0;
            const double dphi = two_pi / static_cast<double>(phi.size());
            for (std::size_t i = 0; i < theta.size(); ++i)
            {
                double row = 0.0;
                for (std::size_t j = 0; j < phi.size(); ++j)
                    row += value(i, j).norm2();
                s += theta_weight[i] * row * dphi;
            }
            return s / (4.0 * pi);
        }
    };

    /// Recover a_lmn (l <= L) from a sampled far-field pattern by projection onto A_lm1, A_lm2.
    inline SweCoefficients coeffs_from_farfield(const FarFieldGrid &g, int L, double k, double source_radius)
    {
        if (L < 1)
            throw std::invalid_argument("coeffs_from_farfield: order must be >= 1");
        const std::size_t need_theta = static_cast<std::size_t>(L) + 1;
        const std::size_t need_phi = 2 * static_cast<std::size_t>(L) + 2;
        if (g.n_theta() < need_theta || g.n_phi() < need_phi)
        {
            std::ostringstream os;
            os << "coeffs_from_farfield: grid too sparse for order " << L << " (have " << g.n_theta() << " x "
               << g.n_phi() << " samples, need at least " << need_theta << " x " << need_phi << ")";
            throw std::invalid_argument(os.str());
        }
        SweCoefficients c(L, k, source_radius);
        auto a = c.data();
        const std::size_t nphi = g.n_phi();
        const double dphi = two_pi / static_cast<double>(nphi);
        std::vector<cplx> gth(2 * static_cast<std::size_t>(L) + 1), gph(gth.size());
        for (std::size_t i = 0; i < g.n_theta(); ++i)
        {
            // Azimuthal Fourier components of the ring
            std::fill(gth.begin(), gth.end(), cplx{});
            std::fill(gph.begin(), gph.end(), cplx{});
            for (std::size_t j = 0; j < nphi; ++j)
            {
                const auto p = detail::phase_powers(L, -g.phi[j]);
                const auto &v = g.value(i, j);
                for (std::size_t q = 0; q < gth.size(); ++q)
                {
                    const cplx e = p[q]; // exp(-j m phi), m = q - L
                    gth[q] += v.theta * e;
                    gph[q] += v.phi * e;
                }
            }
            const LegendreTable t(L, g.theta[i]);
            const double w = g.theta_weight[i] * dphi;
            for (int l = 1; l <= L; ++l)
                for (int m = -l; m <= l; ++m)
                {
                    const ModeAngular ang = mode_angular(t, l, m, cplx(1.0, 0.0));
                    const auto im = static_cast<std::size_t>(m + L);
                    a[SweCoefficients::index(l, m, 1)] +=
                        w * (gth[im] * std::conj(ang.a1.theta) + gph[im] * std::conj(ang.a1.phi));
                    a[SweCoefficients::index(l, m, 2)] +=
                        w * (gth[im] * std::conj(ang.a2.theta) + gph[im] * std::conj(ang.a2.phi));
                }
        }
        const auto g1 = detail::farfield_factors(L, 1);
        const auto g2 = detail::farfield_factors(L, 0);
        const double nrm = std::sqrt(4.0 * pi);
        for (int l = 1; l <= L; ++l)
            for (int m = -l; m <= l; ++m)
            {
                a[SweCoefficients::index(l, m, 1)] /= nrm * g1[l];
                a[SweCoefficients::index(l, m, 2)] /= nrm * g2[l];
            }
        return c;
    }

    struct BackPropagation
    {
        SweCoefficients coefficients; // truncated set used at the evaluation radius
        int order = 0;                // L' = min(L, floor(k r))
        double trp_change = 0.0;      // TRP removed by the truncation [W]
        double error_db = 0.0;        // |10 log10(TRP' / TRP)|
    };

    /// Truncate to L' = min(L, floor(k r)) for evaluation at radius r, which limits the amplification of
    /// high-order content. The reported error is the TRP change caused by the truncation.
    inline BackPropagation back_propagate(const SweCoefficients &c, double r)
    {
        if (!(r > c.source_radius()))
            throw std::domain_error("back_propagate: radius must exceed the source radius");
        BackPropagation bp;
        bp.order = std::min(c.order(), static_cast<int>(std::floor(c.wavenumber() * r)));
        bp.coefficients = c.truncated(bp.order);
        const double full = trp_of(c);
        const double kept = trp_of(bp.coefficients);
        bp.trp_change = full - kept;
        bp.error_db = (full > 0.0 && kept > 0.0) ? std::abs(to_db(kept / full)) : 0.0;
        return bp;
    }

    /// Random source with n_modes distinct modes drawn from the J = 2(L^2+2L) available, complex Gaussian
    /// weights x + j y (x, y ~ N(0,1)), normalized to unit TRP. Source radius defaults to L/k.
    template <class Urbg>
    SweCoefficients random_mode_coeffs(int n_modes, Urbg &rng, int L = 12, double k = two_pi, double source_radius = -1.0)
    {
        const std::size_t J = SweCoefficients::mode_count(L);
        if (n_modes < 1 || static_cast<std::size_t>(n_modes) > J)
        {
            std::ostringstream os;
            os << "random_mode_coeffs: mode count " << n_modes << " outside [1, " << J << "]";
            throw std::invalid_argument(os.str());
        }
        SweCoefficients c(L, k, source_radius < 0.0 ? L / k : source_radius);
        std::vector<std::size_t> idx(J);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        // partial Fisher-Yates: first n_modes entries form a uniform random subset
        for (std::size_t i = 0; i < static_cast<std::size_t>(n_modes); ++i)
        {
            std::uniform_int_distribution<std::size_t> pick(i, J - 1);
            std::swap(idx[i], idx[pick(rng)]);
        }
        std::normal_distribution<double> gauss(0.0, 1.0);
        auto a = c.data();
        double p = 0.0;
        for (std::size_t i = 0; i < static_cast<std::size_t>(n_modes); ++i)
        {
            const double x = gauss(rng);
            const double y = gauss(rng);
            a[idx[i]] = cplx(x, y);
            p += x * x + y * y;
        }
        const double s = 1.0 / std::sqrt(p);
        for (auto &v : a)
            v *= s;
        return c;
    }

} // namespace otatrp::swe

#endif
