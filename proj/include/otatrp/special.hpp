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

#ifndef OTATRP_SPECIAL_HPP
#define OTATRP_SPECIAL_HPP

#include "otatrp/sphmath.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace otatrp
{
    // ---------------------------------------------------------------------------------------------
    // Spherical Bessel / Hankel functions
    // ---------------------------------------------------------------------------------------------

    /// j_l(x) for l = 0..lmax. Upward recurrence when x > lmax (stable there), otherwise Miller's
    /// downward recurrence normalized with sum_l (2l+1) j_l^2 = 1.
    inline std::vector<double> spherical_bessel_j(int lmax, double x)
    {
        if (lmax < 0)
            throw std::invalid_argument("spherical_bessel_j: lmax < 0");
        if (!(x > 0.0))
            throw std::domain_error("spherical_bessel_j: x must be positive");
        std::vector<double> j(static_cast<std::size_t>(lmax) + 1);
        const double s = std::sin(x), c = std::cos(x);
        if (x > static_cast<double>(lmax))
        {
            j[0] = s / x;
            if (lmax >= 1)
                j[1] = s / (x * x) - c / x;
            for (int l = 1; l < lmax; ++l)
                j[l + 1] = (2.0 * l + 1.0) / x * j[l] - j[l - 1];
            return j;
        }

        const int start = lmax + 16 + static_cast<int>(std::sqrt(40.0 * (lmax + x)));
        double jp1 = 0.0, jl = 1.0;
        double sum = 0.0;
        for (int l = start; l >= 0; --l)
        {
            if (l <= lmax)
                j[l] = jl;
            sum += (2.0 * l + 1.0) * jl * jl;
            const double jm1 = (2.0 * l + 1.0) / x * jl - jp1;
            jp1 = jl;
            jl = jm1;
            if (std::abs(jl) > 1e100)
            {
                const double f = 1e-100;
                jl *= f;
                jp1 *= f;
                sum *= f * f;
                for (int q = std::max(l, 0); q <= lmax; ++q)
                    j[q] *= f;
            }
        }
        const double scale = 1.0 / std::sqrt(sum);
        for (auto &v : j)
            v *= scale;
        // Fix the overall sign from the closed form of j_0 (or j_1 near zeros of j_0)
        const double j0 = s / x;
        const double ref = std::abs(j0) > 0.1 ? j0 : (s / (x * x) - c / x);
        const double got = std::abs(j0) > 0.1 ? j[0] : (lmax >= 1 ? j[1] : j[0]);
        if ((ref < 0.0) != (got < 0.0))
            for (auto &v : j)
                v = -v;
        return j;
    }

    /// y_l(x) for l = 0..lmax by upward recurrence (stable for the Neumann functions).
    inline std::vector<double> spherical_bessel_y(int lmax, double x)
    {
        if (lmax < 0)
            throw std::invalid_argument("spherical_bessel_y: lmax < 0");
        if (!(x > 0.0))
            throw std::domain_error("spherical_bessel_y: x must be positive");
        std::vector<double> y(static_cast<std::size_t>(lmax) + 1);
        const double s = std::sin(x), c = std::cos(x);
        y[0] = -c / x;
        if (lmax >= 1)
            y[1] = -c / (x * x) - s / x;
        for (int l = 1; l < lmax; ++l)
            y[l + 1] = (2.0 * l + 1.0) / x * y[l] - y[l - 1];
        return y;
    }

    /// h_l^(2)(x) = j_l(x) - j y_l(x) for l = 0..lmax; outgoing waves under the exp(+j w t) convention.
    inline std::vector<cplx> spherical_hankel2_all(int lmax, double x)
    {
        if (!(x > 0.0))
            throw std::domain_error("spherical_hankel2: x must be positive");
        const auto j = spherical_bessel_j(lmax, x);
        const auto y = spherical_bessel_y(lmax, x);
        std::vector<cplx> h(j.size());
        for (std::size_t l = 0; l < h.size(); ++l)
            h[l] = cplx(j[l], -y[l]);
        return h;
    }

    inline cplx spherical_hankel2(int l, double x)
    {
        if (l < 0)
            throw std::invalid_argument("spherical_hankel2: l < 0");
        return spherical_hankel2_all(l, x)[static_cast<std::size_t>(l)];
    }

    /// Radial functions of the expansion for all orders 1..lmax at argument kr:
    ///   f1 = h_l(kr), f2 = (kr h_l(kr))' / kr, f3 = sqrt(l(l+1)) h_l(kr) / kr.
    /// Index 0 is unused.
    struct RadialFunctions
    {
        std::vector<cplx> f1, f2, f3;
    };

    inline RadialFunctions radial_functions(int lmax, double kr)
    {
        if (!(kr > 0.0))
            throw std::domain_error("radial_functions: kr must be positive");
        const auto h = spherical_hankel2_all(std::max(lmax, 1), kr);
        RadialFunctions rf;
        const std::size_t n = static_cast<std::size_t>(std::max(lmax, 1)) + 1;
        rf.f1.assign(n, cplx{});
        rf.f2.assign(n, cplx{});
        rf.f3.assign(n, cplx{});
        for (int l = 1; l <= lmax; ++l)
        {
            const double dl = l;
            rf.f1[l] = h[l];
            rf.f2[l] = h[l - 1] - dl * h[l] / kr;
            rf.f3[l] = std::sqrt(dl * (dl + 1.0)) * h[l] / kr;
        }
        return rf;
    }

    /// Single radial function f_{l n}(kr), n in {1, 2, 3}.
    inline cplx radial_function(int n, int l, double kr)
    {
        if (n < 1 || n > 3)
            throw std::invalid_argument("radial_function: n must be 1, 2 or 3");
        if (l < 1)
            throw std::invalid_argument("radial_function: l must be >= 1");
        const auto rf = radial_functions(l, kr);
        return n == 1 ? rf.f1[l] : (n == 2 ? rf.f2[l] : rf.f3[l]);
    }

    // ---------------------------------------------------------------------------------------------
    // Associated Legendre functions, orthonormal (Condon-Shortley phase), with pole-safe helpers
    // ---------------------------------------------------------------------------------------------

    /// Table of normalized associated Legendre functions at one polar angle, 0 <= m <= l <= lmax:
    ///   p(l,m)  = Pbar_l^m(cos theta), so Y_lm = p(l,m) exp(j m phi) is orthonormal on the sphere,
    ///   q(l,m)  = Pbar_l^m / sin theta (finite at the poles, m >= 1; zero for m = 0),
    ///   dp(l,m) = d Pbar_l^m / d theta.
    class LegendreTable
    {
    public:
        LegendreTable() = default;
        LegendreTable(int lmax, double theta) { compute(lmax, theta); }

        void compute(int lmax, double theta)
        {
            if (lmax < 0)
                throw std::invalid_argument("LegendreTable: lmax < 0");
            lmax_ = lmax;
            const std::size_t n = index(lmax, lmax) + 1;
            p_.assign(n, 0.0);
            q_.assign(n, 0.0);
            dp_.assign(n, 0.0);
            const double x = std::cos(theta), s = std::sin(theta);

            double pmm = 1.0 / std::sqrt(4.0 * pi);
            for (int m = 0; m <= lmax; ++m)
            {
                double qmm = 0.0;
                if (m > 0)
                {
                    const double f = -std::sqrt((2.0 * m + 1.0) / (2.0 * m));
                    qmm = f * pmm;
                    pmm = qmm * s;
                }
                // Same three-term recurrence in l for p and q (fixed m, linear in the seed)
                p_[index(m, m)] = pmm;
                q_[index(m, m)] = qmm;
                if (m + 1 <= lmax)
                {
                    const double a = std::sqrt(2.0 * m + 3.0);
                    p_[index(m + 1, m)] = a * x * pmm;
                    q_[index(m + 1, m)] = a * x * qmm;
                }
                for (int l = m + 2; l <= lmax; ++l)
                {
                    const double dl = l, dm = m;
                    const double a = std::sqrt((4.0 * dl * dl - 1.0) / (dl * dl - dm * dm));
                    const double b = std::sqrt(((dl - 1.0) * (dl - 1.0) - dm * dm) / (4.0 * (dl - 1.0) * (dl - 1.0) - 1.0));
                    p_[index(l, m)] = a * (x * p_[index(l - 1, m)] - b * p_[index(l - 2, m)]);
                    q_[index(l, m)] = a * (x * q_[index(l - 1, m)] - b * q_[index(l - 2, m)]);
                }
            }

            for (int l = 0; l <= lmax; ++l)
            {
                const double dl = l;
                for (int m = 0; m <= l; ++m)
                {
                    const double dm = m;
                    double d;
                    if (m == 0)
                        d = l > 0 ? std::sqrt(dl * (dl + 1.0)) * p_[index(l, 1)] : 0.0;
                    else
                    {
                        const double up = m < l ? std::sqrt((dl - dm) * (dl + dm + 1.0)) * p_[index(l, m + 1)] : 0.0;
                        const double dn = std::sqrt((dl + dm) * (dl - dm + 1.0)) * p_[index(l, m - 1)];
                        d = 0.5 * (up - dn);
                    }
                    dp_[index(l, m)] = d;
                }
            }
        }

        int lmax() const { return lmax_; }
        double p(int l, int m) const { return p_[index(l, m)]; }
        double q(int l, int m) const { return q_[index(l, m)]; }
        double dp(int l, int m) const { return dp_[index(l, m)]; }

        static std::size_t index(int l, int m)
        {
            return static_cast<std::size_t>(l) * (static_cast<std::size_t>(l) + 1) / 2 + static_cast<std::size_t>(m);
        }

    private:
        int lmax_ = -1;
        std::vector<double> p_, q_, dp_;
    };

    /// Orthonormal complex spherical harmonic Y_lm (Condon-Shortley phase).
    inline cplx spherical_harmonic(int l, int m, const Direction &d)
    {
        if (l < 0 || std::abs(m) > l)
            throw std::invalid_argument("spherical_harmonic: require l >= 0 and |m| <= l");
        LegendreTable t(l, d.theta());
        const int am = std::abs(m);
        double p = t.p(l, am);
        if (m < 0 && (am % 2) == 1)
            p = -p;
        return p * std::polar(1.0, m * d.phi());
    }

    /// Angular parts of one (l, m) mode evaluated from a Legendre table and exp(j m phi).
    ///   A1 = (l(l+1))^{-1/2} grad Y x r,   A2 = (l(l+1))^{-1/2} r grad Y = r-hat x A1,   Y itself.
    struct ModeAngular
    {
        TangentialField a1, a2;
        cplx y;
    };

    inline ModeAngular mode_angular(const LegendreTable &t, int l, int m, cplx eimphi)
    {
        const int am = std::abs(m);
        double p = t.p(l, am), q = t.q(l, am), dp = t.dp(l, am);
        if (m < 0 && (am % 2) == 1)
        {
            p = -p;
            q = -q;
            dp = -dp;
        }
        const double dl = l;
        const double nrm = 1.0 / std::sqrt(dl * (dl + 1.0));
        const cplx jmq = cplx(0.0, m * q) * eimphi * nrm; // (j m / sin theta) Y / sqrt(l(l+1))
        const cplx dth = dp * eimphi * nrm;                // d Y / d theta / sqrt(l(l+1))
        ModeAngular r;
        r.a1 = {jmq, -dth};
        r.a2 = {dth, jmq};
        r.y = p * eimphi;
        return r;
    }

    /// Vector spherical harmonic A_{lmn}(theta, phi), n in {1, 2, 3}, returned in Cartesian components.
    inline ComplexVec3 vector_spherical_harmonic(int n, int l, int m, const Direction &d)
    {
        if (n < 1 || n > 3)
            throw std::invalid_argument("vector_spherical_harmonic: n must be 1, 2 or 3");
        if (l < 1 || std::abs(m) > l)
            throw std::invalid_argument("vector_spherical_harmonic: require l >= 1 and |m| <= l");
        LegendreTable t(l, d.theta());
        const ModeAngular a = mode_angular(t, l, m, std::polar(1.0, m * d.phi()));
        if (n == 3)
            return a.y * unit_radial(d);
        return to_cartesian(n == 1 ? a.a1 : a.a2, d);
    }

    // ---------------------------------------------------------------------------------------------
    // Quadrature
    // ---------------------------------------------------------------------------------------------

    struct QuadratureRule
    {
        std::vector<double> nodes, weights;
    };

    /// Gauss-Legendre rule with n nodes on [a, b] (Newton iteration on P_n).
    inline QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0)
    {
        if (n < 1)
            throw std::invalid_argument("gauss_legendre: n must be >= 1");
        QuadratureRule q;
        q.nodes.resize(static_cast<std::size_t>(n));
        q.weights.resize(static_cast<std::size_t>(n));
        const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
        for (int i = 0; i < (n + 1) / 2; ++i)
        {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it)
            {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k)
                {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k)
                {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
            q.nodes[lo] = mid - half * x;
            q.nodes[hi] = mid + half * x;
            q.weights[lo] = half * w;
            q.weights[hi] = half * w;
        }
        return q;
    }

    /// Composite Simpson rule with n (odd, >= 3) nodes on [a, b].
    inline QuadratureRule simpson(int n, double a, double b)
    {
        if (n < 3 || n % 2 == 0)
            throw std::invalid_argument("simpson: node count must be odd and >= 3");
        QuadratureRule q;
        const double h = (b - a) / (n - 1);
        for (int i = 0; i < n; ++i)
        {
            q.nodes.push_back(a + i * h);
            const double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            q.weights.push_back(c * h / 3.0);
        }
        return q;
    }

} // namespace otatrp

#endif
