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

#ifndef OTATRP_SOURCES_HPP
#define OTATRP_SOURCES_HPP

#include "otatrp/special.hpp"

#include <random>
#include <sstream>
#include <vector>

// Synthetic emitters: point-source arrays, element power patterns, beam-steered arrays.
// EIRP convention: a single isotropic source with unit weight radiates EIRP = 1 W in every direction.

namespace otatrp
{
    /// Element power pattern; every variant integrates to unit TRP.
    struct ElementModel
    {
        enum class Kind
        {
            isotropic,
            hertz_dipole,     // z-directed
            half_wave_dipole, // z-directed
            cosine_taper      // hemisphere x >= 0, power cos^{2q} of the angle from +x
        };

        Kind kind = Kind::isotropic;
        int q = 1;

        static ElementModel isotropic() { return {}; }
        static ElementModel hertz_dipole() { return {Kind::hertz_dipole, 1}; }
        static ElementModel half_wave_dipole() { return {Kind::half_wave_dipole, 1}; }
        static ElementModel cosine_taper(int exponent = 1)
        {
            if (exponent < 0)
                throw std::invalid_argument("ElementModel: taper exponent must be >= 0");
            return {Kind::cosine_taper, exponent};
        }

        double power(const Direction &d) const
        {
            switch (kind)
            {
            case Kind::isotropic:
                return 1.0;
            case Kind::hertz_dipole:
            {
                const double s = std::sin(d.theta());
                return 1.5 * s * s;
            }
            case Kind::half_wave_dipole:
            {
                const double s = std::sin(d.theta());
                if (s < 1e-12)
                    return 0.0;
                const double c = std::cos(0.5 * pi * std::cos(d.theta()));
                return half_wave_constant() * c * c / (s * s);
            }
            case Kind::cosine_taper:
            {
                const double x = std::sin(d.theta()) * std::cos(d.phi());
                if (x <= 0.0)
                    return 0.0;
                return 2.0 * (2.0 * q + 1.0) * std::pow(x, 2 * q);
            }
            }
            return 0.0;
        }

        /// theta-polarized far-field amplitude with |amplitude|^2 = power
        TangentialField field(const Direction &d) const
        {
            const double p = power(d);
            const double sgn = (kind == Kind::hertz_dipole || kind == Kind::half_wave_dipole) ? -1.0 : 1.0;
            return {cplx(sgn * std::sqrt(p), 0.0), cplx{}};
        }

        // 2 / integral_0^pi cos^2(pi/2 cos t) / sin t dt
        static double half_wave_constant()
        {
            static const double c = []
            {
                const auto gl = gauss_legendre(200, -1.0, 1.0);
                double s = 0.0;
                for (std::size_t i = 0; i < gl.nodes.size(); ++i)
                {
                    const double u = gl.nodes[i];
                    const double cc = std::cos(0.5 * pi * u);
                    s += gl.weights[i] * cc * cc / (1.0 - u * u);
                }
                return 2.0 / s;
            }();
            return c;
        }

        std::string name() const
        {
            switch (kind)
            {
            case Kind::isotropic:
                return "isotropic";
            case Kind::hertz_dipole:
                return "hertz_dipole";
            case Kind::half_wave_dipole:
                return "half_wave_dipole";
            case Kind::cosine_taper:
                return "cosine_taper";
            }
            return "unknown";
        }
    };

    /// Discrete radiators at fixed positions [m] with complex weights [sqrt(W)] at wavenumber k.
    struct PointSourceArray
    {
        std::vector<Vec3> positions;
        std::vector<cplx> weights;
        double k = two_pi;

        void validate() const
        {
            if (positions.empty())
                throw std::invalid_argument("PointSourceArray: at least one source required");
            if (positions.size() != weights.size())
                throw std::invalid_argument("PointSourceArray: positions and weights differ in length");
            if (!(k > 0.0) || !std::isfinite(k))
                throw std::invalid_argument("PointSourceArray: wavenumber must be positive");
            for (const auto &p : positions)
                if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
                    throw std::invalid_argument("PointSourceArray: non-finite position");
            for (const auto &w : weights)
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
                    throw std::invalid_argument("PointSourceArray: non-finite weight");
        }

        std::size_t size() const { return positions.size(); }
        double wavelength() const { return two_pi / k; }

        /// Radius of the smallest origin-centered sphere holding every source.
        double sphere_radius() const
        {
            double r = 0.0;
            for (const auto &p : positions)
                r = std::max(r, p.norm());
            return r;
        }

        /// Radius of the smallest z-axis cylinder holding every source.
        double cylinder_radius() const
        {
            double r = 0.0;
            for (const auto &p : positions)
                r = std::max(r, std::hypot(p.x, p.y));
            return r;
        }

        /// Same geometry and weights at a harmonic: positions in meters fixed, k scaled.
        PointSourceArray at_harmonic(int h) const
        {
            PointSourceArray a = *this;
            a.k = k * h;
            return a;
        }

        PointSourceArray with_weights(std::vector<cplx> w) const
        {
            PointSourceArray a = *this;
            a.weights = std::move(w);
            a.validate();
            return a;
        }
    };

    inline cplx array_factor(const PointSourceArray &a, const Vec3 &rhat)
    {
        cplx s{};
        for (std::size_t n = 0; n < a.positions.size(); ++n)
            s += a.weights[n] * std::polar(1.0, a.k * rhat.dot(a.positions[n]));
        return s;
    }

    inline double eirp_pattern(const PointSourceArray &a, const ElementModel &e, const Direction &d)
    {
        const double pe = e.power(d);
        if (pe == 0.0)
            return 0.0;
        return std::norm(array_factor(a, unit_radial(d))) * pe;
    }

    inline double eirp_pattern(const PointSourceArray &a, const Direction &d)
    {
        return std::norm(array_factor(a, unit_radial(d)));
    }

    /// Far-field pattern F with EIRP = |F|^2, theta-polarized elements.
    inline TangentialField farfield_pattern(const PointSourceArray &a, const ElementModel &e, const Direction &d)
    {
        return e.field(d) * array_factor(a, unit_radial(d));
    }

    inline PointSourceArray rotated(const PointSourceArray &a, const RotationMatrix &r)
    {
        PointSourceArray out = a;
        for (auto &p : out.positions)
            p = r * p;
        return out;
    }

    /// Isotropic-element pattern of the array with positions replaced by R d_n.
    inline double rotated_pattern(const PointSourceArray &a, const RotationMatrix &r, const Direction &d)
    {
        const Vec3 rhat = unit_radial(d);
        cplx s{};
        for (std::size_t n = 0; n < a.positions.size(); ++n)
            s += a.weights[n] * std::polar(1.0, a.k * rhat.dot(r * a.positions[n]));
        return std::norm(s);
    }

    /// Largest row count allowed by 1 + ceil(sqrt(2) D / lambda). The spacing check in
    /// uniform_quadratic_array admits at most 1 + floor(sqrt(2) D / lambda) rows.
    inline int row_count_bound(double diameter, double wavelength)
    {
        return 1 + static_cast<int>(std::ceil(std::sqrt(2.0) * diameter / wavelength - 1e-12));
    }

    inline double quadratic_array_spacing(double diameter, int n_row)
    {
        return diameter / (std::sqrt(2.0) * (n_row - 1));
    }

    /// n_row x n_row sources in the yz-plane, centered, corners on the sphere of diameter D. Unit weights.
    inline PointSourceArray uniform_quadratic_array(double diameter, int n_row, double k)
    {
        if (n_row < 2)
            throw std::invalid_argument("uniform_quadratic_array: n_row must be >= 2");
        if (!(diameter > 0.0) || !(k > 0.0))
            throw std::invalid_argument("uniform_quadratic_array: diameter and wavenumber must be positive");
        const double lambda = two_pi / k;
        const double ds = quadratic_array_spacing(diameter, n_row);
        if (ds < 0.5 * lambda * (1.0 - 1e-12))
        {
            std::ostringstream os;
            os << "uniform_quadratic_array: spacing " << ds / lambda << " lambda below lambda/2";
            throw std::invalid_argument(os.str());
        }
        PointSourceArray a;
        a.k = k;
        const double c = 0.5 * (n_row - 1);
        for (int i = 0; i < n_row; ++i)
            for (int j = 0; j < n_row; ++j)
            {
                a.positions.push_back({0.0, (i - c) * ds, (j - c) * ds});
                a.weights.emplace_back(1.0, 0.0);
            }
        return a;
    }

    /// Rectangular array in the yz-plane with given spacings, centered at the origin. Unit weights.
    inline PointSourceArray planar_array(int n_y, int n_z, double dy, double dz, double k)
    {
        if (n_y < 1 || n_z < 1)
            throw std::invalid_argument("planar_array: element counts must be >= 1");
        PointSourceArray a;
        a.k = k;
        const double cy = 0.5 * (n_y - 1), cz = 0.5 * (n_z - 1);
        for (int i = 0; i < n_y; ++i)
            for (int j = 0; j < n_z; ++j)
            {
                a.positions.push_back({0.0, (i - cy) * dy, (j - cz) * dz});
                a.weights.emplace_back(1.0, 0.0);
            }
        return a;
    }

    /// w_n = sqrt(rho) + (x_n + j y_n) sqrt((1 - rho) / 2), x, y ~ N(0, 1).
    template <class Urbg>
    std::vector<cplx> correlated_weights(std::size_t n, double rho, Urbg &rng)
    {
        if (!(rho >= 0.0 && rho <= 1.0))
            throw std::invalid_argument("correlated_weights: rho must lie in [0, 1]");
        std::normal_distribution<double> g(0.0, 1.0);
        const double a = std::sqrt(rho), b = std::sqrt(0.5 * (1.0 - rho));
        std::vector<cplx> w(n);
        for (auto &v : w)
        {
            const double x = g(rng);
            const double y = g(rng);
            v = cplx(a + b * x, b * y);
        }
        return w;
    }

    inline double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

    /// Exact TRP of an isotropic-element array: sum_{m,n} conj(w_m) w_n sinc(k |d_m - d_n|).
    inline double trp_sinc_oracle(const PointSourceArray &a)
    {
        double s = 0.0;
        const std::size_t n = a.size();
        for (std::size_t i = 0; i < n; ++i)
        {
            s += std::norm(a.weights[i]);
            for (std::size_t j = i + 1; j < n; ++j)
                s += 2.0 * std::real(std::conj(a.weights[i]) * a.weights[j]) *
                     sinc(a.k * (a.positions[i] - a.positions[j]).norm());
        }
        return s;
    }

    /// Direction whose polar angle is measured from +x: (cos t, sin t cos p, sin t sin p).
    inline Direction direction_about_x(double t, double p)
    {
        return Direction::from_vector({std::cos(t), std::sin(t) * std::cos(p), std::sin(t) * std::sin(p)});
    }

    /// Dense-quadrature TRP of any power pattern, (1/4pi) integral EIRP dOmega. Gauss-Legendre in the angle from
    /// +x, split at the yz-plane where hemisphere-limited elements have a kink, times a trapezoid in azimuth.
    template <class Pattern>
    double trp_dense(Pattern &&eirp, int n_half, int n_az)
    {
        const auto gl = gauss_legendre(n_half, 0.0, 1.0);
        double s = 0.0;
        for (int side = 0; side < 2; ++side)
            for (std::size_t i = 0; i < gl.nodes.size(); ++i)
            {
                const double c = side == 0 ? gl.nodes[i] : -gl.nodes[i];
                const double t = std::acos(c);
                double row = 0.0;
                for (int j = 0; j < n_az; ++j)
                    row += eirp(direction_about_x(t, two_pi * (j + 0.5) / n_az));
                s += gl.weights[i] * row * (two_pi / n_az);
            }
        return s / (4.0 * pi);
    }

    /// Node counts for trp_dense that resolve an array of electrical radius kR.
    inline int dense_half_nodes(double kr) { return static_cast<int>(std::ceil(kr)) + 24; }
    inline int dense_azimuth_nodes(double kr) { return 2 * static_cast<int>(std::ceil(2.0 * kr)) + 48; }

    inline double trp_dense(const PointSourceArray &a, const ElementModel &e)
    {
        const double kr = a.k * a.sphere_radius();
        return trp_dense([&](const Direction &d) { return eirp_pattern(a, e, d); }, dense_half_nodes(kr),
                         dense_azimuth_nodes(kr));
    }

    /// Beam positions on an n_az x n_el lattice centered on +x with equal angular spacing.
    struct BeamGrid
    {
        int n_az = 9;
        int n_el = 5;
        double spacing_deg = 10.0;

        int count() const { return n_az * n_el; }
        double azimuth_span_deg() const { return spacing_deg * (n_az - 1); }
        double elevation_span_deg() const { return spacing_deg * (n_el - 1); }

        void check(int index) const
        {
            if (index < 0 || index >= count())
                throw std::out_of_range("BeamGrid: beam index out of range");
        }

        /// Row-major: index = el_idx * n_az + az_idx
        double azimuth(int index) const
        {
            check(index);
            return (index % n_az - 0.5 * (n_az - 1)) * spacing_deg * deg;
        }
        double elevation(int index) const
        {
            check(index);
            return (index / n_az - 0.5 * (n_el - 1)) * spacing_deg * deg;
        }
        Vec3 direction(int index) const
        {
            const double az = azimuth(index), el = elevation(index);
            return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
        }
    };

    /// Conjugate-phase steering toward beam `index` at wavenumber k0, unit amplitudes.
    inline std::vector<cplx> steering_weights(const BeamGrid &g, int index, const std::vector<Vec3> &positions, double k0)
    {
        const Vec3 b = g.direction(index);
        std::vector<cplx> w(positions.size());
        for (std::size_t n = 0; n < positions.size(); ++n)
            w[n] = std::polar(1.0, -k0 * b.dot(positions[n]));
        return w;
    }

    /// Mean over beams of the power pattern at d.
    inline double sweep_average_pattern(const PointSourceArray &geometry, const ElementModel &e,
                                        const std::vector<std::vector<cplx>> &beams, const Direction &d)
    {
        if (beams.empty())
            throw std::invalid_argument("sweep_average_pattern: at least one beam required");
        const double pe = e.power(d);
        if (pe == 0.0)
            return 0.0;
        const Vec3 rhat = unit_radial(d);
        std::vector<cplx> ph(geometry.size());
        for (std::size_t n = 0; n < ph.size(); ++n)
            ph[n] = std::polar(1.0, geometry.k * rhat.dot(geometry.positions[n]));
        double s = 0.0;
        for (const auto &w : beams)
        {
            if (w.size() != ph.size())
                throw std::invalid_argument("sweep_average_pattern: weight count differs from element count");
            cplx af{};
            for (std::size_t n = 0; n < ph.size(); ++n)
                af += w[n] * ph[n];
            s += std::norm(af);
        }
        return pe * s / static_cast<double>(beams.size());
    }

} // namespace otatrp

#endif
