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

#ifndef OTATRP_SPHMATH_HPP
#define OTATRP_SPHMATH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

namespace otatrp
{
    using cplx = std::complex<double>;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr double two_pi = 2.0 * std::numbers::pi;
    inline constexpr double deg = std::numbers::pi / 180.0;

    // Free-space wave impedance [Ohm]
    inline constexpr double free_space_impedance = 376.730313668;

    inline double to_db(double ratio) { return 10.0 * std::log10(ratio); }
    inline double from_db(double db) { return std::pow(10.0, db / 10.0); }
    inline double watts_to_dbm(double w) { return 10.0 * std::log10(w * 1.0e3); }

    struct Vec3
    {
        double x = 0.0, y = 0.0, z = 0.0;

        constexpr Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
        constexpr Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
        constexpr Vec3 operator-() const { return {-x, -y, -z}; }
        constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
        constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
        constexpr bool operator==(const Vec3 &) const = default;

        constexpr double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
        constexpr Vec3 cross(const Vec3 &o) const
        {
            return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
        }
        double norm() const { return std::sqrt(dot(*this)); }
        Vec3 normalized() const { return *this / norm(); }
    };

    inline constexpr Vec3 operator*(double s, const Vec3 &v) { return v * s; }

    struct ComplexVec3
    {
        cplx x{}, y{}, z{};

        ComplexVec3 operator+(const ComplexVec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
        ComplexVec3 operator-(const ComplexVec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
        ComplexVec3 operator*(cplx s) const { return {x * s, y * s, z * s}; }

        // Bilinear product (no conjugation), as used by reaction integrals
        cplx dot(const Vec3 &v) const { return x * v.x + y * v.y + z * v.z; }
        // Hermitian inner product <this, o> = this . conj(o)
        cplx inner(const ComplexVec3 &o) const
        {
            return x * std::conj(o.x) + y * std::conj(o.y) + z * std::conj(o.z);
        }
        ComplexVec3 cross(const ComplexVec3 &o) const
        {
            return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
        }
        ComplexVec3 conj() const { return {std::conj(x), std::conj(y), std::conj(z)}; }
        double norm2() const { return std::norm(x) + std::norm(y) + std::norm(z); }
        bool finite() const
        {
            return std::isfinite(x.real()) && std::isfinite(x.imag()) && std::isfinite(y.real()) &&
                   std::isfinite(y.imag()) && std::isfinite(z.real()) && std::isfinite(z.imag());
        }
    };

    inline ComplexVec3 operator*(cplx s, const Vec3 &v) { return {s * v.x, s * v.y, s * v.z}; }

    /// Direction on the unit sphere in the standard spherical coordinate system.
    ///
    /// Stored canonically with theta in [0, pi] and phi in [-pi, pi). Angles outside that range,
    /// including the "ball of yarn" covering theta in [0, 2pi), phi in [0, pi), are folded on
    /// construction so that the same physical direction always has the same representation.
    class Direction
    {
    public:
        Direction() = default;
        Direction(double theta, double phi)
        {
            double t = std::fmod(theta, two_pi);
            if (t < 0.0)
                t += two_pi;
            if (t > pi)
            {
                t = two_pi - t;
                phi += pi;
            }
            theta_ = t;
            phi_ = wrap_phi(phi);
        }

        static Direction from_vector(const Vec3 &v)
        {
            const double n = v.norm();
            if (!(n > 0.0))
                throw std::invalid_argument("Direction::from_vector: zero-length vector");
            const double c = std::clamp(v.z / n, -1.0, 1.0);
            return Direction(std::acos(c), std::atan2(v.y, v.x));
        }

        double theta() const { return theta_; }
        double phi() const { return phi_; }

        static double wrap_phi(double phi)
        {
            double p = std::fmod(phi + pi, two_pi);
            if (p < 0.0)
                p += two_pi;
            p -= pi;
            if (p >= pi)
                p -= two_pi;
            return p;
        }

    private:
        double theta_ = 0.0;
        double phi_ = 0.0;
    };

    inline Vec3 unit_radial(const Direction &d)
    {
        const double st = std::sin(d.theta()), ct = std::cos(d.theta());
        const double sp = std::sin(d.phi()), cp = std::cos(d.phi());
        return {st * cp, st * sp, ct};
    }

    inline Vec3 unit_theta(const Direction &d)
    {
        const double st = std::sin(d.theta()), ct = std::cos(d.theta());
        const double sp = std::sin(d.phi()), cp = std::cos(d.phi());
        return {ct * cp, ct * sp, -st};
    }

    inline Vec3 unit_phi(const Direction &d)
    {
        return {-std::sin(d.phi()), std::cos(d.phi()), 0.0};
    }

    /// Tangential complex field in the (theta-hat, phi-hat) basis of a direction.
    struct TangentialField
    {
        cplx theta{}, phi{};

        TangentialField operator+(const TangentialField &o) const { return {theta + o.theta, phi + o.phi}; }
        TangentialField operator*(cplx s) const { return {theta * s, phi * s}; }
        double norm2() const { return std::norm(theta) + std::norm(phi); }
    };

    inline ComplexVec3 to_cartesian(const TangentialField &f, const Direction &d)
    {
        return f.theta * unit_theta(d) + f.phi * unit_phi(d);
    }

    /// Proper rotation (orthonormal, det +1).
    class RotationMatrix
    {
    public:
        using Rows = std::array<std::array<double, 3>, 3>;

        RotationMatrix() : m_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}} {}

        // Checks orthonormality and det = +1 within tol.
        static RotationMatrix from_rows(const Rows &m, double tol = 1e-9)
        {
            RotationMatrix r;
            r.m_ = m;
            if (r.orthonormality_error() > tol || std::abs(r.determinant() - 1.0) > tol)
                throw std::invalid_argument("RotationMatrix::from_rows: matrix is not a proper rotation");
            return r;
        }

        double operator()(int i, int j) const { return m_[i][j]; }
        const Rows &rows() const { return m_; }

        Vec3 operator*(const Vec3 &v) const
        {
            return {m_[0][0] * v.x + m_[0][1] * v.y + m_[0][2] * v.z,
                    m_[1][0] * v.x + m_[1][1] * v.y + m_[1][2] * v.z,
                    m_[2][0] * v.x + m_[2][1] * v.y + m_[2][2] * v.z};
        }

        RotationMatrix operator*(const RotationMatrix &o) const
        {
            RotationMatrix r;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                {
                    double s = 0.0;
                    for (int k = 0; k < 3; ++k)
                        s += m_[i][k] * o.m_[k][j];
                    r.m_[i][j] = s;
                }
            return r;
        }

        RotationMatrix transposed() const
        {
            RotationMatrix r;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    r.m_[i][j] = m_[j][i];
            return r;
        }

        double determinant() const
        {
            return m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) -
                   m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
                   m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
        }

        // Frobenius norm of R^T R - I
        double orthonormality_error() const
        {
            double s = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                {
                    double v = 0.0;
                    for (int k = 0; k < 3; ++k)
                        v += m_[k][i] * m_[k][j];
                    v -= (i == j) ? 1.0 : 0.0;
                    s += v * v;
                }
            return std::sqrt(s);
        }

    private:
        friend RotationMatrix rotation_matrix(const Vec3 &, double);
        Rows m_;
    };

    /// Rotation by gamma (positive sense) about a unit axis, R = I + A sin(gamma) + A^2 (1 - cos(gamma)),
    /// A being the antisymmetric generator of the axis.
    inline RotationMatrix rotation_matrix(const Vec3 &axis, double gamma)
    {
        if (std::abs(axis.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("rotation_matrix: axis must be a unit vector");
        const double nx = axis.x, ny = axis.y, nz = axis.z;
        const double a[3][3] = {{0.0, -nz, ny}, {nz, 0.0, -nx}, {-ny, nx, 0.0}};
        double a2[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
            {
                double s = 0.0;
                for (int k = 0; k < 3; ++k)
                    s += a[i][k] * a[k][j];
                a2[i][j] = s;
            }
        const double s = std::sin(gamma), c1 = 1.0 - std::cos(gamma);
        RotationMatrix r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.m_[i][j] = (i == j ? 1.0 : 0.0) + a[i][j] * s + a2[i][j] * c1;
        return r;
    }

    /// Random rotation with axis n(alpha, beta) = r-hat(alpha, beta), alpha ~ U[0, pi/2],
    /// beta, gamma ~ U[-pi, pi]. The upper-hemisphere axis suffices since R(n, g) = R(-n, -g).
    template <class Urbg>
    RotationMatrix random_rotation(Urbg &rng)
    {
        std::uniform_real_distribution<double> ua(0.0, pi / 2.0);
        std::uniform_real_distribution<double> ub(-pi, pi);
        const double alpha = ua(rng);
        const double beta = ub(rng);
        const double gamma = ub(rng);
        const double sa = std::sin(alpha);
        const Vec3 axis{sa * std::cos(beta), sa * std::sin(beta), std::cos(alpha)};
        return rotation_matrix(axis.normalized(), gamma);
    }

} // namespace otatrp

#endif
