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

#ifndef OTATRP_SAMPLING_HPP
#define OTATRP_SAMPLING_HPP

#include "otatrp/special.hpp"

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

// Measurement grids, grid-average TRP estimators with margins, and uv-plane pattern multiplication.
//
// Evaluators passed to the estimators return "EIRP-like" values: EIRP for far-field patterns, or
// 4 pi r0^2 S_r for flux at a finite radius. TRP_grid is then the weighted grid average of those values.

namespace otatrp
{
    inline constexpr double max_grid_step = 15.0 * deg;

    struct GridPoint
    {
        Direction dir;
        double weight = 0.0; // sr for the full sphere, rad for cuts
        int cut = -1;        // cut index 0..2, -1 on the full sphere
    };

    class SamplingGrid
    {
    public:
        enum class Kind
        {
            full_sphere,
            cuts
        };

        /// Polar weight rule of the full-sphere lattice. Both use cell-centered theta nodes.
        enum class ThetaRule
        {
            fejer,     // Fejer's first rule in cos(theta): spectrally accurate, sums to 2
            cell_edges // dcos(theta) between cell edges: second-order accurate
        };

        /// Rectilinear lattice, theta at cell centers (m - 1/2) dtheta, phi at n dphi; weight w_theta * dphi.
        static SamplingGrid full_sphere(double dtheta, double dphi, ThetaRule rule = ThetaRule::fejer)
        {
            const int nt = divisions(pi, dtheta, "theta step");
            const int np = divisions(two_pi, dphi, "phi step");
            SamplingGrid g;
            g.kind_ = Kind::full_sphere;
            g.dtheta_ = pi / nt;
            g.dphi_ = two_pi / np;
            g.points_.reserve(static_cast<std::size_t>(nt) * np);
            for (int m = 0; m < nt; ++m)
            {
                const double tc = (m + 0.5) * g.dtheta_;
                double wt;
                if (rule == ThetaRule::cell_edges)
                    wt = std::cos(m * g.dtheta_) - std::cos((m + 1) * g.dtheta_);
                else
                {
                    double s = 0.0;
                    for (int j = 1; j <= nt / 2; ++j)
                        s += std::cos(2.0 * j * tc) / (4.0 * j * j - 1.0);
                    wt = 2.0 / nt * (1.0 - 2.0 * s);
                }
                for (int n = 0; n < np; ++n)
                    g.points_.push_back({Direction(tc, n * g.dphi_), wt * g.dphi_, -1});
            }
            return g;
        }

        /// Great-circle cuts with uniform weights: 0 horizontal (theta = pi/2), 1 xz-plane, 2 yz-plane.
        static SamplingGrid orthogonal_cuts(int n_cuts, double step)
        {
            if (n_cuts != 2 && n_cuts != 3)
                throw std::invalid_argument("orthogonal_cuts: two or three cuts supported");
            const int n = divisions(two_pi, step, "cut step");
            SamplingGrid g;
            g.kind_ = Kind::cuts;
            g.n_cuts_ = n_cuts;
            g.dtheta_ = g.dphi_ = two_pi / n;
            for (int c = 0; c < n_cuts; ++c)
                for (int i = 0; i < n; ++i)
                    g.points_.push_back({cut_direction(c, i * g.dtheta_), g.dtheta_, c});
            return g;
        }

        /// Direction at angle t along cut c (azimuth for the horizontal cut, angle from +z for the vertical cuts).
        static Direction cut_direction(int c, double t)
        {
            switch (c)
            {
            case 0:
                return Direction(pi / 2.0, t);
            case 1:
                return Direction::from_vector({std::sin(t), 0.0, std::cos(t)});
            case 2:
                return Direction::from_vector({0.0, std::sin(t), std::cos(t)});
            default:
                throw std::invalid_argument("cut_direction: cut index must be 0, 1 or 2");
            }
        }

        Kind kind() const { return kind_; }
        int n_cuts() const { return n_cuts_; }
        double step_theta() const { return dtheta_; }
        double step_phi() const { return dphi_; }
        const std::vector<GridPoint> &points() const { return points_; }
        std::size_t size() const { return points_.size(); }
        bool exceeds_max_step() const { return std::max(dtheta_, dphi_) > max_grid_step * (1.0 + 1e-12); }

        std::string describe() const
        {
            std::ostringstream os;
            if (kind_ == Kind::full_sphere)
                os << "full_sphere(dtheta=" << dtheta_ / deg << "deg,dphi=" << dphi_ / deg << "deg)";
            else
                os << n_cuts_ << "_cuts(step=" << dtheta_ / deg << "deg)";
            return os.str();
        }

        /// Grid average of per-point values: the TRP estimate for EIRP-like values.
        double average(const std::vector<double> &values) const
        {
            if (values.size() != points_.size())
                throw std::invalid_argument("SamplingGrid::average: value count differs from grid size");
            if (kind_ == Kind::full_sphere)
            {
                double s = 0.0;
                for (std::size_t i = 0; i < values.size(); ++i)
                    s += points_[i].weight * values[i];
                return s / (4.0 * pi);
            }
            std::vector<double> per(static_cast<std::size_t>(n_cuts_), 0.0);
            for (std::size_t i = 0; i < values.size(); ++i)
                per[static_cast<std::size_t>(points_[i].cut)] += points_[i].weight * values[i];
            double s = 0.0;
            for (double v : per)
                s += v / two_pi;
            return s / n_cuts_;
        }

        double weight_sum(int cut = -1) const
        {
            double s = 0.0;
            for (const auto &p : points_)
                if (cut < 0 || p.cut == cut)
                    s += p.weight;
            return s;
        }

    private:
        static int divisions(double span, double step, const char *what)
        {
            if (!(step > 0.0) || !std::isfinite(step))
                throw std::invalid_argument(std::string("SamplingGrid: ") + what + " must be positive");
            const double q = span / step;
            const double n = std::round(q);
            if (n < 1.0 || std::abs(q - n) > 1e-9 * std::max(1.0, q))
                throw std::invalid_argument(std::string("SamplingGrid: ") + what + " does not divide its span");
            return static_cast<int>(n);
        }

        Kind kind_ = Kind::full_sphere;
        int n_cuts_ = 0;
        double dtheta_ = 0.0, dphi_ = 0.0;
        std::vector<GridPoint> points_;
    };

    template <class Evaluator>
    std::vector<double> sample_grid(const SamplingGrid &g, Evaluator &&eval)
    {
        std::vector<double> v;
        v.reserve(g.size());
        for (const auto &p : g.points())
            v.push_back(eval(p.dir));
        return v;
    }

    /// Grid TRP of an EIRP-like evaluator.
    template <class Evaluator>
    double trp_grid(Evaluator &&eval, const SamplingGrid &g)
    {
        return g.average(sample_grid(g, eval));
    }

    struct ReferenceSteps
    {
        double dtheta = 0.0, dphi = 0.0;
        double r_sph = 0.0, r_cyl = 0.0, wavelength = 0.0;
    };

    /// dtheta_ref = (lambda/2) / R_sph, dphi_ref = (lambda/2) / R_cyl
    inline ReferenceSteps reference_steps(double r_sph, double r_cyl, double wavelength)
    {
        if (!(r_sph > 0.0) || !(r_cyl > 0.0) || !(wavelength > 0.0))
            throw std::invalid_argument("reference_steps: radii and wavelength must be positive");
        if (r_cyl > r_sph * (1.0 + 1e-12))
            throw std::invalid_argument("reference_steps: cylinder radius exceeds sphere radius");
        return {0.5 * wavelength / r_sph, 0.5 * wavelength / r_cyl, r_sph, r_cyl, wavelength};
    }

    inline double sparsity_factor(double dtheta, double dphi, const ReferenceSteps &ref)
    {
        if (!(dtheta > 0.0) || !(dphi > 0.0))
            throw std::invalid_argument("sparsity_factor: steps must be positive");
        return std::max(dtheta / ref.dtheta, dphi / ref.dphi);
    }

    /// SF at the largest permitted step (15 deg); pi R_sph / (6 lambda) when R_cyl = R_sph.
    inline double sparsity_factor_max(const ReferenceSteps &ref)
    {
        return sparsity_factor(max_grid_step, max_grid_step, ref);
    }

    inline double sparsity_factor(const SamplingGrid &g, const ReferenceSteps &ref)
    {
        return sparsity_factor(g.step_theta(), g.step_phi(), ref);
    }

    /// Largest dividing step not above sf * ref_step, capped at 15 deg.
    inline double step_for_sf(double span, double sf, double ref_step)
    {
        if (!(sf > 0.0))
            throw std::invalid_argument("step_for_sf: SF must be positive");
        const double target = std::min(sf * ref_step, max_grid_step);
        const int n = static_cast<int>(std::ceil(span / target - 1e-9));
        return span / n;
    }

    enum class GridVariant
    {
        full_sphere,
        two_cuts,
        three_cuts
    };

    inline std::string to_string(GridVariant v)
    {
        switch (v)
        {
        case GridVariant::full_sphere:
            return "full_sphere";
        case GridVariant::two_cuts:
            return "two_cuts";
        case GridVariant::three_cuts:
            return "three_cuts";
        }
        return "unknown";
    }

    /// Grid whose steps realize the requested SF (or the 15 deg cap). Cut steps follow dtheta_ref, the
    /// smaller reference step.
    inline SamplingGrid grid_for_sf(GridVariant v, double sf, const ReferenceSteps &ref)
    {
        if (v == GridVariant::full_sphere)
            return SamplingGrid::full_sphere(step_for_sf(pi, sf, ref.dtheta), step_for_sf(two_pi, sf, ref.dphi));
        return SamplingGrid::orthogonal_cuts(v == GridVariant::two_cuts ? 2 : 3,
                                             step_for_sf(two_pi, sf, std::min(ref.dtheta, ref.dphi)));
    }

    /// Proposed margin [dB]: 2 (two cuts), 1.5 (three cuts), (SF - 1)/(SF_max - 1) (full sphere, 0 for SF <= 1).
    inline double delta_trp_margin(GridVariant v, double sf, double sf_max)
    {
        switch (v)
        {
        case GridVariant::two_cuts:
            return 2.0;
        case GridVariant::three_cuts:
            return 1.5;
        case GridVariant::full_sphere:
            if (sf <= 1.0)
                return 0.0;
            if (!(sf_max > 1.0))
                throw std::invalid_argument("delta_trp_margin: SF_max must exceed 1 when SF > 1");
            return (sf - 1.0) / (sf_max - 1.0);
        }
        return 0.0;
    }

    inline GridVariant variant_of(const SamplingGrid &g)
    {
        if (g.kind() == SamplingGrid::Kind::full_sphere)
            return GridVariant::full_sphere;
        return g.n_cuts() == 2 ? GridVariant::two_cuts : GridVariant::three_cuts;
    }

    struct TrpEstimate
    {
        double trp_grid = 0.0;   // W
        double delta_trp = 0.0;  // dB
        double trp_est = 0.0;    // W, trp_grid raised by delta_trp in dB
        double sf = 0.0;
        std::string grid;
    };

    inline TrpEstimate make_estimate(double trp_grid_w, const SamplingGrid &g, double sf, double margin_db)
    {
        if (!(trp_grid_w >= 0.0))
            throw std::invalid_argument("make_estimate: grid TRP must be non-negative");
        return {trp_grid_w, margin_db, trp_grid_w * from_db(margin_db), sf, g.describe()};
    }

    inline void write_grid_csv(std::ostream &os, const SamplingGrid &g)
    {
        os << "theta_deg,phi_deg,weight\n";
        os.precision(17);
        for (const auto &p : g.points())
            os << p.dir.theta() / deg << ',' << p.dir.phi() / deg << ',' << p.weight << '\n';
    }

    // ---------------------------------------------------------------------------------------------
    // Pattern multiplication
    // ---------------------------------------------------------------------------------------------

    /// Periodic cubic spline through uniformly spaced samples v_i at t_i = i * 2pi / N.
    class CutProfile
    {
    public:
        CutProfile() = default;
        explicit CutProfile(std::vector<double> values) : v_(std::move(values))
        {
            const std::size_t n = v_.size();
            if (n < 4)
                throw std::invalid_argument("CutProfile: at least 4 samples required");
            for (double x : v_)
                if (!std::isfinite(x))
                    throw std::invalid_argument("CutProfile: non-finite sample");
            h_ = two_pi / static_cast<double>(n);
            // Cyclic tridiagonal system for second derivatives: m_{i-1} + 4 m_i + m_{i+1} = 6 (v_{i+1} - 2v_i + v_{i-1}) / h^2
            std::vector<double> rhs(n);
            for (std::size_t i = 0; i < n; ++i)
                rhs[i] = 6.0 * (v_[(i + 1) % n] - 2.0 * v_[i] + v_[(i + n - 1) % n]) / (h_ * h_);
            m_ = solve_cyclic(rhs);
        }

        std::size_t size() const { return v_.size(); }
        double sample(std::size_t i) const { return v_[i]; }

        double operator()(double t) const
        {
            const std::size_t n = v_.size();
            double x = std::fmod(t, two_pi);
            if (x < 0.0)
                x += two_pi;
            double s = x / h_;
            auto i = static_cast<std::size_t>(std::floor(s));
            if (i >= n)
                i = n - 1;
            const double a = s - static_cast<double>(i); // in [0, 1]
            const std::size_t j = (i + 1) % n;
            const double b = 1.0 - a;
            return b * v_[i] + a * v_[j] + ((b * b * b - b) * m_[i] + (a * a * a - a) * m_[j]) * h_ * h_ / 6.0;
        }

    private:
        // Sherman-Morrison on the circulant (1, 4, 1) matrix
        static std::vector<double> solve_cyclic(const std::vector<double> &r)
        {
            const std::size_t n = r.size();
            const double gamma = -4.0;
            std::vector<double> diag(n, 4.0);
            diag[0] -= gamma;
            diag[n - 1] -= 1.0 / gamma;
            auto thomas = [&](std::vector<double> d)
            {
                std::vector<double> b = diag;
                for (std::size_t i = 1; i < n; ++i)
                {
                    const double w = 1.0 / b[i - 1];
                    b[i] -= w;
                    d[i] -= w * d[i - 1];
                }
                std::vector<double> x(n);
                x[n - 1] = d[n - 1] / b[n - 1];
                for (std::size_t i = n - 1; i-- > 0;)
                    x[i] = (d[i] - x[i + 1]) / b[i];
                return x;
            };
            std::vector<double> u(n, 0.0);
            u[0] = gamma;
            u[n - 1] = 1.0;
            const auto x = thomas(r);
            const auto z = thomas(u);
            const double fact = (x[0] + x[n - 1] / gamma) / (1.0 + z[0] + z[n - 1] / gamma);
            std::vector<double> out(n);
            for (std::size_t i = 0; i < n; ++i)
                out[i] = x[i] - fact * z[i];
            return out;
        }

        std::vector<double> v_, m_;
        double h_ = 0.0;
    };

    /// Separable uv-plane reconstruction S(u, v) = S_H(u) S_V(v) / S(0, 0) per hemisphere, with
    /// u = sin(theta) sin(phi), v = cos(theta), forward hemisphere x >= 0.
    class PatternProduct
    {
    public:
        /// horizontal: profile of the theta = pi/2 cut in phi; vertical: profile of the xz-plane cut in its angle
        /// from +z (direction (sin t, 0, cos t)).
        PatternProduct(CutProfile horizontal, CutProfile vertical, double tolerance_db = 0.5)
            : h_(std::move(horizontal)), v_(std::move(vertical))
        {
            double peak = 0.0;
            for (std::size_t i = 0; i < h_.size(); ++i)
                peak = std::max(peak, std::abs(h_.sample(i)));
            for (std::size_t i = 0; i < v_.size(); ++i)
                peak = std::max(peak, std::abs(v_.sample(i)));
            if (!(peak > 0.0))
                throw std::invalid_argument("pattern_multiply: both cuts are zero");
            for (int hemi = 0; hemi < 2; ++hemi)
            {
                const double sh = h_(hemi == 0 ? 0.0 : pi);
                const double sv = v_(hemi == 0 ? pi / 2.0 : -pi / 2.0);
                const double tiny = 1e-12 * peak;
                if (sh <= tiny && sv <= tiny && hemisphere_peak(hemi) <= tiny)
                {
                    cross_[hemi] = 0.0; // silent hemisphere
                    continue;
                }
                if (sh <= tiny || sv <= tiny)
                {
                    std::ostringstream os;
                    os << "pattern_multiply: zero crossover in the " << (hemi == 0 ? "forward" : "backward")
                       << " hemisphere (horizontal " << sh << ", vertical " << sv << ")";
                    throw std::invalid_argument(os.str());
                }
                if (std::abs(to_db(sh / sv)) > tolerance_db)
                {
                    std::ostringstream os;
                    os << "pattern_multiply: crossover mismatch in the " << (hemi == 0 ? "forward" : "backward")
                       << " hemisphere: horizontal " << sh << " vs vertical " << sv << " (" << to_db(sh / sv)
                       << " dB, tolerance " << tolerance_db << " dB)";
                    throw std::invalid_argument(os.str());
                }
                cross_[hemi] = std::sqrt(sh * sv);
            }
        }

        double horizontal(double u, bool forward) const
        {
            const double a = std::asin(std::clamp(u, -1.0, 1.0));
            return h_(forward ? a : pi - a);
        }
        double vertical(double v, bool forward) const
        {
            const double a = std::acos(std::clamp(v, -1.0, 1.0));
            return v_(forward ? a : -a);
        }
        double crossover(bool forward) const { return cross_[forward ? 0 : 1]; }

        double operator()(double u, double v, bool forward) const
        {
            const double c = crossover(forward);
            if (c == 0.0)
                return 0.0;
            return horizontal(u, forward) * vertical(v, forward) / c;
        }

    private:
        double hemisphere_peak(int hemi) const
        {
            double p = 0.0;
            for (int i = 0; i <= 64; ++i)
            {
                const double s = -1.0 + i / 32.0;
                p = std::max({p, std::abs(horizontal(s, hemi == 0)), std::abs(vertical(s, hemi == 0))});
            }
            return p;
        }

        CutProfile h_, v_;
        double cross_[2] = {0.0, 0.0};
    };

    inline PatternProduct pattern_multiply(CutProfile horizontal, CutProfile vertical, double tolerance_db = 0.5)
    {
        return PatternProduct(std::move(horizontal), std::move(vertical), tolerance_db);
    }

    /// r0^2 * integral over one hemisphere of S, using xi = cos(angle from the hemisphere axis):
    /// u = sqrt(1 - xi^2) cos(alpha), v = sqrt(1 - xi^2) sin(alpha), dOmega = dxi dalpha.
    template <class Fn>
    double uv_integrate(Fn &&s_uv, double r0 = 1.0, int n_xi = 401, int n_alpha = 720)
    {
        const auto xi = simpson(n_xi, 0.0, 1.0);
        const double da = two_pi / n_alpha;
        std::vector<double> ca(static_cast<std::size_t>(n_alpha)), sa(ca.size());
        for (int j = 0; j < n_alpha; ++j)
        {
            ca[j] = std::cos(j * da);
            sa[j] = std::sin(j * da);
        }
        double total = 0.0;
        for (std::size_t i = 0; i < xi.nodes.size(); ++i)
        {
            const double rho = std::sqrt(std::max(0.0, 1.0 - xi.nodes[i] * xi.nodes[i]));
            double row = 0.0;
            for (int j = 0; j < n_alpha; ++j)
            {
                const double val = s_uv(rho * ca[j], rho * sa[j]);
                if (!std::isfinite(val))
                    throw std::domain_error("uv_integrate: non-finite integrand sample");
                row += val;
            }
            total += xi.weights[i] * row * da;
        }
        return r0 * r0 * total;
    }

    /// TRP from pattern multiplication of EIRP-like cut profiles: (1/4pi) sum over hemispheres of the uv integral.
    inline double trp_pattern_multiplication(const PatternProduct &pm, int n_xi = 401, int n_alpha = 720)
    {
        double s = 0.0;
        for (bool fwd : {true, false})
            if (pm.crossover(fwd) > 0.0)
                s += uv_integrate([&](double u, double v) { return pm(u, v, fwd); }, 1.0, n_xi, n_alpha);
        return s / (4.0 * pi);
    }

    /// Cut profiles (horizontal, xz-plane) from values sampled on a cuts grid.
    inline std::pair<CutProfile, CutProfile> cut_profiles(const SamplingGrid &g, const std::vector<double> &values)
    {
        if (g.kind() != SamplingGrid::Kind::cuts)
            throw std::invalid_argument("cut_profiles: grid must consist of cuts");
        if (values.size() != g.size())
            throw std::invalid_argument("cut_profiles: value count differs from grid size");
        std::vector<double> h, v;
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            if (g.points()[i].cut == 0)
                h.push_back(values[i]);
            else if (g.points()[i].cut == 1)
                v.push_back(values[i]);
        }
        return {CutProfile(std::move(h)), CutProfile(std::move(v))};
    }

} // namespace otatrp

#endif
