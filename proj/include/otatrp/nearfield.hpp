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

#ifndef OTATRP_NEARFIELD_HPP
#define OTATRP_NEARFIELD_HPP

#include "otatrp/sources.hpp"
#include "otatrp/swe.hpp"

#include <ostream>
#include <sstream>
#include <vector>

// True and far-field-approximated radial power flux, TRP-vs-distance errors, a finite-aperture probe model,
// minimum test distances and the link-budget table.

namespace otatrp::nearfield
{
    using swe::FieldSample;
    using swe::SweCoefficients;

    /// Re[r-hat . (E_t x conj(H_t))] [W/m^2]; the radial components do not contribute.
    inline double flux_true(const FieldSample &f)
    {
        return std::real(f.e_t.theta * std::conj(f.h_t.phi) - f.e_t.phi * std::conj(f.h_t.theta));
    }

    /// SWE of an array from its far-field pattern; order defaults to ceil(kR) + 10.
    inline SweCoefficients fit_swe(const PointSourceArray &a, const ElementModel &e, int order = -1)
    {
        a.validate();
        const double R = a.sphere_radius();
        const int L = order > 0 ? order : swe::default_order(a.k, R);
        auto g = swe::FarFieldGrid::for_order(L);
        g.sample([&](const Direction &d) { return farfield_pattern(a, e, d); });
        return swe::coeffs_from_farfield(g, L, a.k, R);
    }

    /// |E_t|^2 / Z0 [W/m^2]
    inline double flux_farfield_approx(const FieldSample &f) { return f.e_t.norm2() / free_space_impedance; }

    struct FluxSample
    {
        double r = 0.0;
        Direction dir;
        double s_true = 0.0, s_ff = 0.0;
    };

    inline FluxSample flux_sample(const SweCoefficients &c, double r, const Direction &d)
    {
        const auto f = swe::evaluate_fields(c, r, d);
        return {r, d, flux_true(f), flux_farfield_approx(f)};
    }

    /// Ratio s_ff / s_true of a single l = 1 mode at kr: 1 + 1/z^2 (n = 1), 1 - 1/z^2 + 1/z^4 (n = 2).
    inline double dipole_flux_ratio(int n, double kr)
    {
        if (!(kr > 0.0))
            throw std::domain_error("dipole_flux_ratio: kr must be positive");
        const double z2 = kr * kr;
        if (n == 1)
            return 1.0 + 1.0 / z2;
        if (n == 2)
            return 1.0 - 1.0 / z2 + 1.0 / (z2 * z2);
        throw std::invalid_argument("dipole_flux_ratio: n must be 1 or 2");
    }

    struct SphereFlux
    {
        double trp_true = 0.0;   // r^2 * integral of s_true
        double trp_approx = 0.0; // r^2 * integral of s_ff
        double min_true = 0.0;   // most negative s_true sample
        double peak_true = 0.0;
    };

    /// Both flux integrals over the sphere of radius r, on a Gauss-Legendre x trapezoid grid that is exact for
    /// the band-limited products of order-L fields.
    inline SphereFlux integrate_flux(const SweCoefficients &c, double r)
    {
        const int L = std::max(c.order(), 1);
        const int nt = L + 2, np = 2 * L + 2;
        const auto gl = gauss_legendre(nt);
        std::vector<double> phis(static_cast<std::size_t>(np));
        for (int j = 0; j < np; ++j)
            phis[j] = two_pi * j / np;
        SphereFlux out;
        for (int i = 0; i < nt; ++i)
        {
            const auto ring = swe::evaluate_fields_ring(c, r, std::acos(gl.nodes[i]), phis);
            double st = 0.0, sa = 0.0;
            for (const auto &f : ring)
            {
                const double t = flux_true(f);
                st += t;
                sa += flux_farfield_approx(f);
                out.min_true = std::min(out.min_true, t);
                out.peak_true = std::max(out.peak_true, t);
            }
            out.trp_true += gl.weights[i] * st;
            out.trp_approx += gl.weights[i] * sa;
        }
        const double scale = r * r * two_pi / np;
        out.trp_true *= scale;
        out.trp_approx *= scale;
        return out;
    }

    struct DistanceError
    {
        double r = 0.0;
        double r_over_lambda = 0.0;
        double r_minus_R_over_lambda = 0.0;
        double trp_true = 0.0, trp_approx = 0.0;
        double err_db = 0.0;          // |10 log10(TRP_approx / TRP_true)|
        double backprop_err_db = 0.0; // truncation error of back-propagation to r
        int backprop_order = 0;
        bool negative_flux = false; // s_true below -1e-6 x peak somewhere on the sphere
    };

    /// Flux-approximation and back-propagation TRP errors per radius. Radii below R + delta_r are rejected.
    inline std::vector<DistanceError> approximation_error_vs_distance(const SweCoefficients &c,
                                                                      const std::vector<double> &radii,
                                                                      double delta_r)
    {
        const double lam = c.wavelength();
        const double R = c.source_radius();
        std::vector<DistanceError> out;
        out.reserve(radii.size());
        for (double r : radii)
        {
            if (r < R + delta_r * (1.0 - 1e-12))
            {
                std::ostringstream os;
                os << "approximation_error_vs_distance: radius " << r << " m lies in the exclusion zone r <= R + dR = "
                   << R + delta_r << " m";
                throw std::domain_error(os.str());
            }
            const auto fl = integrate_flux(c, r);
            const auto bp = swe::back_propagate(c, r);
            DistanceError e;
            e.r = r;
            e.r_over_lambda = r / lam;
            e.r_minus_R_over_lambda = (r - R) / lam;
            e.trp_true = fl.trp_true;
            e.trp_approx = fl.trp_approx;
            e.err_db = std::abs(to_db(fl.trp_approx / fl.trp_true));
            e.backprop_err_db = bp.error_db;
            e.backprop_order = bp.order;
            e.negative_flux = fl.min_true < -1e-6 * fl.peak_true;
            out.push_back(e);
        }
        return out;
    }

    inline void write_distance_csv(std::ostream &os, const std::vector<DistanceError> &rows)
    {
        os << "r_over_lambda,r_minus_R_over_lambda,err_db,backprop_err_db\n";
        os.precision(17);
        for (const auto &e : rows)
            os << e.r_over_lambda << ',' << e.r_minus_R_over_lambda << ',' << e.err_db << ',' << e.backprop_err_db
               << '\n';
    }

    // ---------------------------------------------------------------------------------------------
    // Probe
    // ---------------------------------------------------------------------------------------------

    /// Rectangular aperture tangent to the measurement sphere, flat phase. The current runs along the height;
    /// the cosine taper (TE10-like) varies across the width.
    struct ProbeModel
    {
        enum class Taper
        {
            uniform,
            cosine
        };

        double width = 0.0;  // m
        double height = 0.0; // m
        Taper taper = Taper::cosine;
        double beta = 1.2;

        /// Height defaults to half the width.
        static ProbeModel with_width(double w, double aspect = 0.5, Taper t = Taper::cosine)
        {
            ProbeModel p{w, aspect * w, t, 1.2};
            p.validate();
            return p;
        }

        void validate() const
        {
            if (!(width > 0.0) || !(height > 0.0))
                throw std::invalid_argument("ProbeModel: width and height must be positive");
        }

        double taper_at(double x) const
        {
            return taper == Taper::uniform ? 1.0 : std::cos(pi * x / width);
        }

        /// Integral of the taper over the aperture [m^2]
        double taper_moment() const { return (taper == Taper::uniform ? 1.0 : 2.0 / pi) * width * height; }

        /// Effective area [m^2]: aperture efficiency 8/pi^2 (cosine) or 1 (uniform) times w h.
        double effective_area() const { return (taper == Taper::uniform ? 1.0 : 8.0 / (pi * pi)) * width * height; }

        int nodes_across(double lambda) const { return std::max(4, static_cast<int>(std::ceil(8.0 * width / lambda))); }
        int nodes_along(double lambda) const { return std::max(4, static_cast<int>(std::ceil(8.0 * height / lambda))); }
    };

    /// Electric field at a Cartesian point.
    inline ComplexVec3 electric_field_at(const SweCoefficients &c, const Vec3 &p)
    {
        return swe::evaluate_fields(c, p.norm(), Direction::from_vector(p)).e_cartesian();
    }

    enum class Polarization
    {
        theta,
        phi
    };

    /// Reaction integral V = integral over the aperture of E . j_a taper dA (uncalibrated), aperture centered at
    /// r0 r-hat, boresight along -r-hat. Theta polarization: current along theta-hat, width along phi-hat.
    template <class FieldFn>
    cplx probe_voltage(const ProbeModel &p, FieldFn &&efield, double r0, const Direction &d, Polarization pol,
                       double lambda)
    {
        p.validate();
        const Vec3 center = unit_radial(d) * r0;
        const Vec3 th = unit_theta(d), ph = unit_phi(d);
        const Vec3 jdir = pol == Polarization::theta ? th : ph;
        const Vec3 wdir = pol == Polarization::theta ? ph : th;
        const auto qa = gauss_legendre(p.nodes_across(lambda), -0.5 * p.width, 0.5 * p.width);
        const auto qh = gauss_legendre(p.nodes_along(lambda), -0.5 * p.height, 0.5 * p.height);
        cplx v{};
        for (std::size_t i = 0; i < qa.nodes.size(); ++i)
        {
            const double t = p.taper_at(qa.nodes[i]) * qa.weights[i];
            for (std::size_t j = 0; j < qh.nodes.size(); ++j)
            {
                const Vec3 x = center + wdir * qa.nodes[i] + jdir * qh.nodes[j];
                v += t * qh.weights[j] * efield(x).dot(jdir);
            }
        }
        return v;
    }

    /// Dual-polarized received power |V_theta|^2 + |V_phi|^2 (uncalibrated) from an SWE source. The probe center
    /// must lie outside the exclusion zone r0 >= R + delta_r.
    inline double probe_power(const ProbeModel &p, const SweCoefficients &c, double r0, const Direction &d,
                              double delta_r)
    {
        if (r0 < c.source_radius() + delta_r * (1.0 - 1e-12))
            throw std::domain_error("probe_power: aperture lies inside the exclusion zone r0 < R + dR");
        auto ef = [&](const Vec3 &x) { return electric_field_at(c, x); };
        const double lam = c.wavelength();
        return std::norm(probe_voltage(p, ef, r0, d, Polarization::theta, lam)) +
               std::norm(probe_voltage(p, ef, r0, d, Polarization::phi, lam));
    }

    inline double min_distance_hpbw(double R, double w, double lambda, double beta = 1.2)
    {
        if (!(R > 0.0) || !(w > 0.0) || !(lambda > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("min_distance_hpbw: inputs must be positive");
        return (R / beta) * w / (0.5 * lambda);
    }

    inline double min_distance_resolution(double R, double delta_r, double w, double lambda)
    {
        if (!(R > 0.0) || !(delta_r >= 0.0) || !(w > 0.0) || !(lambda > 0.0))
            throw std::invalid_argument("min_distance_resolution: inputs must be positive");
        return (R + delta_r) * w / (0.5 * lambda);
    }

    /// Constant c with c * r^2 * integral |V|^2 dOmega = TRP(reference) at far radius r. Calibrated flux estimate
    /// at any point is then c * probe_power.
    inline double calibrate_probe(const ProbeModel &p, const SweCoefficients &reference, double far_radius,
                                  double delta_r)
    {
        const double lam = reference.wavelength();
        const double D = 2.0 * reference.source_radius();
        const double need = std::max({2.0 * D * D / lam, 2.0 * p.width * p.width / lam, 2.0 * p.height * p.height / lam,
                                      min_distance_resolution(std::max(reference.source_radius(), 1e-9 * lam), delta_r,
                                                              p.width, lam)});
        if (far_radius < need)
        {
            std::ostringstream os;
            os << "calibrate_probe: far radius " << far_radius << " m below the required " << need << " m";
            throw std::domain_error(os.str());
        }
        const int L = std::max(reference.order(), 1);
        const int nt = L + 8, np = 2 * L + 8;
        const auto gl = gauss_legendre(nt);
        double s = 0.0;
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < np; ++j)
                s += gl.weights[i] * (two_pi / np) *
                     probe_power(p, reference, far_radius, Direction(std::acos(gl.nodes[i]), two_pi * j / np), delta_r);
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("calibrate_probe: probe has zero response to the reference source");
        return swe::trp_of(reference) / (far_radius * far_radius * s);
    }

    // ---------------------------------------------------------------------------------------------
    // Link budget
    // ---------------------------------------------------------------------------------------------

    struct LinkBudgetRow
    {
        double r = 0.0;
        double width = 0.0, a_eff = 0.0;
        double pacc_avg_w = 0.0, pacc_peak_w = 0.0;
        bool below_min_distance = false;
    };

    struct LinkBudgetConfig
    {
        double trp = 1.0;          // W
        double R = 0.0;            // m
        double delta_r = 0.0;      // m
        double lambda = 0.0;       // m
        double directivity = 1.0;  // far-field peak-to-average ratio
        bool optimal = true;       // w = (lambda/2) r / (R + dR); otherwise fixed_width
        double fixed_width = 0.0;  // m
        double aspect = 0.5;       // height / width
    };

    /// Flux breakpoint 2 D^2 / lambda with D = 2R.
    inline double link_breakpoint(const LinkBudgetConfig &cfg) { return 8.0 * cfg.R * cfg.R / cfg.lambda; }

    /// Average accepted power A_eff TRP / (4 pi r^2); peak flux constant up to the breakpoint and falling as 1/r^2
    /// beyond, matched to the far-field peak G_D TRP / (4 pi r^2) there.
    inline std::vector<LinkBudgetRow> link_budget(const LinkBudgetConfig &cfg, const std::vector<double> &radii)
    {
        if (!(cfg.trp > 0.0) || !(cfg.R > 0.0) || !(cfg.lambda > 0.0) || !(cfg.delta_r >= 0.0))
            throw std::invalid_argument("link_budget: TRP, R and lambda must be positive");
        if (!cfg.optimal && !(cfg.fixed_width > 0.0))
            throw std::invalid_argument("link_budget: fixed policy needs a positive width");
        const double rb = link_breakpoint(cfg);
        const double s_peak_bp = cfg.directivity * cfg.trp / (4.0 * pi * rb * rb);
        std::vector<LinkBudgetRow> out;
        for (double r : radii)
        {
            LinkBudgetRow row;
            row.r = r;
            row.width = cfg.optimal ? 0.5 * cfg.lambda * r / (cfg.R + cfg.delta_r) : cfg.fixed_width;
            ProbeModel p = ProbeModel::with_width(row.width, cfg.aspect);
            row.a_eff = p.effective_area();
            row.pacc_avg_w = row.a_eff * cfg.trp / (4.0 * pi * r * r);
            const double s_peak = r <= rb ? s_peak_bp : s_peak_bp * (rb / r) * (rb / r);
            row.pacc_peak_w = row.a_eff * s_peak;
            row.below_min_distance = r < min_distance_resolution(cfg.R, cfg.delta_r, row.width, cfg.lambda) * (1.0 - 1e-12);
            out.push_back(row);
        }
        return out;
    }

    inline void write_link_budget_csv(std::ostream &os, const std::vector<LinkBudgetRow> &rows, double R, double lambda)
    {
        os << "r_over_lambda,r_minus_R_over_lambda,width_over_lambda,pacc_avg_dbm,pacc_peak_dbm,below_min_distance\n";
        os.precision(17);
        for (const auto &r : rows)
            os << r.r / lambda << ',' << (r.r - R) / lambda << ',' << r.width / lambda << ',' << watts_to_dbm(r.pacc_avg_w)
               << ',' << watts_to_dbm(r.pacc_peak_w) << ',' << (r.below_min_distance ? 1 : 0) << '\n';
    }

} // namespace otatrp::nearfield

#endif
