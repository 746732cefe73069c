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

#include "otatrp/io.hpp"
#include "otatrp/otatrp.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace otatrp;
using io::json;

namespace
{
    constexpr const char *tool_version = "0.1.0";

    constexpr int exit_input = 2;
    constexpr int exit_infeasible = 3;

    /// Raised for grids that cannot be built from the requested steps.
    struct InfeasibleGrid : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // ------------------------------------------------------------------------------------------------
    // estimate
    // ------------------------------------------------------------------------------------------------

    struct Source
    {
        std::string name;
        std::function<double(const Direction &)> eirp;
        double r_sph = 0.0, r_cyl = 0.0, wavelength = 0.0; // zero radius: size unknown
    };

    Source builtin_source(const std::string &name)
    {
        Source s;
        s.name = name;
        if (name == "sin2")
            s.eirp = [](const Direction &d) { return std::pow(std::sin(d.theta()), 2); };
        else if (name == "sin2cos2")
            s.eirp = [](const Direction &d) { return std::pow(std::sin(d.theta()) * std::cos(d.phi()), 2); };
        else if (name == "isotropic")
            s.eirp = [](const Direction &) { return 1.0; };
        else if (name == "dipole8x8")
        {
            const auto a = planar_array(8, 8, 0.5, 0.5, two_pi);
            s.eirp = [a](const Direction &d) { return eirp_pattern(a, ElementModel::half_wave_dipole(), d); };
            s.r_sph = a.sphere_radius();
            s.r_cyl = a.cylinder_radius();
            s.wavelength = a.wavelength();
        }
        else
            throw io::InputError("unknown builtin source '" + name + "'");
        return s;
    }

    Source file_source(const std::string &path)
    {
        const json j = io::read_json_file(path);
        const std::string type = j.value("type", j.contains("coefficients") ? "swe" : "array");
        Source s;
        s.name = path;
        if (type == "swe")
        {
            auto c = std::make_shared<swe::SweCoefficients>(io::swe_from_json(j));
            s.eirp = [c](const Direction &d) { return swe::eirp(*c, d); };
            s.r_sph = s.r_cyl = c->source_radius();
            s.wavelength = c->wavelength();
        }
        else if (type == "array")
        {
            auto f = std::make_shared<io::ArrayFile>(io::array_from_json(j));
            s.eirp = [f](const Direction &d) { return eirp_pattern(f->array, f->element, d); };
            s.r_sph = f->array.sphere_radius();
            s.r_cyl = f->array.cylinder_radius();
            s.wavelength = f->array.wavelength();
        }
        else
            throw io::InputError(path + ": unknown source type '" + type + "'");
        return s;
    }

    struct EstimateOptions
    {
        std::string source_file, builtin, grid = "full", out;
        double step_deg = 0.0, sf = 0.0, margin_db = -1.0;
        bool pm = false;
    };

    int cmd_estimate(const EstimateOptions &o)
    {
        const Source s = o.source_file.empty() ? builtin_source(o.builtin) : file_source(o.source_file);
        const GridVariant v = io::grid_variant_from_name(o.grid);
        const bool sized = s.r_sph > 0.0;
        std::optional<ReferenceSteps> ref;
        if (sized)
            ref = reference_steps(s.r_sph, std::max(s.r_cyl, 1e-9 * s.r_sph), s.wavelength);

        SamplingGrid g;
        try
        {
            if (o.step_deg > 0.0)
            {
                const double st = o.step_deg * deg;
                if (st > max_grid_step * (1.0 + 1e-12))
                    throw InfeasibleGrid("step exceeds the 15 deg maximum");
                g = v == GridVariant::full_sphere ? SamplingGrid::full_sphere(st, st)
                                                  : SamplingGrid::orthogonal_cuts(v == GridVariant::two_cuts ? 2 : 3, st);
            }
            else if (sized)
                g = grid_for_sf(v, o.sf > 0.0 ? o.sf : 1.0, *ref);
            else if (o.sf > 0.0)
                throw InfeasibleGrid("--sf needs a source of known size; give --step");
            else
            {
                const double st = 5.0 * deg;
                g = v == GridVariant::full_sphere ? SamplingGrid::full_sphere(st, st)
                                                  : SamplingGrid::orthogonal_cuts(v == GridVariant::two_cuts ? 2 : 3, st);
            }
        }
        catch (const std::invalid_argument &e)
        {
            throw InfeasibleGrid(e.what());
        }

        const auto values = sample_grid(g, s.eirp);
        double trp = g.average(values);
        const double sf = sized ? sparsity_factor(g, *ref) : 0.0;
        double margin = 0.0;
        std::string method = "grid";
        if (o.pm)
        {
            if (v == GridVariant::full_sphere)
                throw io::InputError("--pm requires a cuts grid");
            const auto [h, vc] = cut_profiles(g, values);
            trp = trp_pattern_multiplication(pattern_multiply(h, vc));
            method = "pattern_multiplication";
        }
        else if (o.margin_db >= 0.0)
            margin = o.margin_db;
        else if (sized)
        {
            const double sfm = sparsity_factor_max(*ref);
            margin = (v == GridVariant::full_sphere && !(sfm > 1.0)) ? 0.0 : delta_trp_margin(v, sf, sfm);
        }
        const auto est = make_estimate(trp, g, sf, margin);
        json rep = io::to_json(est);
        rep["source"] = s.name;
        rep["method"] = method;
        rep["points"] = g.size();
        rep["surface_integral"] = 4.0 * pi * trp; // closed-surface integral of the pattern, 4 pi TRP
        const std::string text = rep.dump(2) + "\n";
        std::cout << text;
        if (!o.out.empty())
            io::write_text_file(o.out, text);
        return 0;
    }

    // ------------------------------------------------------------------------------------------------
    // study
    // ------------------------------------------------------------------------------------------------

    struct StudyOptions
    {
        std::string kind, config, out_dir = ".";
        std::optional<std::uint64_t> seed;
        std::optional<int> samples, threads;
        std::vector<double> sizes, rho_max, sf;
    };

    std::string csv_of(const std::function<void(std::ostream &)> &w)
    {
        std::ostringstream os;
        w(os);
        return os.str();
    }

    int cmd_study(const StudyOptions &o, const std::string &command_line)
    {
        static const std::vector<std::string> kinds = {"small", "sparse", "beamsweep", "nearfield"};
        if (std::find(kinds.begin(), kinds.end(), o.kind) == kinds.end())
            throw io::InputError("invalid study kind '" + o.kind + "'");
        mc::StudyConfig cfg;
        if (!o.config.empty())
            io::apply_json(cfg, io::read_json_file(o.config));
        cfg.kind = o.kind;
        if (!o.seed)
            throw io::InputError("--seed is required for studies");
        cfg.seed = *o.seed;
        if (o.samples)
        {
            if (*o.samples < 1)
                throw io::InputError("--samples must be >= 1");
            cfg.n_samples = static_cast<std::size_t>(*o.samples);
        }
        if (o.threads)
            cfg.threads = static_cast<unsigned>(std::max(0, *o.threads));
        if (!o.sizes.empty())
            cfg.sizes = o.sizes;
        if (!o.rho_max.empty())
            cfg.rho_max = o.rho_max;
        if (!o.sf.empty())
            cfg.sf = o.sf;
        try
        {
            cfg.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw io::InputError(e.what());
        }

        fs::create_directories(o.out_dir);
        const auto t0 = std::chrono::steady_clock::now();
        std::map<std::string, std::string> files; // name -> contents
        std::cout.precision(6);
        if (o.kind == "small")
        {
            const auto r = mc::run_small_source_study(cfg);
            files["small.csv"] = csv_of([&](std::ostream &os) { mc::write_small_csv(os, r); });
            std::vector<std::pair<std::string, const mc::EmpiricalCdf *>> series;
            for (const auto &g : r.grids)
                series.emplace_back(g.grid, &g.errors);
            files["small_cdf.csv"] = csv_of([&](std::ostream &os) { mc::write_cdf_csv(os, series); });
            for (const auto &g : r.grids)
                std::cout << g.grid << ": p" << cfg.percentile << " = " << g.p_db << " dB, delta_trp = " << g.delta_trp_db
                          << " dB\n";
        }
        else if (o.kind == "sparse")
        {
            const auto r = mc::run_large_array_study(cfg);
            files["sparse.csv"] = csv_of([&](std::ostream &os) { mc::write_sparse_csv(os, r); });
            for (const auto &w : r.rows)
                std::cout << w.grid << " D=" << w.d_over_lambda << " rho_max=" << w.rho_max << " SF=" << w.sf
                          << ": delta_trp = " << w.delta_trp_db << " dB (table " << w.margin_db << " dB)\n";
        }
        else if (o.kind == "beamsweep")
        {
            const auto r = mc::run_beam_sweep_study(cfg);
            files["beamsweep.csv"] = csv_of([&](std::ostream &os) { mc::write_beam_sweep_csv(os, r); });
            files["beamsweep_trp.csv"] = csv_of([&](std::ostream &os) { mc::write_beam_trp_csv(os, r); });
            for (std::size_t i = 0; i < r.harmonics.size(); ++i)
                std::cout << "harmonic " << r.harmonics[i] << ": argmax beam " << r.argmax_beam[i] << "\n";
            for (const auto &c : r.curves)
            {
                double worst = 0.0;
                for (double e : c.beam_error_db)
                    worst = std::max(worst, std::abs(e));
                std::cout << "h=" << c.harmonic << ' ' << c.grid << " SF=" << c.sf << ": average " << c.average_error_db
                          << " dB, worst beam " << worst << " dB\n";
            }
        }
        else
        {
            const auto r = mc::run_nearfield_error_study(cfg);
            files["nearfield.csv"] = csv_of([&](std::ostream &os) { mc::write_nearfield_csv(os, r); });
            files["nearfield_summary.csv"] = csv_of([&](std::ostream &os) { mc::write_nearfield_summary_csv(os, r); });
            for (const auto &a : r)
                std::cout << a.name << ": max error beyond R+3 lambda " << a.max_err_beyond_3_db
                          << " dB, back-propagation " << a.max_backprop_err_db << " dB\n";
        }
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        json outputs = json::array();
        for (const auto &[name, text] : files)
        {
            const auto p = (fs::path(o.out_dir) / name).string();
            io::write_text_file(p, text);
            outputs.push_back(p);
        }
        json manifest = {{"command", command_line},
                         {"config", io::to_json(cfg)},
                         {"seed", cfg.seed},
                         {"tool_version", tool_version},
                         {"outputs", outputs},
                         {"wall_time_s", wall}};
        io::write_text_file((fs::path(o.out_dir) / (o.kind + "_manifest.json")).string(), manifest.dump(2) + "\n");
        return 0;
    }

    // ------------------------------------------------------------------------------------------------
    // plotdata
    // ------------------------------------------------------------------------------------------------

    struct Table
    {
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;

        int column(const std::string &name) const
        {
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == name)
                    return static_cast<int>(i);
            return -1;
        }
    };

    std::vector<std::string> split_csv(const std::string &line)
    {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            out.push_back(cell);
        if (!line.empty() && line.back() == ',')
            out.emplace_back();
        return out;
    }

    Table read_csv(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw io::InputError("cannot open " + path);
        Table t;
        std::string line;
        if (!std::getline(in, line))
            throw io::InputError(path + ": empty file");
        t.header = split_csv(line);
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            auto r = split_csv(line);
            if (r.size() != t.header.size())
                throw io::InputError(path + ": ragged row");
            t.rows.push_back(std::move(r));
        }
        return t;
    }

    struct Point
    {
        std::string series;
        double x, y;
    };

    double to_num(const std::string &s)
    {
        try
        {
            std::size_t n = 0;
            const double v = std::stod(s, &n);
            if (n != s.size())
                throw io::InputError("non-numeric cell '" + s + "'");
            return v;
        }
        catch (const std::logic_error &)
        {
            throw io::InputError("non-numeric cell '" + s + "'");
        }
    }

    /// Long-format (series, x, y) from any study CSV, keyed by its header.
    std::vector<Point> reshape(const Table &t, std::string &x_label, std::string &y_label)
    {
        std::vector<Point> pts;
        auto col = [&](const char *n)
        {
            const int c = t.column(n);
            if (c < 0)
                throw io::InputError(std::string("schema mismatch: missing column '") + n + "'");
            return static_cast<std::size_t>(c);
        };
        if (t.column("delta_trp_db") >= 0 && t.column("sf") >= 0 && t.column("d_over_lambda") >= 0)
        {
            x_label = "SF";
            y_label = "delta TRP [dB]";
            const auto g = col("grid"), d = col("d_over_lambda"), r = col("rho_max"), x = col("sf"), y = col("delta_trp_db");
            for (const auto &row : t.rows)
                pts.push_back({row[g] + " D=" + row[d] + " rho_max=" + row[r], to_num(row[x]), to_num(row[y])});
        }
        else if (t.column("error_db") >= 0 && t.column("cdf") >= 0)
        {
            x_label = "error [dB]";
            y_label = "CDF";
            const auto s = col("series"), x = col("error_db"), y = col("cdf");
            for (const auto &row : t.rows)
                pts.push_back({row[s], to_num(row[x]), to_num(row[y])});
        }
        else if (t.column("r_over_lambda") >= 0 && t.column("err_db") >= 0)
        {
            x_label = "r / lambda";
            y_label = "error [dB]";
            const int a = t.column("array");
            const auto x = col("r_over_lambda"), y = col("err_db"), b = col("backprop_err_db");
            for (const auto &row : t.rows)
            {
                const std::string name = a >= 0 ? row[static_cast<std::size_t>(a)] : std::string("source");
                pts.push_back({name + " flux approximation", to_num(row[x]), to_num(row[y])});
                pts.push_back({name + " back-propagation", to_num(row[x]), to_num(row[b])});
            }
        }
        else if (t.column("signal") >= 0 && t.column("error_db") >= 0)
        {
            x_label = "SF";
            y_label = "TRP error [dB]";
            const auto h = col("harmonic"), g = col("grid"), s = col("signal"), x = col("sf"), y = col("error_db");
            for (const auto &row : t.rows)
                pts.push_back({"h=" + row[h] + " " + row[g] + " " + row[s], to_num(row[x]), to_num(row[y])});
        }
        else
            throw io::InputError("schema mismatch: unrecognized study output");
        // Stable order within each series by x
        std::stable_sort(pts.begin(), pts.end(), [](const Point &a, const Point &b)
                         { return a.series != b.series ? a.series < b.series : a.x < b.x; });
        return pts;
    }

    std::string svg_chart(const std::vector<Point> &pts, const std::string &xl, const std::string &yl)
    {
        const double W = 800, H = 500, m = 60;
        double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
        bool logx = true;
        for (const auto &p : pts)
            logx = logx && p.x > 0.0;
        auto fx = [&](double x) { return logx ? std::log10(x) : x; };
        for (const auto &p : pts)
        {
            x0 = std::min(x0, fx(p.x));
            x1 = std::max(x1, fx(p.x));
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
        // Linear x unless the axis spans more than three decades
        if (logx && x1 - x0 < 3.0)
        {
            logx = false;
            x0 = 1e300;
            x1 = -1e300;
            for (const auto &p : pts)
            {
                x0 = std::min(x0, p.x);
                x1 = std::max(x1, p.x);
            }
        }
        if (x1 <= x0)
            x1 = x0 + 1.0;
        if (y1 <= y0)
            y1 = y0 + 1.0;
        auto px = [&](double x) { return m + (fx(x) - x0) / (x1 - x0) * (W - 2 * m); };
        auto py = [&](double y) { return H - m - (y - y0) / (y1 - y0) * (H - 2 * m); };
        std::ostringstream os;
        os.precision(6);
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << "<line x1=\"" << m << "\" y1=\"" << H - m << "\" x2=\"" << W - m << "\" y2=\"" << H - m << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << H - m << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << xl << (logx ? " (log)" : "")
           << "</text>\n";
        os << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15 " << H / 2 << ")\" text-anchor=\"middle\">" << yl
           << "</text>\n";
        os << "<text x=\"" << m << "\" y=\"" << H - m + 18 << "\" font-size=\"11\">" << (logx ? std::pow(10.0, x0) : x0)
           << "</text>\n";
        os << "<text x=\"" << W - m << "\" y=\"" << H - m + 18 << "\" font-size=\"11\" text-anchor=\"end\">"
           << (logx ? std::pow(10.0, x1) : x1) << "</text>\n";
        os << "<text x=\"" << m - 5 << "\" y=\"" << H - m << "\" font-size=\"11\" text-anchor=\"end\">" << y0 << "</text>\n";
        os << "<text x=\"" << m - 5 << "\" y=\"" << m + 10 << "\" font-size=\"11\" text-anchor=\"end\">" << y1 << "</text>\n";
        static const char *colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
        std::size_t si = 0;
        for (std::size_t i = 0; i < pts.size();)
        {
            std::size_t j = i;
            os << "<polyline fill=\"none\" stroke=\"" << colors[si % 8] << "\" points=\"";
            for (; j < pts.size() && pts[j].series == pts[i].series; ++j)
                os << px(pts[j].x) << ',' << py(pts[j].y) << ' ';
            os << "\"><title>" << pts[i].series << "</title></polyline>\n";
            ++si;
            i = j;
        }
        os << "</svg>\n";
        return os.str();
    }

    int cmd_plotdata(const std::string &input, const std::string &out, const std::string &svg)
    {
        const Table t = read_csv(input);
        std::string xl, yl;
        const auto pts = reshape(t, xl, yl);
        std::ostringstream os;
        os.precision(17);
        os << "series,x,y\n";
        for (const auto &p : pts)
            os << p.series << ',' << p.x << ',' << p.y << '\n';
        if (out.empty())
            std::cout << os.str();
        else
            io::write_text_file(out, os.str());
        if (!svg.empty())
            io::write_text_file(svg, svg_chart(pts, xl, yl));
        return 0;
    }

    // ------------------------------------------------------------------------------------------------
    // swe
    // ------------------------------------------------------------------------------------------------

    int cmd_swe_fit(const std::string &array_file, int order, const std::string &out)
    {
        const auto f = io::array_from_json(io::read_json_file(array_file));
        const auto c = nearfield::fit_swe(f.array, f.element, order);
        const std::string text = io::to_json(c).dump() + "\n";
        if (out.empty())
            std::cout << text;
        else
            io::write_text_file(out, text);
        std::cerr << "order " << c.order() << ", TRP " << swe::trp_of(c) << " W\n";
        return 0;
    }

    int cmd_swe_eval(const std::string &swe_file, double r, double theta_deg, double phi_deg)
    {
        const auto c = io::swe_from_json(io::read_json_file(swe_file));
        if (!(r > c.source_radius()))
            throw io::InputError("--r must exceed the source radius");
        const auto f = swe::evaluate_fields(c, r, Direction(theta_deg * deg, phi_deg * deg));
        auto cj = [](cplx z) { return json::array({z.real(), z.imag()}); };
        const json j = {{"r", r},
                        {"theta_deg", theta_deg},
                        {"phi_deg", phi_deg},
                        {"e_r", cj(f.e_r)},
                        {"e_theta", cj(f.e_t.theta)},
                        {"e_phi", cj(f.e_t.phi)},
                        {"h_r", cj(f.h_r)},
                        {"h_theta", cj(f.h_t.theta)},
                        {"h_phi", cj(f.h_t.phi)},
                        {"flux_true", nearfield::flux_true(f)},
                        {"flux_farfield_approx", nearfield::flux_farfield_approx(f)},
                        {"eirp_farfield", swe::eirp(c, Direction(theta_deg * deg, phi_deg * deg))}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    int cmd_swe_roundtrip(const std::string &swe_file, std::optional<std::uint64_t> seed, int order)
    {
        swe::SweCoefficients c;
        if (!swe_file.empty())
            c = io::swe_from_json(io::read_json_file(swe_file));
        else
        {
            if (!seed)
                throw io::InputError("roundtrip needs --swe or --seed");
            auto rng = mc::sample_rng(*seed, 0x53, 0);
            c = swe::random_mode_coeffs(static_cast<int>(swe::SweCoefficients::mode_count(order)), rng, order);
        }
        auto g = swe::FarFieldGrid::for_order(c.order());
        g.sample_from(c);
        const auto back = swe::coeffs_from_farfield(g, c.order(), c.wavenumber(), c.source_radius());
        double worst = 0.0, peak = 0.0;
        for (std::size_t i = 0; i < c.data().size(); ++i)
            peak = std::max(peak, std::abs(c.data()[i]));
        for (std::size_t i = 0; i < c.data().size(); ++i)
            worst = std::max(worst, std::abs(back.data()[i] - c.data()[i]) / peak);
        const json j = {{"order", c.order()},
                        {"modes", c.data().size()},
                        {"max_error_rel_peak", worst},
                        {"trp_parseval", swe::trp_of(c)},
                        {"trp_grid", g.trp()}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::string join_args(int argc, char **argv)
    {
        std::string s;
        for (int i = 0; i < argc; ++i)
            s += (i ? " " : "") + std::string(argv[i]);
        return s;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Over-the-air total radiated power assessment toolkit"};
    app.set_version_flag("--version", tool_version);
    app.require_subcommand(1);

    EstimateOptions eo;
    auto *est = app.add_subcommand("estimate", "Grid TRP estimate with margin for a source file or builtin");
    auto *src = est->add_option("--source", eo.source_file, "SWE or array JSON file");
    auto *bin = est->add_option("--builtin", eo.builtin, "sin2 | sin2cos2 | isotropic | dipole8x8");
    src->excludes(bin);
    est->add_option("--grid", eo.grid, "full | cuts2 | cuts3")->capture_default_str();
    est->add_option("--step", eo.step_deg, "Angular step in degrees");
    est->add_option("--sf", eo.sf, "Sparsity factor (sources of known size)");
    est->add_option("--margin-db", eo.margin_db, "Override the tabulated margin");
    est->add_flag("--pm", eo.pm, "Pattern multiplication from the first two cuts");
    est->add_option("--out", eo.out, "Write the JSON report here");

    StudyOptions so;
    auto *study = app.add_subcommand("study", "Monte Carlo and sweep studies");
    study->add_option("kind", so.kind, "small | sparse | beamsweep | nearfield")->required();
    study->add_option("--config", so.config, "JSON study config");
    study->add_option("--seed", so.seed, "Master seed (required)");
    study->add_option("--samples", so.samples, "Samples per configuration");
    study->add_option("--threads", so.threads, "Worker cap (0: hardware concurrency)");
    study->add_option("--out", so.out_dir, "Output directory")->capture_default_str();
    study->add_option("--D", so.sizes, "Array sizes D / lambda");
    study->add_option("--rhomax", so.rho_max, "Maximum correlations");
    study->add_option("--sf-list", so.sf, "Sparsity factors");

    std::string pd_in, pd_out, pd_svg;
    auto *plot = app.add_subcommand("plotdata", "Reshape a study CSV to long format (series, x, y)");
    plot->add_option("input", pd_in, "Study CSV")->required();
    plot->add_option("--out", pd_out, "Output CSV (stdout if absent)");
    plot->add_option("--svg", pd_svg, "Also write an SVG line chart");

    auto *swe_cmd = app.add_subcommand("swe", "Spherical wave expansion utilities");
    swe_cmd->require_subcommand(1);
    std::string fit_array, fit_out;
    int fit_order = -1;
    auto *fit = swe_cmd->add_subcommand("fit", "Fit SWE coefficients to an array file");
    fit->add_option("--array", fit_array, "Array JSON")->required();
    fit->add_option("--order", fit_order, "Truncation order (default ceil(kR) + 10)");
    fit->add_option("--out", fit_out, "Output SWE JSON (stdout if absent)");
    std::string ev_swe;
    double ev_r = 0.0, ev_theta = 90.0, ev_phi = 0.0;
    auto *ev = swe_cmd->add_subcommand("eval", "Fields and flux at one point");
    ev->add_option("--swe", ev_swe, "SWE JSON")->required();
    ev->add_option("--r", ev_r, "Radius [m]")->required();
    ev->add_option("--theta", ev_theta, "Polar angle [deg]");
    ev->add_option("--phi", ev_phi, "Azimuth [deg]");
    std::string rt_swe;
    std::optional<std::uint64_t> rt_seed;
    int rt_order = 12;
    auto *rt = swe_cmd->add_subcommand("roundtrip", "Far-field sampling and coefficient recovery");
    rt->add_option("--swe", rt_swe, "SWE JSON");
    rt->add_option("--seed", rt_seed, "Random coefficients from this seed");
    rt->add_option("--order", rt_order, "Order of random coefficients")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        app.exit(e);
        return exit_input;
    }

    try
    {
        if (est->parsed())
        {
            if (eo.source_file.empty() && eo.builtin.empty())
                throw io::InputError("estimate needs --source or --builtin");
            return cmd_estimate(eo);
        }
        if (study->parsed())
            return cmd_study(so, join_args(argc, argv));
        if (plot->parsed())
            return cmd_plotdata(pd_in, pd_out, pd_svg);
        if (fit->parsed())
            return cmd_swe_fit(fit_array, fit_order, fit_out);
        if (ev->parsed())
            return cmd_swe_eval(ev_swe, ev_r, ev_theta, ev_phi);
        if (rt->parsed())
            return cmd_swe_roundtrip(rt_swe, rt_seed, rt_order);
    }
    catch (const io::InputError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
    catch (const InfeasibleGrid &e)
    {
        std::cerr << "error: infeasible grid: " << e.what() << "\n";
        return exit_infeasible;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
