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

#ifndef OTATRP_IO_HPP
#define OTATRP_IO_HPP

#include "otatrp/montecarlo.hpp"
#include "otatrp/sampling.hpp"
#include "otatrp/sources.hpp"
#include "otatrp/swe.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

// JSON readers and writers for SWE coefficient sets, point-source arrays, study configs and estimate reports.
// Doubles are written with shortest round-trip formatting, so a write/read cycle is bit-exact.

namespace otatrp::io
{
    using json = nlohmann::json;

    /// Malformed or schema-violating input.
    class InputError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    inline json read_json_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw InputError("cannot open " + path);
        try
        {
            return json::parse(in);
        }
        catch (const json::parse_error &e)
        {
            throw InputError(path + ": " + e.what());
        }
    }

    inline void write_text_file(const std::string &path, const std::string &text)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + path);
        out << text;
        if (!out)
            throw std::runtime_error("write failed for " + path);
    }

    namespace detail
    {
        inline const json &field(const json &j, const char *key)
        {
            if (!j.is_object() || !j.contains(key))
                throw InputError(std::string("missing field '") + key + "'");
            return j.at(key);
        }

        inline double number(const json &j, const char *what)
        {
            if (!j.is_number())
                throw InputError(std::string("field '") + what + "' must be a number");
            const double v = j.get<double>();
            if (!std::isfinite(v))
                throw InputError(std::string("field '") + what + "' must be finite");
            return v;
        }

        inline int integer(const json &j, const char *what)
        {
            if (!j.is_number_integer())
                throw InputError(std::string("field '") + what + "' must be an integer");
            return j.get<int>();
        }
    } // namespace detail

    // ---------------------------------------------------------------------------------------------
    // SWE coefficients: {"type":"swe","k":..,"source_radius":..,"order":L,"coefficients":[[l,m,n,re,im],..]}
    // Absent modes are zero.
    // ---------------------------------------------------------------------------------------------

    inline json to_json(const swe::SweCoefficients &c)
    {
        json j;
        j["type"] = "swe";
        j["k"] = c.wavenumber();
        j["source_radius"] = c.source_radius();
        j["order"] = c.order();
        json rows = json::array();
        for (std::size_t i = 0; i < c.data().size(); ++i)
        {
            const cplx a = c.data()[i];
            if (a == cplx{})
                continue;
            int l, m, n;
            swe::SweCoefficients::unpack(i, l, m, n);
            rows.push_back({l, m, n, a.real(), a.imag()});
        }
        j["coefficients"] = std::move(rows);
        return j;
    }

    inline swe::SweCoefficients swe_from_json(const json &j)
    {
        using namespace detail;
        if (j.contains("type") && j.at("type") != "swe")
            throw InputError("not an SWE coefficient file");
        const double k = number(field(j, "k"), "k");
        const double r = number(field(j, "source_radius"), "source_radius");
        const int L = integer(field(j, "order"), "order");
        if (!(k > 0.0) || r < 0.0 || L < 1)
            throw InputError("SWE file: need k > 0, source_radius >= 0, order >= 1");
        swe::SweCoefficients c(L, k, r);
        const json &rows = field(j, "coefficients");
        if (!rows.is_array())
            throw InputError("SWE file: 'coefficients' must be an array");
        for (const auto &row : rows)
        {
            if (!row.is_array() || row.size() != 5)
                throw InputError("SWE file: each coefficient is [l, m, n, re, im]");
            const int l = integer(row[0], "l"), m = integer(row[1], "m"), n = integer(row[2], "n");
            if (l < 1 || l > L || m < -l || m > l || (n != 1 && n != 2))
                throw InputError("SWE file: mode index out of range");
            c.at(l, m, n) = cplx(number(row[3], "re"), number(row[4], "im"));
        }
        return c;
    }

    // ---------------------------------------------------------------------------------------------
    // Point-source array: {"type":"array","k":..,"positions":[[x,y,z],..],"weights":[[re,im],..],
    //                      "element":"isotropic"|"hertz_dipole"|"half_wave_dipole"|"cosine_taper","q":1}
    // ---------------------------------------------------------------------------------------------

    struct ArrayFile
    {
        PointSourceArray array;
        ElementModel element;
    };

    inline ElementModel element_from_name(const std::string &name, int q = 1)
    {
        if (name == "isotropic")
            return ElementModel::isotropic();
        if (name == "hertz_dipole")
            return ElementModel::hertz_dipole();
        if (name == "half_wave_dipole")
            return ElementModel::half_wave_dipole();
        if (name == "cosine_taper")
            return ElementModel::cosine_taper(q);
        throw InputError("unknown element '" + name + "'");
    }

    inline json to_json(const PointSourceArray &a, const ElementModel &e = ElementModel::isotropic())
    {
        json j;
        j["type"] = "array";
        j["k"] = a.k;
        json pos = json::array(), w = json::array();
        for (const auto &p : a.positions)
            pos.push_back({p.x, p.y, p.z});
        for (const auto &c : a.weights)
            w.push_back({c.real(), c.imag()});
        j["positions"] = std::move(pos);
        j["weights"] = std::move(w);
        j["element"] = e.name();
        j["q"] = e.q;
        return j;
    }

    inline ArrayFile array_from_json(const json &j)
    {
        using namespace detail;
        if (j.contains("type") && j.at("type") != "array")
            throw InputError("not an array file");
        ArrayFile f;
        f.array.k = number(field(j, "k"), "k");
        const json &pos = field(j, "positions");
        const json &w = field(j, "weights");
        if (!pos.is_array() || !w.is_array())
            throw InputError("array file: 'positions' and 'weights' must be arrays");
        for (const auto &p : pos)
        {
            if (!p.is_array() || p.size() != 3)
                throw InputError("array file: each position is [x, y, z]");
            f.array.positions.push_back({number(p[0], "x"), number(p[1], "y"), number(p[2], "z")});
        }
        for (const auto &c : w)
        {
            if (!c.is_array() || c.size() != 2)
                throw InputError("array file: each weight is [re, im]");
            f.array.weights.emplace_back(number(c[0], "re"), number(c[1], "im"));
        }
        const int q = j.contains("q") ? integer(j.at("q"), "q") : 1;
        f.element = element_from_name(j.contains("element") ? j.at("element").get<std::string>() : "isotropic", q);
        try
        {
            f.array.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw InputError(e.what());
        }
        return f;
    }

    // ---------------------------------------------------------------------------------------------
    // Estimate report
    // ---------------------------------------------------------------------------------------------

    inline json to_json(const TrpEstimate &e)
    {
        return {{"grid", e.grid},
                {"sf", e.sf},
                {"trp_grid_w", e.trp_grid},
                {"trp_grid_dbm", watts_to_dbm(e.trp_grid)},
                {"margin_db", e.delta_trp},
                {"trp_est_w", e.trp_est},
                {"trp_est_dbm", watts_to_dbm(e.trp_est)}};
    }

    // ---------------------------------------------------------------------------------------------
    // Study config: every field optional, unknown keys rejected.
    // ---------------------------------------------------------------------------------------------

    inline GridVariant grid_variant_from_name(const std::string &s)
    {
        if (s == "full_sphere" || s == "full")
            return GridVariant::full_sphere;
        if (s == "two_cuts" || s == "cuts2")
            return GridVariant::two_cuts;
        if (s == "three_cuts" || s == "cuts3")
            return GridVariant::three_cuts;
        throw InputError("unknown grid '" + s + "'");
    }

    inline json to_json(const mc::StudyConfig &c)
    {
        json g = json::array();
        for (auto v : c.grids)
            g.push_back(to_string(v));
        return {{"kind", c.kind},
                {"samples", c.n_samples},
                {"seed", c.seed},
                {"threads", c.threads},
                {"percentile", c.percentile},
                {"sizes", c.sizes},
                {"rho_max", c.rho_max},
                {"sf", c.sf},
                {"grids", g},
                {"order", c.order},
                {"small_step_deg", c.small_step_deg},
                {"harmonics", c.harmonics},
                {"nearfield_offsets", c.nearfield_offsets}};
    }

    inline void apply_json(mc::StudyConfig &c, const json &j)
    {
        using namespace detail;
        if (!j.is_object())
            throw InputError("study config must be a JSON object");
        auto numbers = [](const json &a, const char *what)
        {
            if (!a.is_array() || a.empty())
                throw InputError(std::string("field '") + what + "' must be a non-empty array");
            std::vector<double> v;
            for (const auto &x : a)
                v.push_back(number(x, what));
            return v;
        };
        for (const auto &[key, val] : j.items())
        {
            if (key == "kind")
                c.kind = val.get<std::string>();
            else if (key == "samples")
            {
                const int n = integer(val, "samples");
                if (n < 1)
                    throw InputError("field 'samples' must be >= 1");
                c.n_samples = static_cast<std::size_t>(n);
            }
            else if (key == "seed")
            {
                if (!val.is_number_unsigned())
                    throw InputError("field 'seed' must be a non-negative integer");
                c.seed = val.get<std::uint64_t>();
            }
            else if (key == "threads")
                c.threads = static_cast<unsigned>(std::max(0, integer(val, "threads")));
            else if (key == "percentile")
                c.percentile = number(val, "percentile");
            else if (key == "sizes")
                c.sizes = numbers(val, "sizes");
            else if (key == "rho_max")
                c.rho_max = numbers(val, "rho_max");
            else if (key == "sf")
                c.sf = numbers(val, "sf");
            else if (key == "grids")
            {
                if (!val.is_array() || val.empty())
                    throw InputError("field 'grids' must be a non-empty array");
                c.grids.clear();
                for (const auto &g : val)
                    c.grids.push_back(grid_variant_from_name(g.get<std::string>()));
            }
            else if (key == "order")
                c.order = integer(val, "order");
            else if (key == "small_step_deg")
                c.small_step_deg = number(val, "small_step_deg");
            else if (key == "harmonics")
            {
                c.harmonics.clear();
                for (double h : numbers(val, "harmonics"))
                {
                    if (h < 1.0 || h != std::floor(h))
                        throw InputError("field 'harmonics' must hold positive integers");
                    c.harmonics.push_back(static_cast<int>(h));
                }
            }
            else if (key == "nearfield_offsets")
                c.nearfield_offsets = numbers(val, "nearfield_offsets");
            else
                throw InputError("unknown study config field '" + key + "'");
        }
        try
        {
            c.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw InputError(e.what());
        }
    }

} // namespace otatrp::io

#endif
