// SPDX-License-Identifier: Apache-2.0
//
// nfrsma: hybrid beamfocusing for rate-splitting near-field downlinks
// Copyright (C) 2026 The nfrsma authors
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

// INI configuration with sections [system], [solver] and [sweep].
// Keys ending in _dbm are converted to watts here and nowhere else.
//
//   [system]
//   N = 128
//   P_th_dbm = 20
//   ; one value, or one per user separated by commas
//   sigma2_dbm = -84
//   delta = 0.05
//
//   [sweep]
//   schemes = RSMA-SHB, SDMA-SHB
//   variable = delta
//   values = 0, 0.05, 0.1
//   trials = 20

#ifndef NFRSMA_CONFIG_HPP
#define NFRSMA_CONFIG_HPP

#include "bench.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <set>
#include <sstream>

namespace nfrsma
{
    namespace detail
    {
        using boost::property_tree::ptree;

        inline std::vector<std::string> split_list(const std::string &s)
        {
            std::vector<std::string> parts;
            boost::split(parts, s, boost::is_any_of(","));
            std::vector<std::string> out;
            for (auto &p : parts)
            {
                boost::trim(p);
                if (!p.empty())
                    out.push_back(p);
            }
            return out;
        }

        inline double to_double(const std::string &key, const std::string &s)
        {
            try
            {
                std::size_t pos = 0;
                const double v = std::stod(s, &pos);
                if (pos != s.size())
                    throw std::invalid_argument("");
                return v;
            }
            catch (const std::exception &)
            {
                throw std::invalid_argument("config: '" + key + "' expects a number, got '" + s + "'");
            }
        }

        inline std::vector<double> to_doubles(const std::string &key, const std::string &s)
        {
            std::vector<double> out;
            for (const auto &p : split_list(s))
                out.push_back(to_double(key, p));
            if (out.empty())
                throw std::invalid_argument("config: '" + key + "' is empty");
            return out;
        }

        inline int to_int(const std::string &key, const std::string &s)
        {
            const double v = to_double(key, s);
            if (v != std::round(v))
                throw std::invalid_argument("config: '" + key + "' expects an integer");
            return static_cast<int>(v);
        }

        inline bool to_bool(const std::string &key, std::string s)
        {
            boost::to_lower(s);
            if (s == "true" || s == "1" || s == "yes" || s == "on")
                return true;
            if (s == "false" || s == "0" || s == "no" || s == "off")
                return false;
            throw std::invalid_argument("config: '" + key + "' expects a boolean");
        }

        inline void check_keys(const ptree &sec, const std::string &name, const std::set<std::string> &allowed)
        {
            for (const auto &kv : sec)
                if (!allowed.count(kv.first))
                    throw std::invalid_argument("config: unknown key '" + kv.first + "' in [" + name + "]");
        }

        inline void apply_system(SystemConfig &cfg, const ptree &sec)
        {
            check_keys(sec, "system", {"N", "L", "K", "f_c", "d", "P_th", "P_th_dbm", "sigma2", "sigma2_dbm",
                                       "eps_factor", "delta", "r_min", "r_max", "theta_min", "theta_max",
                                       "enforce_fresnel"});
            for (const auto &kv : sec)
            {
                const std::string &k = kv.first;
                const std::string v = kv.second.data();
                if (k == "N")
                    cfg.N = to_int(k, v);
                else if (k == "L")
                    cfg.L = to_int(k, v);
                else if (k == "K")
                    cfg.K = to_int(k, v);
                else if (k == "f_c")
                    cfg.set_carrier(to_double(k, v));
                else if (k == "P_th")
                    cfg.P_th = to_double(k, v);
                else if (k == "P_th_dbm")
                    cfg.P_th = dbm_to_watt(to_double(k, v));
                else if (k == "sigma2")
                    cfg.sigma2 = to_doubles(k, v);
                else if (k == "sigma2_dbm")
                {
                    cfg.sigma2.clear();
                    for (double x : to_doubles(k, v))
                        cfg.sigma2.push_back(dbm_to_watt(x));
                }
                else if (k == "eps_factor")
                    cfg.eps_factor = to_double(k, v);
                else if (k == "delta")
                    cfg.delta = to_doubles(k, v);
                else if (k == "r_min")
                    cfg.r_min = to_double(k, v);
                else if (k == "r_max")
                    cfg.r_max = to_double(k, v);
                else if (k == "theta_min")
                    cfg.theta_min = to_double(k, v);
                else if (k == "theta_max")
                    cfg.theta_max = to_double(k, v);
                else if (k == "enforce_fresnel")
                    cfg.enforce_fresnel = to_bool(k, v);
            }
            // spacing after f_c so that a custom d survives a carrier change
            if (auto d = sec.get_optional<std::string>("d"))
                cfg.d = to_double("d", *d);
        }

        inline void apply_solver(SystemConfig &cfg, const ptree &sec)
        {
            check_keys(sec, "solver", {"rho0", "alpha", "use_penalty", "tol_sca", "tol_inner", "tol_penalty",
                                       "max_sca", "max_inner", "max_outer", "max_ipm", "noise_model", "analog_init",
                                       "swap_accept_ties", "max_swaps", "sdma_candidate", "seed"});
            for (const auto &kv : sec)
            {
                const std::string &k = kv.first;
                const std::string v = kv.second.data();
                if (k == "rho0")
                    cfg.rho0 = to_double(k, v);
                else if (k == "alpha")
                    cfg.alpha = to_double(k, v);
                else if (k == "use_penalty")
                    cfg.use_penalty = to_bool(k, v);
                else if (k == "tol_sca")
                    cfg.tol_sca = to_double(k, v);
                else if (k == "tol_inner")
                    cfg.tol_inner = to_double(k, v);
                else if (k == "tol_penalty")
                    cfg.tol_penalty = to_double(k, v);
                else if (k == "max_sca")
                    cfg.max_sca = to_int(k, v);
                else if (k == "max_inner")
                    cfg.max_inner = to_int(k, v);
                else if (k == "max_outer")
                    cfg.max_outer = to_int(k, v);
                else if (k == "max_ipm")
                    cfg.max_ipm = to_int(k, v);
                else if (k == "noise_model")
                {
                    if (v == "frozen")
                        cfg.noise_model = NoiseModel::frozen;
                    else if (v == "tracked")
                        cfg.noise_model = NoiseModel::tracked;
                    else
                        throw std::invalid_argument("config: noise_model must be frozen or tracked");
                }
                else if (k == "analog_init")
                {
                    if (v == "random_phase")
                        cfg.analog_init = AnalogInit::random_phase;
                    else if (v == "zero_phase")
                        cfg.analog_init = AnalogInit::zero_phase;
                    else
                        throw std::invalid_argument("config: analog_init must be random_phase or zero_phase");
                }
                else if (k == "swap_accept_ties")
                    cfg.swap_accept_ties = to_bool(k, v);
                else if (k == "max_swaps")
                    cfg.max_swaps = to_int(k, v);
                else if (k == "sdma_candidate")
                    cfg.sdma_candidate = to_bool(k, v);
                else if (k == "seed")
                    cfg.seed = std::stoull(v);
            }
        }

        inline void apply_sweep_section(ExperimentSpec &spec, const ptree &sec)
        {
            check_keys(sec, "sweep", {"schemes", "scheme", "variable", "values", "trials", "threads", "seed",
                                      "write_traces"});
            for (const auto &kv : sec)
            {
                const std::string &k = kv.first;
                const std::string v = kv.second.data();
                if (k == "schemes" || k == "scheme")
                {
                    spec.schemes.clear();
                    for (const auto &s : split_list(v))
                        spec.schemes.push_back(parse_scheme(s));
                }
                else if (k == "variable")
                    spec.variable = v;
                else if (k == "values")
                    spec.values = to_doubles(k, v);
                else if (k == "trials")
                    spec.trials = to_int(k, v);
                else if (k == "threads")
                    spec.threads = to_int(k, v);
                else if (k == "seed")
                    spec.base.seed = std::stoull(v);
                else if (k == "write_traces")
                    spec.write_traces = to_bool(k, v);
            }
        }

        inline ptree read_ini(std::istream &in)
        {
            ptree pt;
            try
            {
                boost::property_tree::ini_parser::read_ini(in, pt);
            }
            catch (const boost::property_tree::ini_parser_error &e)
            {
                throw std::invalid_argument(std::string("config: ") + e.what());
            }
            for (const auto &kv : pt)
                if (kv.first != "system" && kv.first != "solver" && kv.first != "sweep")
                    throw std::invalid_argument("config: unknown section [" + kv.first + "]");
            return pt;
        }
    } // namespace detail

    // Applies [system] and [solver] on top of defaults.
    inline SystemConfig parse_config(std::istream &in, SystemConfig cfg = {})
    {
        const auto pt = detail::read_ini(in);
        if (auto s = pt.get_child_optional("system"))
            detail::apply_system(cfg, *s);
        if (auto s = pt.get_child_optional("solver"))
            detail::apply_solver(cfg, *s);
        cfg.validate();
        return cfg;
    }

    inline SystemConfig parse_config_string(const std::string &text, SystemConfig cfg = {})
    {
        std::istringstream in(text);
        return parse_config(in, std::move(cfg));
    }

    // Reads [sweep] (and any [system]/[solver] overrides) on top of spec.
    inline ExperimentSpec parse_spec(std::istream &in, ExperimentSpec spec)
    {
        const auto pt = detail::read_ini(in);
        if (auto s = pt.get_child_optional("system"))
            detail::apply_system(spec.base, *s);
        if (auto s = pt.get_child_optional("solver"))
            detail::apply_solver(spec.base, *s);
        if (auto s = pt.get_child_optional("sweep"))
            detail::apply_sweep_section(spec, *s);
        spec.base.validate();
        validate(spec);
        return spec;
    }

} // namespace nfrsma

#endif
