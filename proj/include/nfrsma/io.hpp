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

// results.csv, manifest.json and trace JSON.

#ifndef NFRSMA_IO_HPP
#define NFRSMA_IO_HPP

#include "config.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>

namespace nfrsma
{
    inline constexpr const char *kVersion = "0.1.0";

    using json = nlohmann::ordered_json;

    inline json to_json(const SystemConfig &c)
    {
        return json{{"N", c.N},
                    {"L", c.L},
                    {"K", c.K},
                    {"f_c", c.f_c},
                    {"lambda", c.lambda},
                    {"d", c.d},
                    {"P_th", c.P_th},
                    {"sigma2", c.sigma2},
                    {"eps_factor", c.eps_factor},
                    {"delta", c.delta},
                    {"r_min", c.r_min},
                    {"r_max", c.r_max},
                    {"theta_min", c.theta_min},
                    {"theta_max", c.theta_max},
                    {"enforce_fresnel", c.enforce_fresnel},
                    {"rho0", c.rho0},
                    {"alpha", c.alpha},
                    {"use_penalty", c.use_penalty},
                    {"tol_sca", c.tol_sca},
                    {"tol_inner", c.tol_inner},
                    {"tol_penalty", c.tol_penalty},
                    {"max_sca", c.max_sca},
                    {"max_inner", c.max_inner},
                    {"max_outer", c.max_outer},
                    {"max_ipm", c.max_ipm},
                    {"noise_model", c.noise_model == NoiseModel::frozen ? "frozen" : "tracked"},
                    {"analog_init", c.analog_init == AnalogInit::random_phase ? "random_phase" : "zero_phase"},
                    {"swap_accept_ties", c.swap_accept_ties},
                    {"max_swaps", c.max_swaps},
                    {"sdma_candidate", c.sdma_candidate},
                    {"seed", c.seed}};
    }

    inline json to_json(const SolverReport &r)
    {
        json trace = json::array();
        for (const auto &p : r.objective_trace)
            trace.push_back({{"outer", p.outer}, {"value", p.value}});
        return json{{"status", to_string(r.status)},
                    {"R_hat", r.R_hat},
                    {"outer_iters", r.outer_iters},
                    {"inner_iters", r.inner_iters},
                    {"sca_iters", r.sca_iters},
                    {"objective_trace", trace},
                    {"penalty_violation_trace", r.penalty_violation_trace},
                    {"rate_trace", r.rate_trace},
                    {"wall_time_s", r.wall_time},
                    {"message", r.message}};
    }

    inline json complex_matrix_json(const CMat &A)
    {
        json re = json::array(), im = json::array();
        for (Eigen::Index i = 0; i < A.rows(); ++i)
        {
            json rr = json::array(), ir = json::array();
            for (Eigen::Index j = 0; j < A.cols(); ++j)
            {
                rr.push_back(A(i, j).real());
                ir.push_back(A(i, j).imag());
            }
            re.push_back(rr);
            im.push_back(ir);
        }
        return json{{"re", re}, {"im", im}};
    }

    inline json to_json(const SchemeResult &r, bool with_matrices = false)
    {
        json j{{"scheme", to_string(r.scheme)},
               {"maxmin_rate_bps_hz", r.report.R_hat},
               {"user_rates", std::vector<double>(r.user_rates.data(), r.user_rates.data() + r.user_rates.size())},
               {"common_split", std::vector<double>(r.alloc.c.data(), r.alloc.c.data() + r.alloc.c.size())},
               {"power_w", r.power()},
               {"sdma_candidate", r.sdma_candidate},
               {"report", to_json(r.report)}};
        if (with_matrices)
        {
            if (r.hb)
            {
                CMat F(r.hb->M(), r.hb->L());
                for (int l = 0; l < r.hb->L(); ++l)
                    F.col(l) = r.hb->F_blocks[l];
                j["F_blocks"] = complex_matrix_json(F);
                j["W"] = complex_matrix_json(r.hb->W);
            }
            else
            {
                j["P"] = complex_matrix_json(r.P);
            }
        }
        return j;
    }

    inline const char *csv_header()
    {
        return "scheme,sweep_name,sweep_value,trial,seed,maxmin_rate_bps_hz,iters_outer,iters_inner_total,"
               "penalty_violation,wall_ms";
    }

    inline std::string csv_line(const ResultRow &r)
    {
        std::ostringstream os;
        os << std::setprecision(17);
        os << r.scheme << ',' << r.sweep_name << ',' << r.sweep_value << ',' << r.trial << ',' << r.seed << ','
           << r.maxmin_rate << ',' << r.iters_outer << ',' << r.iters_inner_total << ',' << r.penalty_violation << ','
           << std::setprecision(6) << r.wall_ms;
        return os.str();
    }

    inline void write_csv(const std::filesystem::path &file, const std::vector<ResultRow> &rows)
    {
        std::ofstream out(file);
        if (!out)
            throw std::runtime_error("cannot write " + file.string());
        out << csv_header() << '\n';
        for (const auto &r : rows)
            out << csv_line(r) << '\n';
    }

    inline std::string utc_timestamp()
    {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        std::tm tm{};
        gmtime_r(&t, &tm);
        std::ostringstream os;
        os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
        return os.str();
    }

    inline json manifest_json(const ExperimentSpec &spec, const std::vector<ResultRow> &rows, const std::string &started,
                              const std::string &finished)
    {
        json schemes = json::array();
        for (Scheme s : spec.schemes)
            schemes.push_back(to_string(s));
        json summary = json::array();
        for (const auto &s : summarize(spec, rows))
            summary.push_back({{"scheme", s.scheme},
                               {"sweep_value", s.sweep_value},
                               {"count", s.count},
                               {"failures", s.failures},
                               {"mean", s.mean},
                               {"std", s.stddev}});
        int failures = 0;
        for (const auto &r : rows)
            failures += r.status.rfind("error", 0) == 0;
        return json{{"tool", "nfrsma"},
                    {"version", kVersion},
                    {"started", started},
                    {"finished", finished},
                    {"schemes", schemes},
                    {"sweep", {{"variable", spec.variable}, {"values", spec.values}, {"trials", spec.trials}}},
                    {"threads", spec.threads},
                    {"config", to_json(spec.base)},
                    {"rows", rows.size()},
                    {"failures", failures},
                    {"summary", summary}};
    }

    inline void write_json(const std::filesystem::path &file, const json &j)
    {
        std::ofstream out(file);
        if (!out)
            throw std::runtime_error("cannot write " + file.string());
        out << j.dump(2) << '\n';
    }

    // Writes results.csv, manifest.json and (optionally) traces/<scheme>_v<i>_t<j>.json.
    inline void write_experiment(const std::filesystem::path &dir, const ExperimentSpec &spec,
                                 const std::vector<ResultRow> &rows, const std::string &started,
                                 const std::string &finished)
    {
        std::filesystem::create_directories(dir);
        write_csv(dir / "results.csv", rows);
        write_json(dir / "manifest.json", manifest_json(spec, rows, started, finished));
        if (!spec.write_traces)
            return;
        std::filesystem::create_directories(dir / "traces");
        for (const auto &r : rows)
        {
            json j{{"scheme", r.scheme},
                   {"sweep_name", r.sweep_name},
                   {"sweep_value", r.sweep_value},
                   {"trial", r.trial},
                   {"seed", r.seed},
                   {"status", r.status},
                   {"user_rates", r.user_rates},
                   {"report", to_json(r.report)}};
            write_json(dir / "traces" /
                           (r.scheme + "_v" + std::to_string(r.value_index) + "_t" + std::to_string(r.trial) + ".json"),
                       j);
        }
    }

} // namespace nfrsma

#endif
