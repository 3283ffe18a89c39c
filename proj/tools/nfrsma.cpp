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


// nfrsma command-line tool: solve, sweep and verify.

#include <CLI11.hpp>

#include <acceptance/criteria.hpp>
#include <nfrsma/config.hpp>
#include <nfrsma/io.hpp>

#include <fstream>
#include <iostream>

namespace
{
    using namespace nfrsma;

    struct Overrides
    {
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::optional<int> threads;
    };

    SystemConfig load_config(const std::string &path)
    {
        if (path.empty())
            return {};
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open " + path);
        return parse_config(in);
    }

    int cmd_solve(const std::string &config, const std::string &scheme, int trial, const std::string &out,
                  const Overrides &ov)
    {
        SystemConfig cfg = load_config(config);
        if (ov.seed)
            cfg.seed = *ov.seed;
        const Scheme s = parse_scheme(scheme);
        const ChannelSet ch = sample_channels(cfg, static_cast<std::uint64_t>(trial));
        const SchemeResult r = run_scheme(s, ch, cfg);

        std::filesystem::create_directories(out);
        json result = to_json(r, true);
        result["trial"] = trial;
        result["config"] = to_json(cfg);
        json users = json::array();
        for (int k = 0; k < ch.K(); ++k)
            users.push_back({{"r_m", ch.geometry.r(k)}, {"theta_rad", ch.geometry.theta(k)}});
        result["users"] = users;
        write_json(std::filesystem::path(out) / "result.json", result);

        json trace = to_json(r.report);
        trace["scheme"] = to_string(s);
        write_json(std::filesystem::path(out) / "trace.json", trace);

        std::cout << to_string(s) << " max-min rate " << r.report.R_hat << " bps/Hz (" << to_string(r.report.status)
                  << ", " << r.report.outer_iters << " outer iterations, " << 1e3 * r.report.wall_time << " ms)\n";
        return r.report.status == SolveStatus::numeric_error ? 2 : 0;
    }

    int cmd_sweep(const std::string &config, const std::string &spec_path, const std::string &out,
                  const Overrides &ov, bool quiet)
    {
        ExperimentSpec spec;
        spec.base = load_config(config);
        std::ifstream in(spec_path);
        if (!in)
            throw std::runtime_error("cannot open " + spec_path);
        spec = parse_spec(in, spec);
        if (ov.seed)
            spec.base.seed = *ov.seed;
        if (ov.trials)
            spec.trials = *ov.trials;
        if (ov.threads)
            spec.threads = *ov.threads;
        validate(spec);

        const std::string started = utc_timestamp();
        std::size_t done = 0;
        const std::size_t total = spec.schemes.size() * spec.values.size() * static_cast<std::size_t>(spec.trials);
        const auto rows = run_experiment(spec, [&](const ResultRow &r)
                                         {
                                             ++done;
                                             if (!quiet)
                                                 std::cerr << '[' << done << '/' << total << "] " << r.scheme << ' '
                                                           << r.sweep_name << '=' << r.sweep_value << " trial "
                                                           << r.trial << ": " << r.maxmin_rate << " (" << r.status
                                                           << ")\n";
                                         });
        write_experiment(out, spec, rows, started, utc_timestamp());

        for (const auto &s : summarize(spec, rows))
            std::cout << s.scheme << ' ' << spec.variable << '=' << s.sweep_value << ": mean " << s.mean << " std "
                      << s.stddev << " (" << s.count << " runs, " << s.failures << " failed)\n";
        return 0;
    }

    int cmd_verify(const std::vector<int> &ids)
    {
        using namespace nfrsma::acceptance;
        int failed = 0;
        for (const auto &c : all_criteria())
        {
            if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end())
                continue;
            const Outcome o = run_timed(c);
            std::cout << format(o) << std::endl;
            failed += !o.pass;
        }
        return failed == 0 ? 0 : 1;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"RSMA near-field hybrid beamfocusing"};
    app.set_version_flag("--version", std::string(nfrsma::kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    Overrides ov;
    std::uint64_t seed = 0;
    int trials = 0, threads = 0;
    auto *seed_opt = app.add_option("--seed", seed, "Base seed (overrides the config)");
    auto *trials_opt = app.add_option("--trials", trials, "Monte-Carlo trials per sweep value")->check(CLI::NonNegativeNumber);
    auto *threads_opt = app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    std::string config, scheme = "RSMA-SHB", spec, out = "out";
    int trial = 0;
    auto *solve = app.add_subcommand("solve", "Solve one channel realization");
    solve->add_option("--config", config, "INI file with [system] and [solver]")->check(CLI::ExistingFile);
    solve->add_option("--scheme", scheme, "RSMA-SHB, RSMA-SHB-Low, RSMA-FD, SDMA-SHB or RSMA-SHB-far")
        ->capture_default_str();
    solve->add_option("--trial", trial, "Channel realization index")->check(CLI::NonNegativeNumber);
    solve->add_option("--out", out, "Output directory")->capture_default_str();

    bool quiet = false;
    auto *sweep = app.add_subcommand("sweep", "Run a Monte-Carlo sweep");
    sweep->add_option("--config", config, "INI file with [system] and [solver]")->check(CLI::ExistingFile);
    sweep->add_option("--spec", spec, "INI file with [sweep]")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", out, "Output directory")->capture_default_str();
    sweep->add_flag("--quiet", quiet, "No per-run progress");

    std::vector<int> ids;
    auto *verify = app.add_subcommand("verify", "Run the acceptance checks");
    verify->add_option("ids", ids, "Criteria to run (default all)");

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt)
        ov.seed = seed;
    if (*trials_opt)
        ov.trials = trials;
    if (*threads_opt)
        ov.threads = threads;

    try
    {
        if (*solve)
            return cmd_solve(config, scheme, trial, out, ov);
        if (*sweep)
            return cmd_sweep(config, spec, out, ov, quiet);
        if (*verify)
            return cmd_verify(ids);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
