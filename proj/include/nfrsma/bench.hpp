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

// Schemes, baselines and the Monte-Carlo sweep runner.

#ifndef NFRSMA_BENCH_HPP
#define NFRSMA_BENCH_HPP

#include "twostage.hpp"

#include <atomic>
#include <mutex>
#include <thread>

namespace nfrsma
{
    enum class Scheme
    {
        rsma_shb,     // penalty BCD
        rsma_shb_low, // two-stage
        rsma_fd,      // fully digital
        sdma_shb,     // penalty BCD without common stream
        rsma_shb_far  // two-stage with far-field analog stage
    };

    inline const std::vector<Scheme> &all_schemes()
    {
        static const std::vector<Scheme> s{Scheme::rsma_shb, Scheme::rsma_shb_low, Scheme::rsma_fd, Scheme::sdma_shb,
                                           Scheme::rsma_shb_far};
        return s;
    }

    inline std::string to_string(Scheme s)
    {
        switch (s)
        {
        case Scheme::rsma_shb:
            return "RSMA-SHB";
        case Scheme::rsma_shb_low:
            return "RSMA-SHB-Low";
        case Scheme::rsma_fd:
            return "RSMA-FD";
        case Scheme::sdma_shb:
            return "SDMA-SHB";
        case Scheme::rsma_shb_far:
            return "RSMA-SHB-far";
        }
        return "unknown";
    }

    inline Scheme parse_scheme(const std::string &name)
    {
        for (Scheme s : all_schemes())
            if (to_string(s) == name)
                return s;
        throw std::invalid_argument("unknown scheme '" + name + "'");
    }

    struct SchemeResult
    {
        Scheme scheme = Scheme::rsma_shb;
        CMat P;                         // transmitted precoder (F W, or P for RSMA-FD)
        std::optional<HybridBeamfocuser> hb;
        RateAllocation alloc;
        RVec user_rates;                // c_k + private rate
        SolverReport report;
        bool sdma_candidate = false;    // the w_0 = 0 special case won
        double power() const { return P.squaredNorm(); }
    };

    namespace detail
    {
        inline RVec totals(const ChannelSet &ch, const CMat &P, const RateAllocation &alloc, const RVec &delta)
        {
            RVec t(ch.K());
            for (int k = 0; k < ch.K(); ++k)
                t(k) = alloc.c(k) + private_rate_lb(ch, FullPrecoder{P}, delta(k), k);
            return t;
        }

        inline SchemeResult from_hybrid(Scheme s, const ChannelSet &ch, const SystemConfig &cfg, HybridBeamfocuser hb,
                                        RateAllocation alloc, SolverReport rep)
        {
            SchemeResult r;
            r.scheme = s;
            r.P = hb.precoder();
            r.hb = std::move(hb);
            r.alloc = std::move(alloc);
            r.report = std::move(rep);
            r.user_rates = totals(ch, r.P, r.alloc, cfg.delta_vector());
            return r;
        }

        // RSMA contains SDMA (w_0 = 0, c = 0); keep the better of the two runs.
        inline SchemeResult keep_better(SchemeResult rsma, SchemeResult sdma, Scheme s)
        {
            if (sdma.report.R_hat > rsma.report.R_hat)
            {
                sdma.scheme = s;
                sdma.sdma_candidate = true;
                sdma.report.wall_time += rsma.report.wall_time;
                return sdma;
            }
            rsma.report.wall_time += sdma.report.wall_time;
            return rsma;
        }
    } // namespace detail

    inline SchemeResult run_rsma_shb(const ChannelSet &ch, const SystemConfig &cfg, bool common_stream = true)
    {
        HybridResult r = run_pbcd(ch, cfg, {common_stream, {}});
        return detail::from_hybrid(common_stream ? Scheme::rsma_shb : Scheme::sdma_shb, ch, cfg, std::move(r.hb),
                                   std::move(r.alloc), std::move(r.report));
    }

    inline SchemeResult run_sdma(const ChannelSet &ch, const SystemConfig &cfg) { return run_rsma_shb(ch, cfg, false); }

    inline SchemeResult run_full_digital(const ChannelSet &ch, const SystemConfig &cfg, bool common_stream = true)
    {
        DigitalResult d = run_digital_sca(ch, cfg, 1.0, common_stream);
        SchemeResult r;
        r.scheme = Scheme::rsma_fd;
        r.P = std::move(d.W);
        r.alloc = std::move(d.alloc);
        r.report = std::move(d.report);
        r.user_rates = detail::totals(ch, r.P, r.alloc, cfg.delta_vector());
        return r;
    }

    inline SchemeResult run_low_complexity(const ChannelSet &ch, const SystemConfig &cfg, bool far_field = false,
                                           bool common_stream = true, std::optional<std::vector<CVec>> analog = {})
    {
        TwoStageResult t = run_twostage(ch, cfg, {far_field, common_stream, std::move(analog)});
        return detail::from_hybrid(far_field ? Scheme::rsma_shb_far : Scheme::rsma_shb_low, ch, cfg, std::move(t.hb),
                                   std::move(t.alloc), std::move(t.report));
    }

    inline SchemeResult run_far_field(const ChannelSet &ch, const SystemConfig &cfg, bool common_stream = true)
    {
        return run_low_complexity(ch, cfg, true, common_stream);
    }

    // Dispatch. With cfg.sdma_candidate the RSMA schemes also solve their
    // w_0 = 0 special case and return the better design.
    inline SchemeResult run_scheme(Scheme s, const ChannelSet &ch, const SystemConfig &cfg)
    {
        const bool both = cfg.sdma_candidate;
        switch (s)
        {
        case Scheme::sdma_shb:
            return run_sdma(ch, cfg);
        case Scheme::rsma_shb:
        {
            SchemeResult r = run_rsma_shb(ch, cfg);
            return both ? detail::keep_better(std::move(r), run_sdma(ch, cfg), s) : r;
        }
        case Scheme::rsma_fd:
        {
            SchemeResult r = run_full_digital(ch, cfg);
            return both ? detail::keep_better(std::move(r), run_full_digital(ch, cfg, false), s) : r;
        }
        case Scheme::rsma_shb_low:
        case Scheme::rsma_shb_far:
        {
            const bool far = s == Scheme::rsma_shb_far;
            SchemeResult r = run_low_complexity(ch, cfg, far);
            if (!both)
                return r;
            return detail::keep_better(r, run_low_complexity(ch, cfg, far, false, r.hb->F_blocks), s);
        }
        }
        throw std::invalid_argument("run_scheme: unknown scheme");
    }

    // ---------------------------------------------------------------------
    // Experiments

    struct ExperimentSpec
    {
        std::vector<Scheme> schemes{Scheme::rsma_shb};
        std::string variable = "none"; // eps_factor, delta, L, K, P_th, P_th_dbm or none
        std::vector<double> values{0.0};
        int trials = 1;
        SystemConfig base;
        int threads = 1;
        bool write_traces = true;
    };

    inline const std::vector<std::string> &sweep_variables()
    {
        static const std::vector<std::string> v{"none", "eps_factor", "delta", "L", "K", "P_th", "P_th_dbm"};
        return v;
    }

    inline SystemConfig apply_sweep(SystemConfig cfg, const std::string &variable, double value)
    {
        auto as_int = [&](double v)
        {
            const double r = std::round(v);
            if (std::abs(r - v) > 1e-9)
                throw std::invalid_argument("sweep value for " + variable + " must be an integer");
            return static_cast<int>(r);
        };
        if (variable == "none")
            return cfg;
        if (variable == "eps_factor")
            cfg.eps_factor = value;
        else if (variable == "delta")
            cfg.delta = {value};
        else if (variable == "L")
            cfg.L = as_int(value);
        else if (variable == "K")
            cfg.K = as_int(value);
        else if (variable == "P_th")
            cfg.P_th = value;
        else if (variable == "P_th_dbm")
            cfg.P_th = dbm_to_watt(value);
        else
            throw std::invalid_argument("unknown sweep variable '" + variable + "'");
        cfg.validate();
        return cfg;
    }

    inline void validate(const ExperimentSpec &spec)
    {
        if (spec.trials < 0)
            throw std::invalid_argument("trials must be nonnegative");
        if (spec.schemes.empty())
            throw std::invalid_argument("at least one scheme is required");
        for (double v : spec.values)
            apply_sweep(spec.base, spec.variable, v);
    }

    struct ResultRow
    {
        std::string scheme;
        std::string sweep_name;
        double sweep_value = 0.0;
        int value_index = 0;
        int trial = 0;
        std::uint64_t seed = 0;
        double maxmin_rate = 0.0;
        std::vector<double> user_rates;
        int iters_outer = 0;
        int iters_inner_total = 0;
        double penalty_violation = 0.0;
        double power = 0.0;
        double wall_ms = 0.0;
        std::string status;
        bool sdma_candidate = false;
        SolverReport report;
    };

    // One (scheme, value, trial) job; failures become rows with status.
    inline ResultRow run_job(const ExperimentSpec &spec, Scheme s, int vi, int trial)
    {
        ResultRow row;
        row.scheme = to_string(s);
        row.sweep_name = spec.variable;
        row.sweep_value = spec.values[vi];
        row.value_index = vi;
        row.trial = trial;
        SystemConfig cfg = apply_sweep(spec.base, spec.variable, spec.values[vi]);
        // trial-only seed: every scheme and sweep value sees the same placements
        row.seed = derive_seed(spec.base.seed, 0, static_cast<std::uint64_t>(trial));
        cfg.seed = row.seed;
        try
        {
            const ChannelSet ch = sample_channels(cfg, std::uint64_t{0});
            SchemeResult r = run_scheme(s, ch, cfg);
            row.maxmin_rate = std::max(0.0, r.report.R_hat);
            row.user_rates.assign(r.user_rates.data(), r.user_rates.data() + r.user_rates.size());
            row.iters_outer = r.report.outer_iters;
            row.iters_inner_total = r.report.total_inner();
            row.penalty_violation = r.report.final_penalty_violation();
            row.power = r.power();
            row.wall_ms = 1e3 * r.report.wall_time;
            row.status = to_string(r.report.status);
            row.sdma_candidate = r.sdma_candidate;
            row.report = std::move(r.report);
        }
        catch (const std::exception &e)
        {
            row.status = std::string("error: ") + e.what();
        }
        return row;
    }

    // Rows come back sorted by (scheme order, value index, trial) whatever the
    // thread schedule.
    inline std::vector<ResultRow> run_experiment(const ExperimentSpec &spec,
                                                 const std::function<void(const ResultRow &)> &on_row = {})
    {
        validate(spec);
        struct Job
        {
            Scheme s;
            int vi, trial;
        };
        std::vector<Job> jobs;
        for (Scheme s : spec.schemes)
            for (int vi = 0; vi < static_cast<int>(spec.values.size()); ++vi)
                for (int t = 0; t < spec.trials; ++t)
                    jobs.push_back({s, vi, t});

        std::vector<ResultRow> rows(jobs.size());
        std::atomic<std::size_t> next{0};
        std::mutex collector;
        auto worker = [&]
        {
            for (std::size_t i = next++; i < jobs.size(); i = next++)
            {
                ResultRow r = run_job(spec, jobs[i].s, jobs[i].vi, jobs[i].trial);
                std::lock_guard<std::mutex> lock(collector);
                if (on_row)
                    on_row(r);
                rows[i] = std::move(r);
            }
        };
        const int nt = std::max(1, std::min<int>(spec.threads, static_cast<int>(jobs.size())));
        std::vector<std::thread> pool;
        for (int t = 1; t < nt; ++t)
            pool.emplace_back(worker);
        worker();
        for (auto &th : pool)
            th.join();
        return rows;
    }

    struct SweepSummary
    {
        std::string scheme;
        double sweep_value = 0.0;
        int count = 0;
        int failures = 0;
        double mean = 0.0;
        double stddev = 0.0;
    };

    inline std::vector<SweepSummary> summarize(const ExperimentSpec &spec, const std::vector<ResultRow> &rows)
    {
        std::vector<SweepSummary> out;
        for (Scheme s : spec.schemes)
        {
            for (int vi = 0; vi < static_cast<int>(spec.values.size()); ++vi)
            {
                SweepSummary sm;
                sm.scheme = to_string(s);
                sm.sweep_value = spec.values[vi];
                std::vector<double> v;
                for (const auto &r : rows)
                {
                    if (r.scheme != sm.scheme || r.value_index != vi)
                        continue;
                    if (r.status.rfind("error", 0) == 0)
                        ++sm.failures;
                    else
                        v.push_back(r.maxmin_rate);
                }
                sm.count = static_cast<int>(v.size());
                if (!v.empty())
                {
                    sm.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
                    double ss = 0.0;
                    for (double x : v)
                        ss += (x - sm.mean) * (x - sm.mean);
                    sm.stddev = v.size() > 1 ? std::sqrt(ss / (v.size() - 1)) : 0.0;
                }
                out.push_back(sm);
            }
        }
        return out;
    }

} // namespace nfrsma

#endif
