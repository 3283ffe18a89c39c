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

// Two-stage design: RF-chain allocation with matched analog blocks, then
// SCA on the digital precoder over the equivalent channel F^H h.

#ifndef NFRSMA_TWOSTAGE_HPP
#define NFRSMA_TWOSTAGE_HPP

#include "pbcd.hpp"

#include <algorithm>

namespace nfrsma
{
    // phi[l] = user served by RF chain l
    struct RfAllocation
    {
        std::vector<int> phi;

        int L() const { return static_cast<int>(phi.size()); }
        std::vector<int> counts(int K) const
        {
            std::vector<int> c(K, 0);
            for (int k : phi)
                ++c[k];
            return c;
        }
        bool balanced(int K) const
        {
            const int lo = L() / K, hi = (L() + K - 1) / K;
            for (int c : counts(K))
                if (c < lo || c > hi)
                    return false;
            return true;
        }
    };

    // floor(L/K) chains per user; the L mod K leftover chains go to distinct
    // users drawn without replacement. Chain positions are shuffled.
    inline RfAllocation random_balanced_allocation(int L, int K, Rng &rng)
    {
        if (L <= 0 || K <= 0)
            throw std::invalid_argument("random_balanced_allocation: L and K must be positive");
        std::vector<int> labels;
        for (int k = 0; k < K; ++k)
            labels.insert(labels.end(), L / K, k);
        std::vector<int> users(K);
        std::iota(users.begin(), users.end(), 0);
        std::shuffle(users.begin(), users.end(), rng.engine());
        for (int i = 0; i < L % K; ++i)
            labels.push_back(users[i]);
        std::shuffle(labels.begin(), labels.end(), rng.engine());
        return {labels};
    }

    // f_l = a_k(M l : M (l+1)); |a_sub^H f_l| = M.
    inline CVec matched_analog_block(const CVec &a_k, int l, int M) { return a_k.segment(l * M, M); }

    inline CVec matched_analog_block(const ChannelSet &ch, int k, int l, int M)
    {
        return matched_analog_block(ch.response[k], l, M);
    }

    inline std::vector<CVec> matched_analog(const std::vector<CVec> &responses, const RfAllocation &alloc, int M)
    {
        std::vector<CVec> F(alloc.L());
        for (int l = 0; l < alloc.L(); ++l)
            F[l] = matched_analog_block(responses[alloc.phi[l]], l, M);
        return F;
    }

    // min_k sum_l |a_k(block l)^H f_l|^2
    inline double min_array_gain(const std::vector<CVec> &responses, const std::vector<CVec> &F_blocks)
    {
        const int L = static_cast<int>(F_blocks.size());
        const int M = static_cast<int>(F_blocks.front().size());
        double best = std::numeric_limits<double>::infinity();
        for (const auto &a : responses)
        {
            double g = 0.0;
            for (int l = 0; l < L; ++l)
                g += std::norm(a.segment(l * M, M).dot(F_blocks[l]));
            best = std::min(best, g);
        }
        return best;
    }

    inline double min_array_gain(const ChannelSet &ch, const std::vector<CVec> &F_blocks)
    {
        return min_array_gain(ch.response, F_blocks);
    }

    // G(k, l, j): gain user k collects on chain l when that chain is matched to user j.
    class ChainGainTable
    {
    public:
        ChainGainTable(const std::vector<CVec> &responses, int L) : K_(static_cast<int>(responses.size())), L_(L)
        {
            const int M = static_cast<int>(responses.front().size()) / L;
            g_.resize(static_cast<std::size_t>(K_) * L_ * K_);
            for (int l = 0; l < L; ++l)
                for (int k = 0; k < K_; ++k)
                    for (int j = 0; j < K_; ++j)
                        g_[idx(k, l, j)] = std::norm(responses[k].segment(l * M, M).dot(responses[j].segment(l * M, M)));
        }

        double operator()(int k, int l, int j) const { return g_[idx(k, l, j)]; }

        RVec user_gains(const RfAllocation &a) const
        {
            RVec g = RVec::Zero(K_);
            for (int l = 0; l < L_; ++l)
                for (int k = 0; k < K_; ++k)
                    g(k) += (*this)(k, l, a.phi[l]);
            return g;
        }

    private:
        std::size_t idx(int k, int l, int j) const { return (static_cast<std::size_t>(l) * K_ + k) * K_ + j; }
        int K_, L_;
        std::vector<double> g_;
    };

    struct SwapResult
    {
        RfAllocation alloc;
        std::vector<CVec> F_blocks;
        std::vector<double> trace; // min gain: initial, then after each accepted swap
        int swaps = 0;
    };

    // First-improvement scan over chain pairs (l, l'), l < l'. A swap exchanges
    // the users of the two chains, so per-user chain counts are preserved.
    inline SwapResult swap_optimize(const std::vector<CVec> &responses, const RfAllocation &phi0, bool accept_ties = false,
                                    int max_swaps = 10000)
    {
        const int L = phi0.L();
        const int M = static_cast<int>(responses.front().size()) / L;
        const ChainGainTable G(responses, L);
        SwapResult res;
        res.alloc = phi0;
        RVec gains = G.user_gains(res.alloc);
        double current = gains.minCoeff();
        res.trace.push_back(current);

        bool improved = true;
        while (improved && res.swaps < max_swaps)
        {
            improved = false;
            for (int l = 0; l < L && !improved; ++l)
            {
                for (int lp = l + 1; lp < L && !improved; ++lp)
                {
                    const int u = res.alloc.phi[l], w = res.alloc.phi[lp];
                    if (u == w)
                        continue;
                    RVec trial = gains;
                    for (int k = 0; k < trial.size(); ++k)
                        trial(k) += G(k, l, w) - G(k, l, u) + G(k, lp, u) - G(k, lp, w);
                    const double val = trial.minCoeff();
                    // exact ties (e.g. two users exchanging symmetric chains)
                    // can look like gains after rounding
                    const double margin = 1e-12 * std::max(1.0, std::abs(current));
                    if (val > current + margin || (accept_ties && val >= current - margin))
                    {
                        std::swap(res.alloc.phi[l], res.alloc.phi[lp]);
                        gains = G.user_gains(res.alloc);
                        current = gains.minCoeff();
                        res.trace.push_back(current);
                        ++res.swaps;
                        improved = true;
                    }
                }
            }
        }
        res.F_blocks = matched_analog(responses, res.alloc, M);
        return res;
    }

    inline SwapResult swap_optimize(const ChannelSet &ch, const RfAllocation &phi0, bool accept_ties = false,
                                    int max_swaps = 10000)
    {
        return swap_optimize(ch.response, phi0, accept_ties, max_swaps);
    }

    // Channel set seen by the digital precoder: h_bar = F^H h,
    // eps_bar = sqrt(M) eps so that eps_bar^2 ||W||^2 = eps^2 ||F W||^2.
    inline ChannelSet equivalent_channels(const ChannelSet &ch, const std::vector<CVec> &F_blocks)
    {
        HybridBeamfocuser hb;
        hb.F_blocks = F_blocks;
        const double sm = std::sqrt(static_cast<double>(hb.M()));
        ChannelSet eq;
        eq.geometry = ch.geometry;
        eq.beta = ch.beta;
        eq.eps = ch.eps * sm;
        eq.sigma2 = ch.sigma2;
        for (int k = 0; k < ch.K(); ++k)
        {
            eq.h_hat.push_back(hb.equivalent_channel(ch.h_hat[k]));
            eq.response.push_back(hb.equivalent_channel(ch.response[k]));
        }
        return eq;
    }

    struct DigitalResult
    {
        CMat W;
        RateAllocation alloc;
        SolverReport report;
    };

    // SCA over V with kappa ||V||^2 <= P_th, started from scaled matched filters.
    inline DigitalResult run_digital_sca(const ChannelSet &ch, const SystemConfig &cfg, double power_scale,
                                         bool common_stream)
    {
        const auto t0 = std::chrono::steady_clock::now();
        DigitalResult res;
        const RVec delta = cfg.delta_vector();
        CMat V0 = matched_filter_precoder(ch, common_stream);
        const double p = power_scale * V0.squaredNorm();
        if (p > 0.0)
            V0 *= std::sqrt(cfg.P_th / p);

        ScaSettings st;
        st.P_th = cfg.P_th;
        st.power_scale = power_scale;
        st.common_stream = common_stream;
        st.noise = cfg.noise_model;
        st.tol = cfg.tol_sca;
        st.max_iters = cfg.max_sca;
        st.max_ipm = cfg.max_ipm;

        SolverReport &rep = res.report;
        rep.objective_trace.push_back({0, maxmin_rate(ch, FullPrecoder{V0}, delta, common_stream).R_hat});
        try
        {
            const ScaResult sca = run_sca(ch, delta, st, V0);
            for (double v : sca.trace)
                rep.objective_trace.push_back({0, v});
            rep.sca_iters.push_back(sca.iterations);
            rep.inner_iters.push_back(sca.iterations);
            rep.status = sca.status;
            res.W = sca.V;
            res.alloc = sca.alloc;
        }
        catch (const numeric_error &e)
        {
            rep.status = SolveStatus::numeric_error;
            rep.message = e.what();
            res.W = V0;
            res.alloc = maxmin_rate(ch, FullPrecoder{V0}, delta, common_stream);
        }
        rep.outer_iters = 1;
        rep.penalty_violation_trace.push_back(0.0);
        rep.R_hat = res.alloc.R_hat;
        rep.rate_trace.push_back(rep.R_hat);
        rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    }

    struct TwoStageOptions
    {
        bool far_field = false;    // allocate and match with far-field responses
        bool common_stream = true;
        std::optional<std::vector<CVec>> analog; // skip stage 1 with a given F
    };

    struct TwoStageResult
    {
        HybridBeamfocuser hb;
        RateAllocation alloc;
        RfAllocation rf;
        SwapResult swap;
        SolverReport report;
    };

    inline TwoStageResult run_twostage(const ChannelSet &ch, const SystemConfig &cfg, const TwoStageOptions &opt = {})
    {
        const auto t0 = std::chrono::steady_clock::now();
        TwoStageResult res;
        const int M = cfg.M();
        if (opt.analog)
        {
            res.hb.F_blocks = *opt.analog;
        }
        else
        {
            std::vector<CVec> responses = ch.response;
            if (opt.far_field)
                for (int k = 0; k < ch.K(); ++k)
                    responses[k] = far_field_response(cfg, ch.geometry.theta(k));
            Rng rng(derive_seed(cfg.seed, 0x5A7A11ULL));
            res.rf = random_balanced_allocation(cfg.L, ch.K(), rng);
            res.swap = swap_optimize(responses, res.rf, cfg.swap_accept_ties, cfg.max_swaps);
            res.rf = res.swap.alloc;
            res.hb.F_blocks = res.swap.F_blocks;
        }

        const ChannelSet eq = equivalent_channels(ch, res.hb.F_blocks);
        DigitalResult dig = run_digital_sca(eq, cfg, static_cast<double>(M), opt.common_stream);
        res.hb.W = std::move(dig.W);
        res.report = std::move(dig.report);
        res.alloc = maxmin_rate(ch, res.hb, cfg.delta_vector(), opt.common_stream);
        res.report.R_hat = res.alloc.R_hat;
        res.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    }

} // namespace nfrsma

#endif
