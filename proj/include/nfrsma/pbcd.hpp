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

// Penalty-based block coordinate descent for the sub-connected hybrid design.
//
// Inner loop at fixed rho: {P, c, R} by SCA, then F (closed-form phases),
// then W (least squares). Outer loop: rho <- alpha * rho until
// ||P - F W||_F^2 <= tol_penalty * P_th.

#ifndef NFRSMA_PBCD_HPP
#define NFRSMA_PBCD_HPP

#include "subproblem.hpp"

#include <chrono>

namespace nfrsma
{
    struct TracePoint
    {
        int outer = 0;
        double value = 0.0;
    };

    struct SolverReport
    {
        int outer_iters = 0;
        std::vector<int> inner_iters;          // BCD passes per outer iteration
        std::vector<int> sca_iters;            // SCA steps per BCD pass
        std::vector<TracePoint> objective_trace; // penalized objective after every block update
        std::vector<double> penalty_violation_trace; // ||P - F W||^2 per outer iteration
        std::vector<double> rate_trace;        // max-min rate at (F, W) per outer iteration
        double R_hat = 0.0;
        SolveStatus status = SolveStatus::max_iters;
        double wall_time = 0.0;                // seconds
        std::string message;

        int total_inner() const
        {
            int s = 0;
            for (int v : inner_iters)
                s += v;
            return s;
        }
        double final_penalty_violation() const
        {
            return penalty_violation_trace.empty() ? 0.0 : penalty_violation_trace.back();
        }
    };

    struct HybridResult
    {
        HybridBeamfocuser hb;
        RateAllocation alloc;
        FullPrecoder P; // auxiliary precoder at termination
        SolverReport report;
    };

    // f_{l,m} = exp(j angle(psi_{l,m})), Psi_l = P_l w_l^H. Entries with
    // psi = 0 keep the previous phase.
    inline std::vector<CVec> update_analog(const CMat &P, const CMat &W, const std::vector<CVec> &previous)
    {
        const int L = static_cast<int>(W.rows());
        const int M = static_cast<int>(P.rows()) / L;
        std::vector<CVec> F(L);
        for (int l = 0; l < L; ++l)
        {
            const CVec psi = P.middleRows(l * M, M) * W.row(l).adjoint();
            F[l].resize(M);
            for (int m = 0; m < M; ++m)
            {
                const double mag = std::abs(psi(m));
                if (mag > 0.0)
                    F[l](m) = psi(m) / mag;
                else
                    F[l](m) = previous.empty() ? cplx(1.0, 0.0) : previous[l](m) / std::abs(previous[l](m));
            }
        }
        return F;
    }

    // W = (F^H F)^{-1} F^H P = F^H P / M for unit-modulus blocks.
    inline CMat update_digital(const CMat &P, const std::vector<CVec> &F)
    {
        const int L = static_cast<int>(F.size());
        const int M = static_cast<int>(F.front().size());
        CMat W(L, P.cols());
        for (int l = 0; l < L; ++l)
            W.row(l) = (F[l].adjoint() * P.middleRows(l * M, M)) / static_cast<double>(M);
        return W;
    }

    // Scaled matched filters; the common column is the normalized sum of the
    // private ones. Every column has unit norm before the caller rescales.
    inline CMat matched_filter_precoder(const ChannelSet &ch, bool common_stream)
    {
        const int K = ch.K(), N = ch.N();
        CMat P = CMat::Zero(N, K + 1);
        for (int k = 0; k < K; ++k)
        {
            const double nrm = ch.h_hat[k].norm();
            if (nrm > 0.0)
                P.col(k + 1) = ch.h_hat[k] / nrm;
        }
        if (common_stream)
        {
            CVec c = P.rightCols(K).rowwise().sum();
            const double nrm = c.norm();
            if (nrm > 0.0)
                P.col(0) = c / nrm;
        }
        return P;
    }

    inline void scale_to_power(HybridBeamfocuser &hb, double P_th)
    {
        const double p = hb.power();
        if (p > 0.0)
            hb.W *= std::sqrt(P_th / p);
    }

    // Random (or zero) phases for F, W = F^H P_mf / M scaled to ||F W||^2 = P_th.
    inline HybridBeamfocuser default_hybrid_init(const ChannelSet &ch, const SystemConfig &cfg, bool common_stream = true)
    {
        Rng rng(derive_seed(cfg.seed, 0xB0CDULL));
        HybridBeamfocuser hb;
        const int M = cfg.M();
        hb.F_blocks.assign(cfg.L, CVec::Ones(M));
        if (cfg.analog_init == AnalogInit::random_phase)
            for (auto &f : hb.F_blocks)
                for (int m = 0; m < M; ++m)
                    f(m) = std::polar(1.0, rng.phase());
        hb.W = update_digital(matched_filter_precoder(ch, common_stream), hb.F_blocks);
        scale_to_power(hb, cfg.P_th);
        return hb;
    }

    struct PbcdOptions
    {
        bool common_stream = true;
        std::optional<HybridBeamfocuser> init;
    };

    inline HybridResult run_pbcd(const ChannelSet &ch, const SystemConfig &cfg, const PbcdOptions &opt = {})
    {
        const auto t0 = std::chrono::steady_clock::now();
        HybridResult res;
        SolverReport &rep = res.report;
        const RVec delta = cfg.delta_vector();

        HybridBeamfocuser hb = opt.init ? *opt.init : default_hybrid_init(ch, cfg, opt.common_stream);
        if (!opt.common_stream)
            hb.W.col(0).setZero();
        CMat P = hb.precoder();
        double rho = cfg.use_penalty ? cfg.rho0 : std::numeric_limits<double>::infinity();
        const double tol_pen = cfg.tol_penalty * cfg.P_th;

        ScaSettings st;
        st.P_th = cfg.P_th;
        st.power_scale = 1.0;
        st.common_stream = opt.common_stream;
        st.noise = cfg.noise_model;
        st.tol = cfg.tol_sca;
        st.max_iters = cfg.max_sca;
        st.max_ipm = cfg.max_ipm;

        auto objective = [&](const CMat &Pm, const HybridBeamfocuser &h)
        {
            double v = maxmin_rate(ch, FullPrecoder{Pm}, delta, opt.common_stream).R_hat;
            if (std::isfinite(rho))
                v -= (Pm - h.precoder()).squaredNorm() / rho;
            return v;
        };

        try
        {
            for (int outer = 0; outer < cfg.max_outer; ++outer)
            {
                double prev = objective(P, hb);
                rep.objective_trace.push_back({outer, prev});
                int inner = 0;
                for (; inner < cfg.max_inner; ++inner)
                {
                    st.target = hb.precoder();
                    st.rho = rho;
                    const ScaResult sca = run_sca(ch, delta, st, P);
                    P = sca.V;
                    rep.sca_iters.push_back(sca.iterations);
                    rep.objective_trace.push_back({outer, objective(P, hb)});

                    hb.F_blocks = update_analog(P, hb.W, hb.F_blocks);
                    rep.objective_trace.push_back({outer, objective(P, hb)});
                    hb.W = update_digital(P, hb.F_blocks);
                    const double val = objective(P, hb);
                    rep.objective_trace.push_back({outer, val});

                    if (std::abs(val - prev) <= cfg.tol_inner * std::max(1.0, std::abs(val)))
                    {
                        ++inner;
                        break;
                    }
                    prev = val;
                }
                rep.inner_iters.push_back(inner);
                rep.outer_iters = outer + 1;
                const double viol = (P - hb.precoder()).squaredNorm();
                rep.penalty_violation_trace.push_back(viol);
                rep.rate_trace.push_back(maxmin_rate(ch, hb, delta, opt.common_stream).R_hat);
                if (!std::isfinite(rho) || viol <= tol_pen)
                {
                    rep.status = SolveStatus::converged;
                    break;
                }
                rho *= cfg.alpha;
            }
        }
        catch (const numeric_error &e)
        {
            rep.status = SolveStatus::numeric_error;
            rep.message = e.what();
        }

        res.hb = std::move(hb);
        res.P.P = P;
        res.alloc = maxmin_rate(ch, res.hb, delta, opt.common_stream);
        rep.R_hat = res.alloc.R_hat;
        rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    }

} // namespace nfrsma

#endif
