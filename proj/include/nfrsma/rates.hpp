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

// Achievable-rate lower bounds for the common and private streams.
//
// Column layout of every precoder: column 0 is the common stream, column k+1
// is the private stream of user k (users are 0-based throughout).
//
// The error term enters as worst-case Gaussian noise with power
// eps_k^2 * ||P||_F^2, i.e. the squared Euclidean norm of each column.
// The private bound uses |h^H p_k|^2 in the numerator and weights the common
// column by Delta_k in the interference sum.

#ifndef NFRSMA_RATES_HPP
#define NFRSMA_RATES_HPP

#include "model.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace nfrsma
{
    struct FullPrecoder
    {
        CMat P; // N x (K+1)

        int K() const { return static_cast<int>(P.cols()) - 1; }
        double power() const { return P.squaredNorm(); }
        bool power_feasible(double P_th, double tol) const { return power() <= P_th + tol; }
    };

    // Sub-connected hybrid precoder: F = blkdiag(f_1..f_L), W is L x (K+1).
    struct HybridBeamfocuser
    {
        std::vector<CVec> F_blocks;
        CMat W;

        int L() const { return static_cast<int>(F_blocks.size()); }
        int M() const { return F_blocks.empty() ? 0 : static_cast<int>(F_blocks.front().size()); }
        int N() const { return L() * M(); }

        CMat analog_matrix() const
        {
            CMat F = CMat::Zero(N(), L());
            for (int l = 0; l < L(); ++l)
                F.block(l * M(), l, M(), 1) = F_blocks[l];
            return F;
        }

        // F W without materializing F.
        CMat precoder() const
        {
            CMat P(N(), W.cols());
            for (int l = 0; l < L(); ++l)
                P.middleRows(l * M(), M()) = F_blocks[l] * W.row(l);
            return P;
        }

        double power() const
        {
            double p = 0.0;
            for (int l = 0; l < L(); ++l)
                p += F_blocks[l].squaredNorm() * W.row(l).squaredNorm();
            return p;
        }

        // F^H h
        CVec equivalent_channel(const CVec &h) const
        {
            CVec out(L());
            for (int l = 0; l < L(); ++l)
                out(l) = F_blocks[l].dot(h.segment(l * M(), M()));
            return out;
        }

        double max_modulus_error() const
        {
            double e = 0.0;
            for (const auto &f : F_blocks)
                for (Eigen::Index m = 0; m < f.size(); ++m)
                    e = std::max(e, std::abs(std::abs(f(m)) - 1.0));
            return e;
        }
    };

    struct RateAllocation
    {
        RVec c;             // common-rate portions, bits/s/Hz
        double R_hat = 0.0; // max-min value
    };

    struct UserRates
    {
        double common = 0.0;
        double priv = 0.0;
    };

    inline double effective_noise(const CMat &P, double eps_k, double sigma2_k)
    {
        return eps_k * eps_k * P.squaredNorm() + sigma2_k;
    }

    inline double effective_noise(const FullPrecoder &P, double eps_k, double sigma2_k)
    {
        return effective_noise(P.P, eps_k, sigma2_k);
    }

    // log2(1 + |h^H p_0|^2 / (sum_{i>=1} |h^H p_i|^2 + noise))
    inline double common_rate_with_noise(const CVec &h, const CMat &P, double noise)
    {
        const CRow s = h.adjoint() * P;
        const double interference = s.tail(s.size() - 1).squaredNorm();
        return kInvLn2 * std::log1p(std::norm(s(0)) / (interference + noise));
    }

    // column = k+1 for user k
    inline double private_rate_with_noise(const CVec &h, const CMat &P, double delta, int column, double noise)
    {
        const CRow s = h.adjoint() * P;
        double interference = delta * std::norm(s(0));
        for (Eigen::Index i = 1; i < s.size(); ++i)
            if (i != column)
                interference += std::norm(s(i));
        return kInvLn2 * std::log1p(std::norm(s(column)) / (interference + noise));
    }

    inline double common_rate_lb(const ChannelSet &ch, const FullPrecoder &P, int k)
    {
        return common_rate_with_noise(ch.h_hat[k], P.P, effective_noise(P, ch.eps(k), ch.sigma2(k)));
    }

    inline double private_rate_lb(const ChannelSet &ch, const FullPrecoder &P, double delta_k, int k)
    {
        return private_rate_with_noise(ch.h_hat[k], P.P, delta_k, k + 1, effective_noise(P, ch.eps(k), ch.sigma2(k)));
    }

    inline std::vector<UserRates> user_rates(const ChannelSet &ch, const FullPrecoder &P, const RVec &delta)
    {
        std::vector<UserRates> out(ch.K());
        for (int k = 0; k < ch.K(); ++k)
            out[k] = {common_rate_lb(ch, P, k), private_rate_lb(ch, P, delta(k), k)};
        return out;
    }

    // Best split of the common rate: maximize min_k (c_k + private_k)
    // subject to sum c <= min_k common_k, c >= 0 (water-filling on the
    // private rates). Without a common stream, c = 0.
    inline RateAllocation optimal_common_split(const std::vector<UserRates> &rates, bool common_stream = true)
    {
        const int K = static_cast<int>(rates.size());
        RateAllocation out;
        out.c = RVec::Zero(K);
        if (K == 0)
            return out;
        double budget = std::numeric_limits<double>::infinity();
        for (const auto &r : rates)
            budget = std::min(budget, r.common);
        if (!common_stream)
            budget = 0.0;
        budget = std::max(budget, 0.0);

        std::vector<int> order(K);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b)
                  { return rates[a].priv < rates[b].priv; });

        // Raise the lowest j private rates to a common level.
        double level = rates[order[0]].priv;
        double remaining = budget;
        int j = 1;
        while (j < K)
        {
            const double next = rates[order[j]].priv;
            const double cost = (next - level) * j;
            if (cost > remaining)
                break;
            remaining -= cost;
            level = next;
            ++j;
        }
        level += remaining / j;
        for (int i = 0; i < j; ++i)
            out.c(order[i]) = std::max(0.0, level - rates[order[i]].priv);
        out.R_hat = level;
        return out;
    }

    struct MaxMinEvaluation
    {
        double value = 0.0;        // min_k (c_k + R_k,p)
        RVec totals;               // per-user c_k + R_k,p
        bool feasible = true;
        double violation = 0.0;    // max(0, sum c - min_k R_k,c, -min c)
    };

    inline MaxMinEvaluation maxmin_objective(const ChannelSet &ch, const FullPrecoder &P, const RateAllocation &alloc,
                                             const RVec &delta, double tol_feas = 1e-7)
    {
        MaxMinEvaluation ev;
        const int K = ch.K();
        ev.totals.resize(K);
        double min_common = std::numeric_limits<double>::infinity();
        for (int k = 0; k < K; ++k)
        {
            ev.totals(k) = alloc.c(k) + private_rate_lb(ch, P, delta(k), k);
            min_common = std::min(min_common, common_rate_lb(ch, P, k));
        }
        ev.value = ev.totals.minCoeff();
        ev.violation = std::max({0.0, alloc.c.sum() - min_common, -alloc.c.minCoeff()});
        ev.feasible = ev.violation <= tol_feas;
        return ev;
    }

    // Rates through the equivalent channel F^H h with noise eps^2 ||F W||^2 + sigma^2.
    inline UserRates hybrid_rates(const ChannelSet &ch, const HybridBeamfocuser &hb, double delta_k, int k)
    {
        const CVec hbar = hb.equivalent_channel(ch.h_hat[k]);
        const double noise = ch.eps(k) * ch.eps(k) * hb.power() + ch.sigma2(k);
        return {common_rate_with_noise(hbar, hb.W, noise), private_rate_with_noise(hbar, hb.W, delta_k, k + 1, noise)};
    }

    inline std::vector<UserRates> hybrid_user_rates(const ChannelSet &ch, const HybridBeamfocuser &hb, const RVec &delta)
    {
        std::vector<UserRates> out(ch.K());
        for (int k = 0; k < ch.K(); ++k)
            out[k] = hybrid_rates(ch, hb, delta(k), k);
        return out;
    }

    inline RateAllocation maxmin_rate(const ChannelSet &ch, const FullPrecoder &P, const RVec &delta, bool common_stream = true)
    {
        return optimal_common_split(user_rates(ch, P, delta), common_stream);
    }

    inline RateAllocation maxmin_rate(const ChannelSet &ch, const HybridBeamfocuser &hb, const RVec &delta, bool common_stream = true)
    {
        return optimal_common_split(hybrid_user_rates(ch, hb, delta), common_stream);
    }

} // namespace nfrsma

#endif
