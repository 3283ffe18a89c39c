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

// Convex max-min step over (V, c, R) with surrogate rate constraints:
//
//   maximize   R - (1/rho) ||V - T||_F^2
//   subject to sum_i c_i <= f_{k,c}(V)      for all k
//              c_k + f_{k,p}(V) >= R        for all k
//              c >= 0,  kappa ||V||_F^2 <= P_th
//
// V is either the full precoder P (kappa = 1, optional penalty target
// T = F W) or the digital precoder W on the equivalent channel (kappa = M,
// no penalty).
//
// Every surrogate depends on V only through h_k^H V and ||V||_F, so the
// problem is solved exactly in the coordinates of span{h_1..h_K} plus one
// scalar t for the component along the part of T orthogonal to that span:
//
//   V = Q X + t T_perp
//
// The reduced problem has at most 2K(K+1) + K + 2 real variables and is
// solved with a dense primal-dual interior-point method.

#ifndef NFRSMA_SUBPROBLEM_HPP
#define NFRSMA_SUBPROBLEM_HPP

#include "surrogate.hpp"

#include <functional>
#include <optional>

namespace nfrsma
{
    struct ConvexInstance
    {
        std::vector<SurrogateCoeffs> common; // one per user; empty without a common stream
        std::vector<SurrogateCoeffs> priv;   // one per user
        std::optional<CMat> target;          // penalty target F W
        double rho = std::numeric_limits<double>::infinity();
        double P_th = 1.0;
        double power_scale = 1.0; // kappa
        int K = 0;
        bool common_stream = true;
        int max_iters = 200;

        double penalty_weight() const { return target && std::isfinite(rho) ? 1.0 / rho : 0.0; }
        double tol_feas() const { return 1e-7 * std::max(1.0, P_th); }
    };

    struct Multipliers
    {
        RVec common;     // sum c <= f_{k,c}
        RVec priv;       // R <= c_k + f_{k,p}
        RVec nonneg;     // c_k >= 0
        double power = 0.0;
    };

    struct SubproblemSolution
    {
        CMat V;
        RVec c;
        double R_hat = 0.0;
        double objective = 0.0; // R - (1/rho) ||V - T||^2
        double kkt_residual = 0.0;
        double feasibility_residual = 0.0;
        int iterations = 0;
        SolveStatus status = SolveStatus::converged;
        Multipliers mult;
        bool common_dropped = false; // common constraints had no interior; c fixed at 0
    };

    namespace detail
    {
        // g(z) = 0.5 z^T A z + b^T z + c
        struct QuadForm
        {
            RMat A;
            RVec b;
            double c = 0.0;
            bool linear = false;

            double value(const RVec &z) const
            {
                double v = b.dot(z) + c;
                if (!linear)
                    v += 0.5 * z.dot(A * z);
                return v;
            }
            RVec grad(const RVec &z) const { return linear ? b : RVec(A * z + b); }
        };

        struct ReducedLayout
        {
            int r = 0;              // subspace dimension
            std::vector<int> cols;  // active precoder columns
            int n_y = 0;
            int t_idx = -1;
            int c_idx = -1;         // first c entry, -1 if c absent
            int R_idx = 0;
            int dim = 0;

            int col_offset(int col_pos) const { return 2 * r * col_pos; }
        };

        // Real coordinates of s = g^H y for y = [Re y; Im y] in R^{2r}.
        inline void projection_rows(const CVec &g, RVec &alpha, RVec &beta)
        {
            const int r = static_cast<int>(g.size());
            alpha.resize(2 * r);
            beta.resize(2 * r);
            for (int i = 0; i < r; ++i)
            {
                const cplx q = std::conj(g(i));
                alpha(i) = q.real();
                alpha(r + i) = -q.imag();
                beta(i) = q.imag();
                beta(r + i) = q.real();
            }
        }

        inline CMat orthonormal_channel_basis(const std::vector<SurrogateCoeffs> &priv)
        {
            const int K = static_cast<int>(priv.size());
            const int n = K ? static_cast<int>(priv.front().h.size()) : 0;
            CMat H(n, K);
            for (int k = 0; k < K; ++k)
                H.col(k) = priv[k].h;
            if (K == 0 || n == 0)
                return CMat(n, 0);
            Eigen::JacobiSVD<CMat> svd(H, Eigen::ComputeThinU);
            const RVec &sv = svd.singularValues();
            const double thresh = sv.size() ? sv(0) * 1e-10 : 0.0;
            int rank = 0;
            for (Eigen::Index i = 0; i < sv.size(); ++i)
                if (sv(i) > thresh && sv(i) > 0.0)
                    ++rank;
            return svd.matrixU().leftCols(rank);
        }

        // Surrogate f as a concave quadratic in the reduced variables; returns
        // -f as a convex QuadForm (caller adds the linear c / R terms).
        inline QuadForm negated_surrogate(const SurrogateCoeffs &s, const CMat &Q, double scale,
                                          const ReducedLayout &lay, double gamma)
        {
            QuadForm q;
            q.A = RMat::Zero(lay.dim, lay.dim);
            q.b = RVec::Zero(lay.dim);
            const CVec g = scale * (Q.adjoint() * s.h);
            RVec alpha, beta;
            projection_rows(g, alpha, beta);
            const double e = s.err_weight * scale * scale;
            for (std::size_t p = 0; p < lay.cols.size(); ++p)
            {
                const int j = lay.cols[p];
                const int off = lay.col_offset(static_cast<int>(p));
                const int w = 2 * lay.r;
                if (w == 0)
                    continue;
                q.A.block(off, off, w, w) += (2.0 * s.a * s.weights(j)) * (alpha * alpha.transpose() + beta * beta.transpose());
                q.A.block(off, off, w, w).diagonal().array() += 2.0 * e;
                if (j == s.linear_column)
                    q.b.segment(off, w) -= 2.0 * (s.b.real() * alpha - s.b.imag() * beta);
            }
            if (lay.t_idx >= 0)
                q.A(lay.t_idx, lay.t_idx) += 2.0 * e * gamma;
            q.c = -s.z;
            return q;
        }
    } // namespace detail

    // Solve one convex instance. warm_start is a V-shaped matrix; only its
    // projection onto the channel span is used to build the interior start.
    inline SubproblemSolution solve_inner(const ConvexInstance &inst, const CMat &warm_start)
    {
        using namespace detail;
        const int K = inst.K;
        if (static_cast<int>(inst.priv.size()) != K)
            throw std::invalid_argument("solve_inner: need one private surrogate per user");
        const bool has_common_input = inst.common_stream;
        if (has_common_input && static_cast<int>(inst.common.size()) != K)
            throw std::invalid_argument("solve_inner: need one common surrogate per user");

        const int n = static_cast<int>(inst.priv.front().h.size());
        const int cols = K + 1;
        const double scale = std::sqrt(inst.P_th / inst.power_scale); // V = scale * Y
        const double wpen = inst.penalty_weight() * scale * scale;

        const CMat Q = orthonormal_channel_basis(inst.priv);
        ReducedLayout lay;
        lay.r = static_cast<int>(Q.cols());
        for (int j = inst.common_stream ? 0 : 1; j < cols; ++j)
            lay.cols.push_back(j);
        lay.n_y = 2 * lay.r * static_cast<int>(lay.cols.size());

        // Penalty target split into span and orthogonal parts (scaled).
        CMat Yt = CMat::Zero(lay.r, cols);
        CMat T_perp = CMat::Zero(n, cols);
        double gamma = 0.0;
        if (wpen > 0.0)
        {
            CMat T = *inst.target;
            if (!inst.common_stream)
                T.col(0).setZero();
            Yt = (Q.adjoint() * T) / scale;
            T_perp = T - Q * (Q.adjoint() * T);
            gamma = T_perp.squaredNorm() / (scale * scale);
        }
        const bool use_t = wpen > 0.0 && gamma > 1e-15;

        // Interior start from the warm start.
        CMat Y0 = (Q.adjoint() * warm_start) / scale;
        if (!inst.common_stream)
            Y0.col(0).setZero();
        const double y0n = Y0.squaredNorm();
        if (y0n > 0.999)
            Y0 *= std::sqrt(0.999 / y0n);

        auto pack = [&](const CMat &Y, RVec &z)
        {
            for (std::size_t p = 0; p < lay.cols.size(); ++p)
            {
                const int off = lay.col_offset(static_cast<int>(p));
                for (int i = 0; i < lay.r; ++i)
                {
                    z(off + i) = Y(i, lay.cols[p]).real();
                    z(off + lay.r + i) = Y(i, lay.cols[p]).imag();
                }
            }
        };
        auto unpack = [&](const RVec &z)
        {
            CMat Y = CMat::Zero(lay.r, cols);
            for (std::size_t p = 0; p < lay.cols.size(); ++p)
            {
                const int off = lay.col_offset(static_cast<int>(p));
                for (int i = 0; i < lay.r; ++i)
                    Y(i, lay.cols[p]) = cplx(z(off + i), z(off + lay.r + i));
            }
            return Y;
        };

        // Decide whether the common-rate constraints have a strict interior.
        int dim_wo_c = lay.n_y + (use_t ? 1 : 0);
        bool use_c = false;
        double min_common0 = 0.0;
        {
            ReducedLayout probe = lay;
            probe.t_idx = use_t ? lay.n_y : -1;
            probe.R_idx = dim_wo_c;
            probe.dim = dim_wo_c + 1;
            RVec z0 = RVec::Zero(probe.dim);
            pack(Y0, z0);
            if (inst.common_stream)
            {
                min_common0 = std::numeric_limits<double>::infinity();
                for (int k = 0; k < K; ++k)
                    min_common0 = std::min(min_common0, -negated_surrogate(inst.common[k], Q, scale, probe, gamma).value(z0));
                use_c = min_common0 > 1e-9;
            }
        }

        lay.t_idx = use_t ? lay.n_y : -1;
        lay.c_idx = use_c ? dim_wo_c : -1;
        lay.R_idx = dim_wo_c + (use_c ? K : 0);
        lay.dim = lay.R_idx + 1;
        const int d = lay.dim;

        // Objective: minimize -R + wpen (||Y - Yt||^2 + (1 - t)^2 gamma).
        QuadForm obj;
        obj.A = RMat::Zero(d, d);
        obj.b = RVec::Zero(d);
        obj.b(lay.R_idx) = -1.0;
        if (wpen > 0.0)
        {
            RVec yt = RVec::Zero(d);
            pack(Yt, yt);
            for (int i = 0; i < lay.n_y; ++i)
                obj.A(i, i) = 2.0 * wpen;
            obj.b.head(lay.n_y) -= 2.0 * wpen * yt.head(lay.n_y);
            obj.c = wpen * (Yt.squaredNorm() + gamma);
            if (use_t)
            {
                obj.A(lay.t_idx, lay.t_idx) = 2.0 * wpen * gamma;
                obj.b(lay.t_idx) = -2.0 * wpen * gamma;
            }
        }

        // Constraints, in order: common (K), private (K), nonneg (K), power.
        std::vector<QuadForm> cons;
        std::vector<int> common_row, priv_row, nonneg_row;
        if (use_c)
        {
            for (int k = 0; k < K; ++k)
            {
                QuadForm q = negated_surrogate(inst.common[k], Q, scale, lay, gamma);
                q.b.segment(lay.c_idx, K).array() += 1.0;
                common_row.push_back(static_cast<int>(cons.size()));
                cons.push_back(std::move(q));
            }
        }
        for (int k = 0; k < K; ++k)
        {
            QuadForm q = negated_surrogate(inst.priv[k], Q, scale, lay, gamma);
            q.b(lay.R_idx) += 1.0;
            if (use_c)
                q.b(lay.c_idx + k) -= 1.0;
            priv_row.push_back(static_cast<int>(cons.size()));
            cons.push_back(std::move(q));
        }
        if (use_c)
        {
            for (int k = 0; k < K; ++k)
            {
                QuadForm q;
                q.linear = true;
                q.b = RVec::Zero(d);
                q.b(lay.c_idx + k) = -1.0;
                nonneg_row.push_back(static_cast<int>(cons.size()));
                cons.push_back(std::move(q));
            }
        }
        const int power_row = static_cast<int>(cons.size());
        {
            QuadForm q;
            q.A = RMat::Zero(d, d);
            for (int i = 0; i < lay.n_y; ++i)
                q.A(i, i) = 2.0;
            if (use_t)
                q.A(lay.t_idx, lay.t_idx) = 2.0 * gamma;
            q.b = RVec::Zero(d);
            q.c = -1.0;
            cons.push_back(std::move(q));
        }
        const int m = static_cast<int>(cons.size());

        // Strictly feasible start.
        RVec z = RVec::Zero(d);
        pack(Y0, z);
        if (use_t)
            z(lay.t_idx) = 0.0;
        if (use_c)
            z.segment(lay.c_idx, K).setConstant(min_common0 / (2.0 * K));
        {
            double rmin = std::numeric_limits<double>::infinity();
            for (int k = 0; k < K; ++k)
            {
                z(lay.R_idx) = 0.0;
                rmin = std::min(rmin, -cons[priv_row[k]].value(z));
            }
            z(lay.R_idx) = rmin - 1.0;
        }

        RVec g(m);
        auto eval_g = [&](const RVec &x, RVec &out)
        {
            for (int i = 0; i < m; ++i)
                out(i) = cons[i].value(x);
        };
        eval_g(z, g);
        if (!(g.maxCoeff() < 0.0) || !g.allFinite())
            throw numeric_error("solve_inner: could not construct a strictly feasible start");

        RVec lam(m);
        for (int i = 0; i < m; ++i)
            lam(i) = std::clamp(1.0 / -g(i), 1e-3, 1e3);

        RMat Dg(m, d);
        auto residuals = [&](const RVec &x, const RVec &l, const RVec &gx, double tinv, RVec &rd, RVec &rc)
        {
            rd = obj.grad(x);
            for (int i = 0; i < m; ++i)
                rd += l(i) * cons[i].grad(x);
            rc = -(l.array() * gx.array()).matrix() - RVec::Constant(m, tinv);
        };

        const double mu_factor = 10.0;
        const double tol_dual = 1e-11, tol_gap = 1e-11;
        SubproblemSolution sol;
        sol.status = SolveStatus::max_iters;
        RVec rd, rc;
        int it = 0;
        for (; it < inst.max_iters; ++it)
        {
            const double eta = -g.dot(lam);
            const double tinv = eta / (mu_factor * m);
            residuals(z, lam, g, tinv, rd, rc);
            if (!rd.allFinite() || !std::isfinite(eta))
                throw numeric_error("solve_inner: non-finite residual");
            if (rd.lpNorm<Eigen::Infinity>() <= tol_dual && eta <= tol_gap)
            {
                sol.status = SolveStatus::converged;
                break;
            }

            RMat H = obj.linear ? RMat::Zero(d, d) : obj.A;
            RVec rhs = -rd;
            for (int i = 0; i < m; ++i)
            {
                const RVec gi = cons[i].grad(z);
                Dg.row(i) = gi.transpose();
                if (!cons[i].linear)
                    H += lam(i) * cons[i].A;
                H.noalias() += (lam(i) / -g(i)) * gi * gi.transpose();
                rhs -= gi * (rc(i) / g(i));
            }
            Eigen::LDLT<RMat> ldlt(H);
            RVec dz = ldlt.solve(rhs);
            if (ldlt.info() != Eigen::Success || !dz.allFinite())
            {
                H.diagonal().array() += 1e-12 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
                dz = H.fullPivLu().solve(rhs);
                if (!dz.allFinite())
                    throw numeric_error("solve_inner: singular Newton system");
            }
            RVec dlam(m);
            const RVec Dgdz = Dg * dz;
            for (int i = 0; i < m; ++i)
                dlam(i) = (rc(i) - lam(i) * Dgdz(i)) / g(i);

            double smax = 1.0;
            for (int i = 0; i < m; ++i)
                if (dlam(i) < 0.0)
                    smax = std::min(smax, -lam(i) / dlam(i));
            double s = 0.99 * smax;
            RVec zn(d), ln(m), gn(m), rdn, rcn;
            const double rnorm = std::sqrt(rd.squaredNorm() + rc.squaredNorm());
            bool accepted = false;
            for (int ls = 0; ls < 60; ++ls)
            {
                zn = z + s * dz;
                eval_g(zn, gn);
                if (gn.maxCoeff() < 0.0)
                {
                    ln = lam + s * dlam;
                    residuals(zn, ln, gn, tinv, rdn, rcn);
                    if (std::sqrt(rdn.squaredNorm() + rcn.squaredNorm()) <= (1.0 - 0.01 * s) * rnorm)
                    {
                        accepted = true;
                        break;
                    }
                }
                s *= 0.5;
            }
            if (!accepted)
            {
                // No progress possible at this accuracy; accept if already tight.
                if (rd.lpNorm<Eigen::Infinity>() <= 1e-8 && eta <= 1e-8)
                    sol.status = SolveStatus::converged;
                break;
            }
            z = zn;
            lam = ln;
            g = gn;
        }
        sol.iterations = it;

        // Assemble the solution in the original coordinates.
        const CMat Y = unpack(z);
        const double t = use_t ? z(lay.t_idx) : 0.0;
        sol.V = scale * (Q * Y);
        if (use_t)
            sol.V += t * T_perp;
        if (!inst.common_stream)
            sol.V.col(0).setZero();
        sol.c = use_c ? RVec(z.segment(lay.c_idx, K)) : RVec::Zero(K);
        sol.R_hat = z(lay.R_idx);
        sol.common_dropped = inst.common_stream && !use_c;
        sol.objective = -obj.value(z);

        sol.mult.common = RVec::Zero(K);
        sol.mult.priv = RVec::Zero(K);
        sol.mult.nonneg = RVec::Zero(K);
        for (int k = 0; k < K; ++k)
        {
            if (use_c)
            {
                sol.mult.common(k) = lam(common_row[k]);
                sol.mult.nonneg(k) = lam(nonneg_row[k]);
            }
            sol.mult.priv(k) = lam(priv_row[k]);
        }
        sol.mult.power = lam(power_row) / inst.P_th;

        // Reduced-space diagnostics.
        residuals(z, lam, g, 0.0, rd, rc);
        double gscale = std::max(1.0, obj.grad(z).lpNorm<Eigen::Infinity>());
        for (int i = 0; i < m; ++i)
            gscale = std::max(gscale, lam(i) * cons[i].grad(z).lpNorm<Eigen::Infinity>());
        sol.kkt_residual = rd.lpNorm<Eigen::Infinity>() / gscale;
        double feas = 0.0;
        for (int i = 0; i < m; ++i)
            feas = std::max(feas, (i == power_row ? inst.P_th : 1.0) * g(i));
        sol.feasibility_residual = std::max(0.0, feas);
        return sol;
    }

    struct KktReport
    {
        double feasibility = 0.0;     // worst constraint violation (bits or watts)
        double nonneg_violation = 0.0;
        double power_violation = 0.0; // watts
        double complementarity = 0.0; // max |lambda_i g_i|
        double stationarity = 0.0;    // relative Lagrangian gradient norm
        double max_residual() const
        {
            return std::max({feasibility, nonneg_violation, power_violation, complementarity, stationarity});
        }
    };

    // Independent full-space check of a solution: constraint slacks,
    // complementary slackness and Lagrangian stationarity, using the
    // surrogate coefficients directly rather than the reduced coordinates.
    inline KktReport verify_kkt(const ConvexInstance &inst, const SubproblemSolution &sol)
    {
        KktReport rep;
        const int K = inst.K;
        const CMat &V = sol.V;
        const bool use_c = inst.common_stream && !sol.common_dropped;
        const double wpen = inst.penalty_weight();

        const double power = inst.power_scale * V.squaredNorm();
        rep.power_violation = std::max(0.0, power - inst.P_th);
        rep.nonneg_violation = sol.c.size() ? std::max(0.0, -sol.c.minCoeff()) : 0.0;
        const double sum_c = sol.c.sum();

        double comp = std::abs(sol.mult.power * (power - inst.P_th));
        double feas = 0.0;
        CMat grad = CMat::Zero(V.rows(), V.cols());
        if (wpen > 0.0)
        {
            CMat T = *inst.target;
            if (!inst.common_stream)
                T.col(0).setZero();
            grad += 2.0 * wpen * (V - T);
        }
        double scale = std::max(1.0, grad.cwiseAbs().maxCoeff());
        grad += 2.0 * sol.mult.power * inst.power_scale * V;
        scale = std::max(scale, (2.0 * sol.mult.power * inst.power_scale * V).cwiseAbs().maxCoeff());

        double dR = -1.0;
        RVec dc = RVec::Zero(K);
        for (int k = 0; k < K; ++k)
        {
            if (use_c)
            {
                const double gk = sum_c - eval_surrogate(inst.common[k], V);
                feas = std::max(feas, gk);
                comp = std::max(comp, std::abs(sol.mult.common(k) * gk));
                const CMat Gk = sol.mult.common(k) * surrogate_gradient(inst.common[k], V);
                grad -= Gk;
                scale = std::max(scale, Gk.cwiseAbs().maxCoeff());
                dc.array() += sol.mult.common(k);
                dc(k) -= sol.mult.nonneg(k);
                comp = std::max(comp, std::abs(sol.mult.nonneg(k) * sol.c(k)));
            }
            const double ck = use_c ? sol.c(k) : 0.0;
            const double gk = sol.R_hat - ck - eval_surrogate(inst.priv[k], V);
            feas = std::max(feas, gk);
            comp = std::max(comp, std::abs(sol.mult.priv(k) * gk));
            const CMat Gk = sol.mult.priv(k) * surrogate_gradient(inst.priv[k], V);
            grad -= Gk;
            scale = std::max(scale, Gk.cwiseAbs().maxCoeff());
            dR += sol.mult.priv(k);
            if (use_c)
                dc(k) -= sol.mult.priv(k);
        }
        if (!inst.common_stream)
            grad.col(0).setZero();
        rep.feasibility = std::max({0.0, feas, rep.power_violation});
        rep.complementarity = comp;
        double stat = std::max(grad.cwiseAbs().maxCoeff() / scale, std::abs(dR));
        if (use_c)
            stat = std::max(stat, dc.cwiseAbs().maxCoeff());
        rep.stationarity = stat;
        return rep;
    }

    // ---------------------------------------------------------------------
    // Successive convex approximation loop (surrogates rebuilt at every step).

    struct ScaSettings
    {
        double P_th = 1.0;
        double power_scale = 1.0;
        bool common_stream = true;
        NoiseModel noise = NoiseModel::frozen;
        std::optional<CMat> target;
        double rho = std::numeric_limits<double>::infinity();
        double tol = 1e-4;
        int max_iters = 30;
        int max_ipm = 200;
    };

    struct ScaResult
    {
        CMat V;
        RateAllocation alloc;   // exact max-min split at V
        double objective = 0.0; // max-min rate minus penalty
        int iterations = 0;
        std::vector<double> trace;
        SolveStatus status = SolveStatus::max_iters;
        SubproblemSolution last;
    };

    inline double penalized_objective(const ChannelSet &ch, const RVec &delta, const CMat &V, const ScaSettings &st,
                                      RateAllocation *alloc = nullptr)
    {
        RateAllocation a = maxmin_rate(ch, FullPrecoder{V}, delta, st.common_stream);
        double val = a.R_hat;
        if (st.target && std::isfinite(st.rho))
            val -= (V - *st.target).squaredNorm() / st.rho;
        if (alloc)
            *alloc = std::move(a);
        return val;
    }

    inline ConvexInstance make_instance(const ChannelSet &ch, const RVec &delta, const CMat &V_exp, const ScaSettings &st)
    {
        ConvexInstance inst;
        inst.K = ch.K();
        inst.P_th = st.P_th;
        inst.power_scale = st.power_scale;
        inst.common_stream = st.common_stream;
        inst.target = st.target;
        inst.rho = st.rho;
        inst.max_iters = st.max_ipm;
        for (int k = 0; k < ch.K(); ++k)
        {
            if (st.common_stream)
                inst.common.push_back(build_surrogate(ch.h_hat[k], ch.eps(k), ch.sigma2(k), V_exp, delta(k), k,
                                                      StreamClass::common, st.noise));
            inst.priv.push_back(build_surrogate(ch.h_hat[k], ch.eps(k), ch.sigma2(k), V_exp, delta(k), k,
                                                StreamClass::priv, st.noise));
        }
        return inst;
    }

    // Runs the minorize-maximize loop from V0 until the relative increment of
    // the penalized objective drops below st.tol.
    inline ScaResult run_sca(const ChannelSet &ch, const RVec &delta, const ScaSettings &st, const CMat &V0)
    {
        ScaResult res;
        res.V = V0;
        if (!st.common_stream)
            res.V.col(0).setZero();
        double prev = penalized_objective(ch, delta, res.V, st, &res.alloc);
        res.objective = prev;
        for (int it = 0; it < st.max_iters; ++it)
        {
            const ConvexInstance inst = make_instance(ch, delta, res.V, st);
            SubproblemSolution sol = solve_inner(inst, res.V);
            RateAllocation alloc;
            const double val = penalized_objective(ch, delta, sol.V, st, &alloc);
            res.V = sol.V;
            res.alloc = std::move(alloc);
            res.objective = val;
            res.trace.push_back(val);
            res.last = std::move(sol);
            res.iterations = it + 1;
            if (std::abs(val - prev) <= st.tol * std::max(1.0, std::abs(val)))
            {
                res.status = SolveStatus::converged;
                break;
            }
            prev = val;
        }
        return res;
    }

} // namespace nfrsma

#endif
