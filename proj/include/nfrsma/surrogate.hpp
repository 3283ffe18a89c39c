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

// Concave quadratic minorizers of the rate bounds (MMSE / weighted-MSE form).
//
// For user k and stream class tau, with s_j = h^H p_j and column weights
// w_j (all 1 for the common stream, w_0 = Delta_k for the private stream):
//
//   f(P) = -a sum_j w_j |h^H p_j|^2 - e ||P||^2 + 2 Re(b h^H p_lin) + z
//
//   u = s~_lin / (sum_j w_j |s~_j|^2 + sigma~^2),  v = 1 - conj(u) s~_lin
//   a = |u|^2 / (v ln2),  b = conj(u) / (v ln2)
//   z = 1/ln2 - (sigma^2 |u|^2 + 1) / (v ln2) - log2(v)
//
// x = -a h h^H is rank one and negative semidefinite, y = b h^H.
// In the frozen model, sigma^2 in z is the effective noise at the expansion
// point and e = 0. In the tracked model z uses the thermal noise and
// e = a eps^2, so f also minorizes the bound with P-dependent noise.

#ifndef NFRSMA_SURROGATE_HPP
#define NFRSMA_SURROGATE_HPP

#include "rates.hpp"

namespace nfrsma
{
    enum class StreamClass
    {
        common,
        priv
    };

    struct SurrogateCoeffs
    {
        int k = 0;
        StreamClass tau = StreamClass::common;
        NoiseModel noise = NoiseModel::frozen;

        CVec h;              // estimated channel of user k
        RVec weights;        // w_j, j = 0..K
        int linear_column = 0;

        cplx u{0.0, 0.0};
        double v = 1.0;
        double a = 0.0;
        cplx b{0.0, 0.0};
        double z = 0.0;
        double err_weight = 0.0; // e
        double eps = 0.0;
        double sigma2 = 0.0;           // thermal noise
        double sigma2_expansion = 0.0; // effective noise at the expansion point

        FullPrecoder expansion;

        CMat x_matrix() const { return -a * h * h.adjoint(); }
        CRow y_row() const { return b * h.adjoint(); }
    };

    // Rate of one stream class with an explicit noise power.
    inline double stream_rate(const CVec &h, const CMat &P, double delta_k, int k, StreamClass tau, double noise)
    {
        return tau == StreamClass::common ? common_rate_with_noise(h, P, noise)
                                          : private_rate_with_noise(h, P, delta_k, k + 1, noise);
    }

    inline double stream_rate(const ChannelSet &ch, const FullPrecoder &P, double delta_k, int k, StreamClass tau)
    {
        return stream_rate(ch.h_hat[k], P.P, delta_k, k, tau, effective_noise(P, ch.eps(k), ch.sigma2(k)));
    }

    // Core builder on an explicit channel vector. Used directly by the
    // digital stage, where h is the equivalent channel F^H h.
    inline SurrogateCoeffs build_surrogate(const CVec &h, double eps, double sigma2, const CMat &P_exp, double delta_k,
                                           int k, StreamClass tau, NoiseModel noise = NoiseModel::frozen)
    {
        SurrogateCoeffs s;
        s.k = k;
        s.tau = tau;
        s.noise = noise;
        s.h = h;
        s.expansion.P = P_exp;
        const int cols = static_cast<int>(P_exp.cols());
        s.weights = RVec::Ones(cols);
        s.linear_column = tau == StreamClass::common ? 0 : k + 1;
        if (tau == StreamClass::priv)
            s.weights(0) = delta_k;

        const CRow sv = h.adjoint() * P_exp;
        const double sigma2_exp = effective_noise(P_exp, eps, sigma2);
        s.sigma2_expansion = sigma2_exp;
        s.eps = eps;
        s.sigma2 = sigma2;

        double total = sigma2_exp;
        for (int j = 0; j < cols; ++j)
            total += s.weights(j) * std::norm(sv(j));
        const cplx sl = sv(s.linear_column);
        s.u = sl / total;
        s.v = 1.0 - std::real(std::conj(s.u) * sl);
        if (!std::isfinite(s.v) || !(s.v > 0.0) || !std::isfinite(total))
            throw numeric_error("build_surrogate: MSE auxiliary outside (0,1]");

        s.a = kInvLn2 * std::norm(s.u) / s.v;
        s.b = kInvLn2 * std::conj(s.u) / s.v;
        const double sigma2_z = noise == NoiseModel::frozen ? sigma2_exp : sigma2;
        s.z = kInvLn2 - kInvLn2 * (sigma2_z * std::norm(s.u) + 1.0) / s.v - std::log2(s.v);
        s.err_weight = noise == NoiseModel::tracked ? s.a * eps * eps : 0.0;
        return s;
    }

    inline SurrogateCoeffs build_surrogate(const ChannelSet &ch, const FullPrecoder &P_exp, double delta_k, int k,
                                           StreamClass tau, NoiseModel noise = NoiseModel::frozen)
    {
        return build_surrogate(ch.h_hat[k], ch.eps(k), ch.sigma2(k), P_exp.P, delta_k, k, tau, noise);
    }

    inline double eval_surrogate(const SurrogateCoeffs &s, const CMat &P)
    {
        const CRow sv = s.h.adjoint() * P;
        double quad = 0.0;
        for (Eigen::Index j = 0; j < sv.size(); ++j)
            quad += s.weights(j) * std::norm(sv(j));
        return -s.a * quad - s.err_weight * P.squaredNorm() + 2.0 * std::real(s.b * sv(s.linear_column)) + s.z;
    }

    inline double eval_surrogate(const SurrogateCoeffs &s, const FullPrecoder &P) { return eval_surrogate(s, P.P); }

    // Real gradient packed as d f / d Re(P) + i d f / d Im(P) (= 2 d f / d conj(P)).
    inline CMat surrogate_gradient(const SurrogateCoeffs &s, const CMat &P)
    {
        const CRow sv = s.h.adjoint() * P;
        CMat G(P.rows(), P.cols());
        for (Eigen::Index j = 0; j < P.cols(); ++j)
        {
            G.col(j) = (-2.0 * s.a * s.weights(j) * sv(j)) * s.h - 2.0 * s.err_weight * P.col(j);
            if (j == s.linear_column)
                G.col(j) += 2.0 * std::conj(s.b) * s.h;
        }
        return G;
    }

    // The rate the surrogate is tight against: noise frozen at the
    // expansion point, or the true P-dependent effective noise.
    inline double reference_rate(const SurrogateCoeffs &s, const CMat &P)
    {
        const double noise = s.noise == NoiseModel::frozen ? s.sigma2_expansion : effective_noise(P, s.eps, s.sigma2);
        const double delta_k = s.tau == StreamClass::priv ? s.weights(0) : 0.0;
        return stream_rate(s.h, P, delta_k, s.k, s.tau, noise);
    }

    // Max relative mismatch between the analytic surrogate gradient and a
    // central finite difference of the reference rate at the expansion point.
    // max_coords < 0 checks every real and imaginary coordinate.
    inline double check_gradient_consistency(const ChannelSet &ch, const FullPrecoder &P_exp, double delta_k, int k,
                                             StreamClass tau, double rel_step = 1e-6,
                                             NoiseModel noise = NoiseModel::frozen, int max_coords = -1)
    {
        const SurrogateCoeffs s = build_surrogate(ch, P_exp, delta_k, k, tau, noise);
        const CMat G = surrogate_gradient(s, P_exp.P);
        const double scale = std::max(P_exp.P.cwiseAbs().maxCoeff(), 1e-300);
        const double h = rel_step * scale;

        const Eigen::Index total = P_exp.P.size();
        const Eigen::Index limit = max_coords < 0 ? total : std::min<Eigen::Index>(total, max_coords);
        double worst = 0.0, fd_max = 0.0;
        CMat Pp = P_exp.P;
        for (Eigen::Index idx = 0; idx < limit; ++idx)
        {
            for (int part = 0; part < 2; ++part)
            {
                const cplx dir = part == 0 ? cplx(h, 0.0) : cplx(0.0, h);
                const cplx orig = Pp(idx);
                Pp(idx) = orig + dir;
                const double fp = reference_rate(s, Pp);
                Pp(idx) = orig - dir;
                const double fm = reference_rate(s, Pp);
                Pp(idx) = orig;
                const double fd = (fp - fm) / (2.0 * h);
                const double an = part == 0 ? G(idx).real() : G(idx).imag();
                worst = std::max(worst, std::abs(an - fd));
                fd_max = std::max(fd_max, std::abs(fd));
            }
        }
        // error relative to the largest gradient entry
        return fd_max > 0.0 ? worst / fd_max : worst;
    }

} // namespace nfrsma

#endif
