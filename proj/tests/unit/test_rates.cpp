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

#include <catch_amalgamated.hpp>

#include <nfrsma/rates.hpp>
#include <support/oracles.hpp>

using namespace nfrsma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    CMat random_matrix(int r, int c, Rng &rng, double scale = 1.0)
    {
        CMat A(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                A(i, j) = scale * rng.complex_normal();
        return A;
    }

    // Channel set with hand-picked vectors; eps and sigma2 shared.
    ChannelSet manual(const std::vector<CVec> &h, double eps, double sigma2)
    {
        ChannelSet ch;
        ch.h_hat = h;
        ch.eps = RVec::Constant(static_cast<int>(h.size()), eps);
        ch.sigma2 = RVec::Constant(static_cast<int>(h.size()), sigma2);
        return ch;
    }

    ChannelSet random_set(int N, int K, Rng &rng)
    {
        std::vector<CVec> h;
        for (int k = 0; k < K; ++k)
            h.push_back(random_matrix(N, 1, rng));
        ChannelSet ch = manual(h, 0.0, 0.5);
        for (int k = 0; k < K; ++k)
            ch.eps(k) = 0.1 * h[k].norm();
        return ch;
    }
}

TEST_CASE("effective noise", "[rates]")
{
    CMat P = CMat::Zero(3, 2);
    CHECK(effective_noise(P, 0.7, 1.5) == 1.5);
    P(0, 0) = 1.0;
    P(1, 1) = 1.0;
    CHECK(effective_noise(P, 0.0, 1.5) == 1.5);
    CHECK_THAT(effective_noise(P, std::sqrt(0.5), 1.0), WithinAbs(2.0, 1e-15));
}

TEST_CASE("rate bounds on unit plug-in values", "[rates]")
{
    // h = e_1, p_0 = e_1, p_1 = e_1: h^H p_0 = h^H p_1 = 1, noise 1
    CVec h = CVec::Zero(2);
    h(0) = 1.0;
    CMat P = CMat::Zero(2, 2);
    P(0, 0) = 1.0;
    P(0, 1) = 1.0;
    const ChannelSet ch = manual({h}, 0.0, 1.0);
    const FullPrecoder fp{P};
    CHECK_THAT(common_rate_lb(ch, fp, 0), WithinAbs(std::log2(1.5), 1e-12));

    CMat P0 = P;
    P0.col(0).setZero();
    CHECK(common_rate_lb(ch, FullPrecoder{P0}, 0) == 0.0);
    // perfect SIC, unit SNR
    CHECK_THAT(private_rate_lb(ch, FullPrecoder{P0}, 0.0, 0), WithinAbs(1.0, 1e-12));

    // Delta = 0.05, h^H p_0 = 2, h^H p_1 = 1
    CMat P2 = P;
    P2(0, 0) = 2.0;
    CHECK_THAT(private_rate_lb(ch, FullPrecoder{P2}, 0.05, 0), WithinAbs(0.87446911791, 1e-9));
    // Delta = 1 treats the common stream as ordinary interference
    CHECK_THAT(private_rate_lb(ch, FullPrecoder{P2}, 1.0, 0), WithinAbs(std::log2(1.0 + 1.0 / 5.0), 1e-12));
}

TEST_CASE("rate bounds match an independent evaluation", "[rates]")
{
    Rng rng(5);
    for (int t = 0; t < 50; ++t)
    {
        const ChannelSet ch = random_set(4, 2, rng);
        const CMat P = random_matrix(4, 3, rng, 0.3);
        for (int k = 0; k < 2; ++k)
        {
            CHECK_THAT(common_rate_lb(ch, FullPrecoder{P}, k),
                       WithinAbs(oracle::common_rate(ch.h_hat[k], P, ch.eps(k), ch.sigma2(k)), 1e-12));
            CHECK_THAT(private_rate_lb(ch, FullPrecoder{P}, 0.3, k),
                       WithinAbs(oracle::private_rate(ch.h_hat[k], P, ch.eps(k), ch.sigma2(k), 0.3, k), 1e-12));
        }
    }
}

TEST_CASE("rates are monotone in Delta and eps", "[rates]")
{
    Rng rng(6);
    for (int t = 0; t < 30; ++t)
    {
        ChannelSet ch = random_set(6, 3, rng);
        const FullPrecoder P{random_matrix(6, 4, rng, 0.5)};
        double prev = std::numeric_limits<double>::infinity();
        for (double d : {0.0, 0.1, 0.5, 1.0})
        {
            const double r = private_rate_lb(ch, P, d, 1);
            CHECK(r <= prev + 1e-15);
            prev = r;
        }
        const double c0 = common_rate_lb(ch, P, 0), p0 = private_rate_lb(ch, P, 0.1, 0);
        ch.eps(0) *= 2.0;
        CHECK(common_rate_lb(ch, P, 0) < c0);
        CHECK(private_rate_lb(ch, P, 0.1, 0) < p0);
    }
}

TEST_CASE("larger noise strictly lowers both rates", "[rates]")
{
    Rng rng(8);
    const ChannelSet ch = random_set(4, 2, rng);
    const CMat P = random_matrix(4, 3, rng);
    for (int k = 0; k < 2; ++k)
    {
        CHECK(common_rate_with_noise(ch.h_hat[k], P, 2.0) < common_rate_with_noise(ch.h_hat[k], P, 1.0));
        CHECK(private_rate_with_noise(ch.h_hat[k], P, 0.2, k + 1, 2.0) <
              private_rate_with_noise(ch.h_hat[k], P, 0.2, k + 1, 1.0));
    }
}

TEST_CASE("max-min objective", "[rates]")
{
    Rng rng(9);
    const ChannelSet one = random_set(4, 1, rng);
    const FullPrecoder P1{random_matrix(4, 2, rng)};
    RateAllocation a;
    a.c = RVec::Zero(1);
    const RVec d1 = RVec::Constant(1, 0.2);
    CHECK_THAT(maxmin_objective(one, P1, a, d1).value, WithinAbs(private_rate_lb(one, P1, 0.2, 0), 1e-15));

    // Mirrored two-user geometry with mirrored precoders
    CVec h0(2), h1(2);
    h0 << cplx(1.0, 0.5), cplx(0.2, -0.3);
    h1 << h0(1), h0(0);
    CMat P(2, 3);
    P << cplx(0.3, 0.1), cplx(0.8, 0.0), cplx(0.1, 0.2), cplx(0.3, 0.1), cplx(0.1, 0.2), cplx(0.8, 0.0);
    const ChannelSet two = manual({h0, h1}, 0.05, 0.1);
    RateAllocation sym;
    sym.c = RVec::Constant(2, 0.1);
    const auto ev = maxmin_objective(two, FullPrecoder{P}, sym, RVec::Constant(2, 0.05));
    CHECK_THAT(ev.totals(0), WithinAbs(ev.totals(1), 1e-9));

    // random: min of independently computed totals, infeasible split flagged
    for (int t = 0; t < 20; ++t)
    {
        const ChannelSet ch = random_set(5, 3, rng);
        const CMat Q = random_matrix(5, 4, rng, 0.4);
        RateAllocation al;
        al.c = RVec::Zero(3);
        double mc = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k)
            mc = std::min(mc, oracle::common_rate(ch.h_hat[k], Q, ch.eps(k), ch.sigma2(k)));
        al.c << 0.2 * mc, 0.3 * mc, 0.4 * mc;
        const RVec delta = RVec::Constant(3, 0.1);
        const auto e = maxmin_objective(ch, FullPrecoder{Q}, al, delta);
        double expect = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k)
            expect = std::min(expect, al.c(k) + oracle::private_rate(ch.h_hat[k], Q, ch.eps(k), ch.sigma2(k), 0.1, k));
        CHECK_THAT(e.value, WithinAbs(expect, 1e-12));
        CHECK(e.feasible);
        al.c(0) += mc;
        CHECK_FALSE(maxmin_objective(ch, FullPrecoder{Q}, al, delta).feasible);
        al.c(0) = -0.1;
        CHECK_FALSE(maxmin_objective(ch, FullPrecoder{Q}, al, delta).feasible);
    }
}

TEST_CASE("optimal common split water-fills the private rates", "[rates]")
{
    std::vector<UserRates> r{{1.0, 0.5}, {1.2, 2.0}, {0.9, 1.0}};
    const RateAllocation a = optimal_common_split(r);
    // budget 0.9: raise 0.5 to 1.0 (cost 0.5), then split 0.4 over two users
    CHECK_THAT(a.R_hat, WithinAbs(1.2, 1e-12));
    CHECK_THAT(a.c.sum(), WithinAbs(0.9, 1e-12));
    CHECK(a.c(1) == 0.0);
    for (int k = 0; k < 3; ++k)
        CHECK(a.c(k) + r[k].priv >= a.R_hat - 1e-12);
    CHECK(optimal_common_split(r, false).R_hat == 0.5);
}

TEST_CASE("hybrid rates equal rates at the materialized precoder", "[rates]")
{
    Rng rng(12);
    for (int t = 0; t < 1000; ++t)
    {
        const int L = 1 + t % 4, M = 1 + (t / 4) % 3, K = 1 + t % 3;
        ChannelSet ch = random_set(L * M, K, rng);
        HybridBeamfocuser hb;
        for (int l = 0; l < L; ++l)
        {
            CVec f(M);
            for (int m = 0; m < M; ++m)
                f(m) = std::polar(1.0, rng.phase());
            hb.F_blocks.push_back(f);
        }
        hb.W = random_matrix(L, K + 1, rng, 0.3);
        const CMat P = oracle::blkdiag(hb.F_blocks) * hb.W;
        CHECK((hb.precoder() - P).cwiseAbs().maxCoeff() < 1e-12);
        CHECK_THAT(hb.power(), WithinRel(oracle::frob2(P), 1e-12));
        for (int k = 0; k < K; ++k)
        {
            const UserRates hr = hybrid_rates(ch, hb, 0.05, k);
            CHECK_THAT(hr.common, WithinAbs(common_rate_lb(ch, FullPrecoder{P}, k), 1e-10));
            CHECK_THAT(hr.priv, WithinAbs(private_rate_lb(ch, FullPrecoder{P}, 0.05, k), 1e-10));
        }
    }
}

TEST_CASE("identity analog stage reduces to the fully digital rate", "[rates]")
{
    Rng rng(13);
    const ChannelSet ch = random_set(4, 2, rng);
    HybridBeamfocuser hb;
    hb.F_blocks.assign(4, CVec::Ones(1));
    hb.W = random_matrix(4, 3, rng);
    CHECK((hb.analog_matrix() - CMat::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    for (int k = 0; k < 2; ++k)
        CHECK_THAT(hybrid_rates(ch, hb, 0.1, k).priv, WithinAbs(private_rate_lb(ch, FullPrecoder{hb.W}, 0.1, k), 1e-12));
}

TEST_CASE("analog matrix structure", "[rates]")
{
    HybridBeamfocuser hb;
    hb.F_blocks.assign(3, CVec::Constant(4, std::polar(1.0, 0.3)));
    hb.W = CMat::Zero(3, 2);
    const CMat F = hb.analog_matrix();
    CHECK(F.rows() == 12);
    CHECK(F.cols() == 3);
    for (int l = 0; l < 3; ++l)
        CHECK((F.col(l).array() != cplx(0.0, 0.0)).count() == 4);
    CHECK(hb.max_modulus_error() < 1e-15);
}
