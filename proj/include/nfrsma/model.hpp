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

#ifndef NFRSMA_MODEL_HPP
#define NFRSMA_MODEL_HPP

#include "types.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace nfrsma
{
    // How the error-noise term eps^2 ||P||^2 enters the quadratic surrogates.
    //  frozen:  evaluated once at the expansion point (literal coefficient formulas)
    //  tracked: kept as a concave -a eps^2 ||P||^2 term, which makes the surrogate
    //           a minorizer of the bound with P-dependent noise
    enum class NoiseModel
    {
        frozen,
        tracked
    };

    enum class AnalogInit
    {
        random_phase,
        zero_phase
    };

    struct SystemConfig
    {
        // Array and users
        int N = 128;
        int L = 8;
        int K = 4;
        double f_c = 30e9;                      // carrier [Hz]
        double lambda = kSpeedOfLight / 30e9;   // wavelength [m]
        double d = 0.5 * kSpeedOfLight / 30e9;  // element spacing [m]

        // Power and impairments, linear units
        double P_th = 0.1;                      // [W]
        std::vector<double> sigma2{dbm_to_watt(-84.0)}; // [W], one entry = shared
        double eps_factor = 0.005;              // eps_k^2 = eps_factor * ||h_k||^2
        std::vector<double> delta{0.05};        // SIC residual, one entry = shared

        // User placement
        double r_min = 10.0, r_max = 20.0;      // [m]
        double theta_min = -kPi / 3.0, theta_max = kPi / 3.0;
        bool enforce_fresnel = false;

        // Penalty continuation and loop control
        double rho0 = 100.0;
        double alpha = 0.5;
        bool use_penalty = true;                // false: rho = inf, P-block unpenalized
        double tol_sca = 1e-4;                  // Algorithm-1 relative increment
        double tol_inner = 1e-4;                // BCD inner loop relative increment
        double tol_penalty = 1e-6;              // ||P - FW||^2 <= tol_penalty * P_th
        int max_sca = 30;
        int max_inner = 50;
        int max_outer = 40;
        int max_ipm = 200;

        NoiseModel noise_model = NoiseModel::frozen;
        AnalogInit analog_init = AnalogInit::random_phase;
        bool swap_accept_ties = false;
        int max_swaps = 10000;
        bool sdma_candidate = true;             // RSMA schemes also try their w_0 = 0 special case

        std::uint64_t seed = 1;

        int M() const { return N / L; }
        double sigma2_of(int k) const { return sigma2.size() == 1 ? sigma2[0] : sigma2.at(k); }
        double delta_of(int k) const { return delta.size() == 1 ? delta[0] : delta.at(k); }
        RVec delta_vector() const
        {
            RVec out(K);
            for (int k = 0; k < K; ++k)
                out(k) = delta_of(k);
            return out;
        }
        double aperture() const { return (N - 1) * d; }
        double rayleigh_distance() const { return 2.0 * aperture() * aperture() / lambda; }
        double tol_feas() const { return 1e-7 * std::max(1.0, P_th); }

        // Sets f_c and keeps lambda consistent; d follows as half wavelength.
        void set_carrier(double f)
        {
            f_c = f;
            lambda = kSpeedOfLight / f;
            d = 0.5 * lambda;
        }

        void validate() const
        {
            auto fail = [](const std::string &m)
            { throw std::invalid_argument("SystemConfig: " + m); };
            if (N <= 0 || L <= 0 || K <= 0)
                fail("N, L and K must be positive");
            if (N % L != 0)
                fail("L must divide N");
            if (!(f_c > 0.0) || !(lambda > 0.0) || !(d > 0.0))
                fail("f_c, lambda and d must be positive");
            if (std::abs(lambda * f_c - kSpeedOfLight) > 1e-6 * kSpeedOfLight)
                fail("lambda * f_c must equal the speed of light");
            if (!(P_th > 0.0))
                fail("P_th must be positive");
            if (sigma2.empty() || (sigma2.size() != 1 && static_cast<int>(sigma2.size()) != K))
                fail("sigma2 needs 1 or K entries");
            for (double s : sigma2)
                if (!(s > 0.0))
                    fail("sigma2 must be positive");
            if (delta.empty() || (delta.size() != 1 && static_cast<int>(delta.size()) != K))
                fail("delta needs 1 or K entries");
            for (double v : delta)
                if (!(v >= 0.0 && v <= 1.0))
                    fail("delta must lie in [0,1]");
            if (!(eps_factor >= 0.0))
                fail("eps_factor must be nonnegative");
            if (!(alpha > 0.0 && alpha < 1.0))
                fail("alpha must lie in (0,1)");
            if (!(rho0 > 0.0))
                fail("rho0 must be positive");
            if (!(tol_sca > 0.0 && tol_inner > 0.0 && tol_penalty > 0.0))
                fail("tolerances must be positive");
            if (max_sca <= 0 || max_inner <= 0 || max_outer <= 0 || max_ipm <= 0)
                fail("iteration caps must be positive");
            if (!(r_min > 0.0 && r_max >= r_min))
                fail("need 0 < r_min <= r_max");
            if (!(theta_max >= theta_min))
                fail("need theta_min <= theta_max");
        }
    };

    // splitmix64 finalizer; used to derive independent per-trial seeds.
    inline std::uint64_t mix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
    {
        return mix64(mix64(mix64(seed) ^ a) ^ (b + 0x632BE59BD9B4E019ULL));
    }

    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine_); }
        double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
        cplx complex_normal() // CN(0,1)
        {
            const double re = normal(), im = normal();
            return {re * std::sqrt(0.5), im * std::sqrt(0.5)};
        }
        double phase() { return uniform(0.0, 2.0 * kPi); }
        std::mt19937_64 &engine() { return engine_; }

    private:
        std::mt19937_64 engine_;
    };

    struct UserGeometry
    {
        RVec r;     // [m]
        RVec theta; // [rad]

        int size() const { return static_cast<int>(r.size()); }

        bool in_fresnel(const SystemConfig &cfg, int k) const
        {
            const double D = cfg.aperture();
            return r(k) >= 1.2 * D && r(k) <= cfg.rayleigh_distance();
        }
    };

    struct ChannelSet
    {
        std::vector<CVec> h_hat;    // estimated channels beta_k a(r_k, theta_k)
        std::vector<CVec> response; // a(r_k, theta_k), unit-modulus entries
        std::vector<cplx> beta;
        RVec eps;                   // error-norm bounds
        RVec sigma2;                // per-user noise power [W]
        UserGeometry geometry;

        int K() const { return static_cast<int>(h_hat.size()); }
        int N() const { return h_hat.empty() ? 0 : static_cast<int>(h_hat.front().size()); }
    };

    // a(r, theta): second-order (Fresnel) phase profile on a centred ULA.
    inline CVec near_field_response(const SystemConfig &cfg, double r, double theta)
    {
        if (!(r > 0.0))
            throw std::domain_error("near_field_response: distance must be positive");
        CVec a(cfg.N);
        const double k0 = 2.0 * kPi / cfg.lambda;
        const double s = std::sin(theta), c2 = std::cos(theta) * std::cos(theta);
        for (int n = 0; n < cfg.N; ++n)
        {
            const double nd = 0.5 * (2 * (n + 1) - cfg.N - 1) * cfg.d;
            const double delta = nd * s - nd * nd * c2 / (2.0 * r);
            a(n) = std::polar(1.0, k0 * delta);
        }
        return a;
    }

    inline CVec far_field_response(const SystemConfig &cfg, double theta)
    {
        CVec a(cfg.N);
        const double k0 = 2.0 * kPi / cfg.lambda;
        const double s = std::sin(theta);
        for (int n = 0; n < cfg.N; ++n)
        {
            const double nd = 0.5 * (2 * (n + 1) - cfg.N - 1) * cfg.d;
            a(n) = std::polar(1.0, k0 * nd * s);
        }
        return a;
    }

    // Free-space gain of the central link including the carrier phase.
    inline cplx channel_gain(const SystemConfig &cfg, double r)
    {
        if (!(r > 0.0))
            throw std::domain_error("channel_gain: distance must be positive");
        const double mag = kSpeedOfLight / (4.0 * kPi * cfg.f_c * r);
        const double ph = std::fmod(-2.0 * kPi * r / cfg.lambda, 2.0 * kPi);
        return std::polar(mag, ph);
    }

    // Assemble a channel set from explicit user positions.
    inline ChannelSet make_channels(const SystemConfig &cfg, const RVec &r, const RVec &theta)
    {
        ChannelSet ch;
        const int K = static_cast<int>(r.size());
        if (K == 0)
            throw std::domain_error("make_channels: need at least one user");
        ch.geometry.r = r;
        ch.geometry.theta = theta;
        ch.eps.resize(K);
        ch.sigma2.resize(K);
        const double eps_scale = std::sqrt(cfg.eps_factor);
        for (int k = 0; k < K; ++k)
        {
            CVec a = near_field_response(cfg, r(k), theta(k));
            const cplx b = channel_gain(cfg, r(k));
            ch.h_hat.push_back(b * a);
            ch.response.push_back(std::move(a));
            ch.beta.push_back(b);
            ch.eps(k) = eps_scale * ch.h_hat.back().norm();
            ch.sigma2(k) = cfg.sigma2_of(k);
        }
        return ch;
    }

    // Users uniform in [r_min, r_max] x [theta_min, theta_max].
    inline ChannelSet sample_channels(const SystemConfig &cfg, Rng &rng)
    {
        if (cfg.K <= 0)
            throw std::domain_error("sample_channels: need at least one user");
        cfg.validate();
        double lo = cfg.r_min, hi = cfg.r_max;
        if (cfg.enforce_fresnel)
        {
            lo = std::max(lo, 1.2 * cfg.aperture());
            hi = std::min(hi, cfg.rayleigh_distance());
            if (!(hi >= lo))
                throw std::domain_error("sample_channels: distance range misses the Fresnel region");
        }
        RVec r(cfg.K), theta(cfg.K);
        for (int k = 0; k < cfg.K; ++k)
        {
            r(k) = rng.uniform(lo, hi);
            theta(k) = rng.uniform(cfg.theta_min, cfg.theta_max);
        }
        return make_channels(cfg, r, theta);
    }

    inline ChannelSet sample_channels(const SystemConfig &cfg, std::uint64_t trial)
    {
        Rng rng(derive_seed(cfg.seed, trial, 0xC4A77E1ULL));
        return sample_channels(cfg, rng);
    }

    // Diagnostic only: an error vector uniform in the ball ||e|| <= eps (C^N ~ R^{2N}).
    inline CVec sample_error_in_ball(int N, double eps, Rng &rng)
    {
        CVec e(N);
        for (int n = 0; n < N; ++n)
            e(n) = rng.complex_normal();
        const double radius = eps * std::pow(rng.uniform(0.0, 1.0), 1.0 / (2.0 * N));
        const double nrm = e.norm();
        return nrm > 0.0 ? CVec(e * (radius / nrm)) : e;
    }

} // namespace nfrsma

#endif
