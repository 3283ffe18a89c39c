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

#ifndef NFRSMA_TYPES_HPP
#define NFRSMA_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nfrsma
{
    using cplx = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using CRow = Eigen::RowVectorXcd;
    using RVec = Eigen::VectorXd;
    using RMat = Eigen::MatrixXd;

    inline constexpr double kSpeedOfLight = 2.99792458e8; // m/s
    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

    // Raised when a solver hits NaN/inf or corrupted coefficients.
    class numeric_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class SolveStatus
    {
        converged,
        max_iters,
        numeric_error
    };

    inline std::string to_string(SolveStatus s)
    {
        switch (s)
        {
        case SolveStatus::converged:
            return "converged";
        case SolveStatus::max_iters:
            return "max_iters";
        case SolveStatus::numeric_error:
            return "numeric_error";
        }
        return "unknown";
    }

    inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

} // namespace nfrsma

#endif
