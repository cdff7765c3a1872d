// SPDX-License-Identifier: Apache-2.0
//
// isosynth - omni-equivalent channel synthesis from angle-resolved measurements
// Copyright (C) 2026 The isosynth authors
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

#ifndef ISOSYNTH_SPECFUN_HPP
#define ISOSYNTH_SPECFUN_HPP

#include <complex>
#include <stdexcept>

namespace isosynth
{

// Controls the modified Bessel evaluation.
struct BesselEvalPolicy
{
    double relative_tolerance = 1e-12;
    int max_terms = 2000;
};

// Raised when e^x * I_m(x) cannot be represented in double precision.
// Callers should switch to bessel_i_scaled().
class BesselOverflow : public std::overflow_error
{
public:
    using std::overflow_error::overflow_error;
};

// Modified Bessel function of the first kind, integer order.
//
// Algorithm:
//   x <= 20 : ascending power series sum_k (x/2)^(2k+m) / (k! (k+m)!), started
//             in log space so large orders neither overflow nor underflow early.
//   x >  20 : Miller's downward recurrence I_{k-1} = I_{k+1} + (2k/x) I_k,
//             normalized with e^x = I_0 + 2 sum_k I_k. The normalization yields
//             e^{-x} I_m(x) directly, so the scaled form never overflows.
//
// Throws std::invalid_argument for negative order or x, non-finite x, and
// BesselOverflow when the unscaled value exceeds the double range.
double bessel_i(int order, double x, const BesselEvalPolicy &policy = {});

// e^{-x} I_order(x). Finite for every finite x >= 0.
double bessel_i_scaled(int order, double x, const BesselEvalPolicy &policy = {});

// Sounding-signal autocorrelation (periodic Dirichlet kernel)
//   a_u(tau) = (1/N) e^{-j pi df tau} sin(pi N df tau) / sin(pi df tau).
// tau and delta_f must use reciprocal units (s and Hz, or ns and GHz).
// Integer delay bins tau = k / (N df) are resolved analytically: exact zeros
// when k is not a multiple of N, and the limit value (-1)^{pN} at the
// peaks tau = p / df.
std::complex<double> dirichlet_autocorr(double tau, int n_freq, double delta_f);

} // namespace isosynth

#endif
