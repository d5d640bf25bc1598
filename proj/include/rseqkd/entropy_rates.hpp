// Copyright 2026 The rse-qkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSEQKD_ENTROPY_RATES_HPP
#define RSEQKD_ENTROPY_RATES_HPP

namespace rseqkd {

/// Alphabet size `k` embedded in a Hilbert space of dimension `d`, 2 <= k <= d.
class KaryParams {
   public:
    KaryParams(int d, int k);

    int d() const noexcept {
        return d_;
    }
    int k() const noexcept {
        return k_;
    }

   private:
    int d_;
    int k_;
};

/// Kept-event probability and conditional dit error among kept events.
struct KeptStats {
    double alpha = 1.0;
    double q = 0.0;
    /// Set when no conclusive outcome has positive probability (alpha == 0).
    bool no_kept_events = false;
};

struct RateReport {
    double rate_per_sifted_symbol = 0.0;  // unclamped
    double rate_per_signal = 0.0;         // clamped at 0
    double q_threshold = 0.0;
    KeptStats kept;
};

/// Tolerance used when checking that an error probability lies in [0, (k-1)/k].
inline constexpr double kDomainTolerance = 1e-12;

double binary_entropy(double q);

/// Shannon entropy of the k-ary symmetric channel,
/// -(1-Q)log2(1-Q) - Q log2(Q/(k-1)). Throws ErrorCode::kDomain when Q is
/// outside [0, (k-1)/k] by more than kDomainTolerance.
double kary_entropy(double q, int k);

/// Unique Q in (0, (k-1)/k) with kary_entropy(Q, k) = log2(k)/2, by bisection.
double solve_q_threshold(int k);

/// log2 k - h_k(Q_Z) - h_k(Q_X). May be negative.
double rate_per_sifted_symbol(int k, double q_z, double q_x);

/// max(0, sifted_fraction * alpha * (log2 k - h_k(Q_Z) - h_k(Q_X))).
double rate_per_signal(double alpha, int k, double q_z, double q_x, double sifted_fraction);

/// Symmetric-error, uniform-basis form: max(0, alpha/2 * (log2 k - 2 h_k(Q))).
double rate_per_signal(double alpha, int k, double q);

RateReport make_rate_report(int k, const KeptStats &stats);

}  // namespace rseqkd

#endif
