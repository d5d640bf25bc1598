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

#include "rseqkd/entropy_rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rseqkd/error.hpp"

namespace rseqkd {

namespace {

// 0 * log2(0) := 0
double xlog2x(double x) {
    return x > 0 ? x * std::log2(x) : 0.0;
}

void check_alphabet(int k) {
    if (k < 2) {
        throw Error(ErrorCode::kInvalidArgument, "alphabet size must be >= 2, got " + std::to_string(k));
    }
}

void check_alpha(double alpha) {
    if (!(alpha >= 0 && alpha <= 1)) {
        throw Error(ErrorCode::kDomain, "kept probability outside [0, 1]: " + std::to_string(alpha));
    }
}

}  // namespace

KaryParams::KaryParams(int d, int k) : d_(d), k_(k) {
    check_alphabet(k);
    if (k > d) {
        throw Error(
            ErrorCode::kInvalidArgument,
            "alphabet size k=" + std::to_string(k) + " exceeds dimension d=" + std::to_string(d));
    }
}

double binary_entropy(double q) {
    if (!(q >= -kDomainTolerance && q <= 1 + kDomainTolerance)) {
        throw Error(ErrorCode::kDomain, "probability outside [0, 1]: " + std::to_string(q));
    }
    q = std::clamp(q, 0.0, 1.0);
    return -xlog2x(q) - xlog2x(1 - q);
}

double kary_entropy(double q, int k) {
    check_alphabet(k);
    double q_max = static_cast<double>(k - 1) / k;
    if (!(q >= -kDomainTolerance && q <= q_max + kDomainTolerance)) {
        throw Error(
            ErrorCode::kDomain,
            "dit error " + std::to_string(q) + " outside [0, (k-1)/k] for k=" + std::to_string(k));
    }
    q = std::clamp(q, 0.0, q_max);
    if (q == 0) {
        return 0.0;
    }
    return -xlog2x(1 - q) - q * std::log2(q / (k - 1));
}

double solve_q_threshold(int k) {
    check_alphabet(k);
    const double target = 0.5 * std::log2(static_cast<double>(k));
    double lo = 1e-15;
    double hi = static_cast<double>(k - 1) / k - 1e-15;
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (kary_entropy(mid, k) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double rate_per_sifted_symbol(int k, double q_z, double q_x) {
    return std::log2(static_cast<double>(k)) - kary_entropy(q_z, k) - kary_entropy(q_x, k);
}

double rate_per_signal(double alpha, int k, double q_z, double q_x, double sifted_fraction) {
    check_alpha(alpha);
    if (!(sifted_fraction >= 0 && sifted_fraction <= 1)) {
        throw Error(ErrorCode::kDomain, "sifted fraction outside [0, 1]: " + std::to_string(sifted_fraction));
    }
    double per_symbol = rate_per_sifted_symbol(k, q_z, q_x);
    return std::max(0.0, sifted_fraction * alpha * per_symbol);
}

double rate_per_signal(double alpha, int k, double q) {
    return rate_per_signal(alpha, k, q, q, 0.5);
}

RateReport make_rate_report(int k, const KeptStats &stats) {
    RateReport report;
    report.kept = stats;
    report.q_threshold = solve_q_threshold(k);
    report.rate_per_sifted_symbol = rate_per_sifted_symbol(k, stats.q, stats.q);
    report.rate_per_signal = rate_per_signal(stats.alpha, k, stats.q);
    return report;
}

}  // namespace rseqkd
