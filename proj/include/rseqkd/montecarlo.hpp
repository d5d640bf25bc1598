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

#ifndef RSEQKD_MONTECARLO_HPP
#define RSEQKD_MONTECARLO_HPP

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "rseqkd/channels.hpp"

namespace rseqkd {

struct SimConfig {
    ChannelSpec spec;
    IndexEncoding encoding;
    std::uint64_t n_rounds = 0;
    std::uint64_t seed = 0;
    /// Probability that either party picks Z.
    double basis_bias = 0.5;
};

/// Rounds are processed in fixed shards; shard i draws from
/// mt19937_64 seeded by seed_seq{seed_lo, seed_hi, i_lo, i_hi}. Uniform
/// doubles take the top 53 bits of one draw. Tallies are summed in shard
/// order, so results do not depend on the worker count.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64/seed_seq(seed,shard)/u53/shard=65536";
inline constexpr std::uint64_t kShardRounds = 65536;

struct BasisTally {
    std::uint64_t matched = 0;
    std::uint64_t kept = 0;
    std::uint64_t correct = 0;
    /// k x (k+1) row-major counts of (sent, outcome); column k is inconclusive.
    std::vector<std::uint64_t> pair_counts;

    bool operator==(const BasisTally &other) const = default;
};

struct Tally {
    int k = 0;
    std::uint64_t n_rounds = 0;
    double basis_bias = 0.5;
    std::array<BasisTally, 2> bases;  // indexed by Basis

    std::uint64_t matched() const noexcept {
        return bases[0].matched + bases[1].matched;
    }
    std::uint64_t kept() const noexcept {
        return bases[0].kept + bases[1].kept;
    }
    std::uint64_t correct() const noexcept {
        return bases[0].correct + bases[1].correct;
    }
    const BasisTally &basis(Basis b) const noexcept {
        return bases[static_cast<int>(b)];
    }

    Tally &operator+=(const Tally &other);
    bool operator==(const Tally &other) const = default;
};

Tally make_empty_tally(int k, double basis_bias);

/// Worker count: RSE_QKD_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned default_thread_count();

/// Runs the protocol round by round. `threads` == 0 uses default_thread_count().
Tally simulate(const SimConfig &config, unsigned threads = 0);

struct Estimate {
    KeptStats stats;
    double alpha_se = 0.0;
    double q_se = 0.0;
    bool insufficient_data = false;
};

/// alpha = kept/matched, Q = 1 - correct/kept, with binomial standard errors.
/// Throws ErrorCode::kInsufficientData when no round was basis-matched.
Estimate estimate_stats(const Tally &tally);

/// Fraction of rounds entering the sifted key: 1/2 for unbiased basis choice,
/// the observed matched fraction otherwise.
double sifted_fraction(const Tally &tally);

double empirical_rate(const Tally &tally);
/// Delta-method standard error of empirical_rate.
double empirical_rate_se(const Tally &tally);

}  // namespace rseqkd

#endif
