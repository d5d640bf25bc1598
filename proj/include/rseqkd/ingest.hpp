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

#ifndef RSEQKD_INGEST_HPP
#define RSEQKD_INGEST_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rseqkd/channels.hpp"

namespace rseqkd {

/// Coincidence counts: counts[i * d + j] for sent index i, detected index j.
struct CountMatrix {
    int d = 0;
    Basis basis = Basis::kZ;
    std::vector<std::int64_t> counts;

    std::int64_t at(int sent, int detected) const {
        return counts[static_cast<std::size_t>(sent) * d + detected];
    }
    std::int64_t row_total(int sent) const;
    bool operator==(const CountMatrix &) const = default;
};

struct CountPair {
    CountMatrix z;
    CountMatrix x;

    int d() const noexcept {
        return z.d;
    }
};

/// Parses one or more blocks of the form
///   d=<int>,basis=<Z|X>
///   <d lines of d comma-separated nonnegative integers>
/// Errors carry 1-based line/column locations.
std::vector<CountMatrix> parse_count_matrices(std::istream &in, const std::string &source = "<input>");

/// Collects exactly one Z and one X matrix of equal dimension from the given blocks.
CountPair pair_counts(std::vector<CountMatrix> matrices);

CountPair load_counts(std::istream &in, const std::string &source = "<input>");
CountPair load_count_files(const std::vector<std::string> &paths);

void write_counts(std::ostream &out, const CountMatrix &matrix);

/// Rounded expected counts for `exposure` sent copies of every index under the
/// channel, using the confusion model of the full alphabet.
CountMatrix expected_counts(const ChannelSpec &spec, int d, Basis basis, double exposure);

/// Multinomially sampled counts with `per_row` trials per sent index.
CountMatrix sampled_counts(const ChannelSpec &spec, int d, Basis basis, std::uint64_t per_row, std::uint64_t seed);

/// Row-normalised kept probability and dit error of the embedded subset.
/// Throws ErrorCode::kInsufficientData when a sent row in the subset is empty.
KeptStats subset_stats(const CountMatrix &counts, const IndexEncoding &encoding);

struct FitResult {
    double eps1 = 0.0;
    double eps2 = 0.0;
    /// Sum of squared deviations between row-normalised counts and the model.
    double residual = 0.0;
    /// Residual expected from multinomial shot noise alone at the fitted point.
    double shot_noise_residual = 0.0;
    bool poor_fit = false;
};

inline constexpr double kFitGridStep = 0.01;
inline constexpr double kFitRefineStep = 1e-4;

/// Joint two-basis least-squares fit of the three-level block population model.
FitResult fit_block_params(const CountPair &counts, int block_size);

enum class SubsetRule { kBalanced, kBruteForce };

struct SweepEntry {
    int k = 0;
    KeptStats z;
    KeptStats x;
    double alpha = 0.0;  // mean over bases
    double q = 0.0;      // mean over bases
    double rate = 0.0;   // per signal
    std::vector<int> subset;
    bool is_argmax = false;
    bool fell_back = false;
};

struct KSweep {
    std::vector<SweepEntry> rows;  // ascending k
    std::size_t argmax = 0;
    std::vector<std::string> warnings;
};

/// For each k picks a subset by `rule`, estimates (alpha, Q) in both bases and
/// the per-signal rate; flags the rate-maximising k (smallest k on ties).
/// kBruteForce maximises the measured rate over every k-subset and falls back
/// to kBalanced above kEnumerationCap.
KSweep sweep_k(const CountPair &counts, int block_size, int k_min, int k_max, SubsetRule rule);

}  // namespace rseqkd

#endif
