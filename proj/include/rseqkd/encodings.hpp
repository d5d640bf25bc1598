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

#ifndef RSEQKD_ENCODINGS_HPP
#define RSEQKD_ENCODINGS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rseqkd {

enum class Topology { kCycle, kPath };

/// A k-element signal set, stored as strictly increasing indices in [0, d).
class IndexEncoding {
   public:
    IndexEncoding(int d, std::vector<int> indices);

    int d() const noexcept {
        return d_;
    }
    int k() const noexcept {
        return static_cast<int>(indices_.size());
    }
    std::span<const int> indices() const noexcept {
        return indices_;
    }
    bool contains(int index) const noexcept;
    /// Position of `index` within the signal set, or -1.
    int position_of(int index) const noexcept;

    bool operator==(const IndexEncoding &other) const = default;

   private:
    int d_;
    std::vector<int> indices_;
};

/// Directed neighbour counts: `w` edges stay inside the set, `b` leave it.
struct AdjacencyCounts {
    std::int64_t w = 0;
    std::int64_t b = 0;
};

/// Neighbours of `index` under the topology, with multiplicity (on C_2 both
/// directions reach the same vertex).
std::vector<int> neighbours(int d, int index, Topology topology);

IndexEncoding truncation_encoding(int d, int k);
IndexEncoding evenly_spaced_encoding(int d, int k);

/// Lowest-index blocks receive the extra element; lowest in-block indices are used.
IndexEncoding balanced_block_encoding(int d, int block_size, int k);

AdjacencyCounts modulo_counts(const IndexEncoding &encoding, Topology topology);

/// max(0, 2(2k - d)): fewest directed internal adjacencies a k-subset of C_d can have.
std::int64_t min_w_on_cycle(int d, int k);

/// Number of signal indices inside each block [m*s, (m+1)*s).
std::vector<int> block_occupancy(const IndexEncoding &encoding, int block_size);

/// k * E_b = sum of squared block occupancies (exact).
std::int64_t block_overlap_numerator(const IndexEncoding &encoding, int block_size);
double block_overlap_of(const IndexEncoding &encoding, int block_size);

/// k * E_min for balanced occupancy over d/s blocks (exact).
std::int64_t e_min_numerator(int d, int block_size, int k);
double e_min(int d, int block_size, int k);

inline constexpr std::uint64_t kEnumerationCap = 1'000'000;

/// C(n, r), saturating at UINT64_MAX.
std::uint64_t binomial(int n, int r);

/// Calls `visit` for every k-subset of [0, d) in lexicographic order. The
/// visitor returns false to stop early.
void for_each_k_subset(int d, int k, const std::function<bool(std::span<const int>)> &visit);

struct Objective {
    enum class Kind { kMinW, kMinBlockOverlap };
    Kind kind = Kind::kMinW;
    int block_size = 0;

    static Objective min_w() {
        return {Kind::kMinW, 0};
    }
    static Objective min_block_overlap(int block_size) {
        return {Kind::kMinBlockOverlap, block_size};
    }
};

struct OptimalEncoding {
    IndexEncoding encoding;
    /// W for kMinW; k * E_b for kMinBlockOverlap.
    std::int64_t value_numerator;
    double value;
};

/// Exhaustive search returning the lexicographically smallest minimiser.
/// Throws ErrorCode::kTooLarge when C(d, k) > kEnumerationCap.
OptimalEncoding brute_force_optimal(int d, int k, Objective objective, Topology topology = Topology::kCycle);

}  // namespace rseqkd

#endif
