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

#include "rseqkd/encodings.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "rseqkd/error.hpp"

namespace rseqkd {

namespace {

void check_sizes(int d, int k) {
    if (k < 2 || k > d) {
        throw Error(
            ErrorCode::kInvalidArgument,
            "need 2 <= k <= d, got d=" + std::to_string(d) + " k=" + std::to_string(k));
    }
}

void check_block_size(int d, int block_size) {
    if (block_size < 1 || d % block_size != 0) {
        throw Error(
            ErrorCode::kDimensionMismatch,
            "block size " + std::to_string(block_size) + " does not divide d=" + std::to_string(d));
    }
}

std::int64_t sum_of_squares(const std::vector<int> &values) {
    std::int64_t total = 0;
    for (int v : values) {
        total += static_cast<std::int64_t>(v) * v;
    }
    return total;
}

}  // namespace

IndexEncoding::IndexEncoding(int d, std::vector<int> indices) : d_(d), indices_(std::move(indices)) {
    if (indices_.size() < 2) {
        throw Error(ErrorCode::kInvalidArgument, "an encoding needs at least 2 indices");
    }
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (indices_[i] < 0 || indices_[i] >= d_) {
            throw Error(
                ErrorCode::kInvalidArgument,
                "index " + std::to_string(indices_[i]) + " outside [0, " + std::to_string(d_) + ")");
        }
        if (i > 0 && indices_[i] <= indices_[i - 1]) {
            throw Error(ErrorCode::kInvalidArgument, "encoding indices must be strictly increasing");
        }
    }
}

bool IndexEncoding::contains(int index) const noexcept {
    return std::binary_search(indices_.begin(), indices_.end(), index);
}

int IndexEncoding::position_of(int index) const noexcept {
    auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
    if (it == indices_.end() || *it != index) {
        return -1;
    }
    return static_cast<int>(it - indices_.begin());
}

std::vector<int> neighbours(int d, int index, Topology topology) {
    std::vector<int> result;
    if (topology == Topology::kCycle) {
        result.push_back((index + 1) % d);
        result.push_back((index + d - 1) % d);
    } else {
        if (index + 1 < d) {
            result.push_back(index + 1);
        }
        if (index > 0) {
            result.push_back(index - 1);
        }
    }
    return result;
}

IndexEncoding truncation_encoding(int d, int k) {
    check_sizes(d, k);
    std::vector<int> indices(k);
    std::iota(indices.begin(), indices.end(), 0);
    return {d, std::move(indices)};
}

IndexEncoding evenly_spaced_encoding(int d, int k) {
    check_sizes(d, k);
    std::vector<int> indices(k);
    for (int j = 0; j < k; ++j) {
        indices[j] = static_cast<int>(static_cast<std::int64_t>(j) * d / k);
    }
    return {d, std::move(indices)};
}

IndexEncoding balanced_block_encoding(int d, int block_size, int k) {
    check_sizes(d, k);
    check_block_size(d, block_size);
    int blocks = d / block_size;
    int q = k / blocks;
    int t = k % blocks;
    std::vector<int> indices;
    indices.reserve(k);
    for (int m = 0; m < blocks; ++m) {
        int take = q + (m < t ? 1 : 0);
        for (int r = 0; r < take; ++r) {
            indices.push_back(m * block_size + r);
        }
    }
    return {d, std::move(indices)};
}

AdjacencyCounts modulo_counts(const IndexEncoding &encoding, Topology topology) {
    AdjacencyCounts counts;
    for (int x : encoding.indices()) {
        for (int y : neighbours(encoding.d(), x, topology)) {
            if (encoding.contains(y)) {
                ++counts.w;
            } else {
                ++counts.b;
            }
        }
    }
    return counts;
}

std::int64_t min_w_on_cycle(int d, int k) {
    check_sizes(d, k);
    return std::max<std::int64_t>(0, 2 * (2 * static_cast<std::int64_t>(k) - d));
}

std::vector<int> block_occupancy(const IndexEncoding &encoding, int block_size) {
    check_block_size(encoding.d(), block_size);
    std::vector<int> occupancy(encoding.d() / block_size, 0);
    for (int x : encoding.indices()) {
        ++occupancy[x / block_size];
    }
    return occupancy;
}

std::int64_t block_overlap_numerator(const IndexEncoding &encoding, int block_size) {
    return sum_of_squares(block_occupancy(encoding, block_size));
}

double block_overlap_of(const IndexEncoding &encoding, int block_size) {
    return static_cast<double>(block_overlap_numerator(encoding, block_size)) / encoding.k();
}

std::int64_t e_min_numerator(int d, int block_size, int k) {
    check_sizes(d, k);
    check_block_size(d, block_size);
    std::int64_t blocks = d / block_size;
    std::int64_t q = k / blocks;
    std::int64_t t = k % blocks;
    return blocks * q * q + 2 * q * t + t;
}

double e_min(int d, int block_size, int k) {
    return static_cast<double>(e_min_numerator(d, block_size, k)) / k;
}

std::uint64_t binomial(int n, int r) {
    if (r < 0 || r > n) {
        return 0;
    }
    r = std::min(r, n - r);
    // result * (n - r + i) is divisible by i at every step; bail out before the product overflows.
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t result = 1;
    for (int i = 1; i <= r; ++i) {
        auto factor = static_cast<std::uint64_t>(n - r + i);
        std::uint64_t g = std::gcd(result, static_cast<std::uint64_t>(i));
        std::uint64_t reduced = result / g;
        std::uint64_t divisor = static_cast<std::uint64_t>(i) / g;
        factor /= divisor;
        if (reduced > kMax / factor) {
            return kMax;
        }
        result = reduced * factor;
    }
    return result;
}

void for_each_k_subset(int d, int k, const std::function<bool(std::span<const int>)> &visit) {
    if (k < 0 || k > d) {
        return;
    }
    std::vector<int> subset(k);
    std::iota(subset.begin(), subset.end(), 0);
    while (true) {
        if (!visit(subset)) {
            return;
        }
        int i = k - 1;
        while (i >= 0 && subset[i] == d - k + i) {
            --i;
        }
        if (i < 0) {
            return;
        }
        ++subset[i];
        for (int j = i + 1; j < k; ++j) {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

OptimalEncoding brute_force_optimal(int d, int k, Objective objective, Topology topology) {
    check_sizes(d, k);
    if (objective.kind == Objective::Kind::kMinBlockOverlap) {
        check_block_size(d, objective.block_size);
    }
    std::uint64_t count = binomial(d, k);
    if (count > kEnumerationCap) {
        throw Error(
            ErrorCode::kTooLarge,
            "instance too large: C(" + std::to_string(d) + "," + std::to_string(k) + ") = " +
                std::to_string(count) + " exceeds enumeration cap " + std::to_string(kEnumerationCap));
    }

    std::vector<int> best;
    std::int64_t best_value = std::numeric_limits<std::int64_t>::max();
    std::vector<int> occupancy;
    std::vector<char> member(d);
    for_each_k_subset(d, k, [&](std::span<const int> subset) {
        std::int64_t value = 0;
        if (objective.kind == Objective::Kind::kMinW) {
            std::fill(member.begin(), member.end(), 0);
            for (int x : subset) {
                member[x] = 1;
            }
            for (int x : subset) {
                for (int y : neighbours(d, x, topology)) {
                    value += member[y];
                }
            }
        } else {
            occupancy.assign(d / objective.block_size, 0);
            for (int x : subset) {
                ++occupancy[x / objective.block_size];
            }
            value = sum_of_squares(occupancy);
        }
        if (value < best_value) {
            best_value = value;
            best.assign(subset.begin(), subset.end());
        }
        return true;
    });

    double value = objective.kind == Objective::Kind::kMinW ? static_cast<double>(best_value)
                                                           : static_cast<double>(best_value) / k;
    return {IndexEncoding(d, std::move(best)), best_value, value};
}

}  // namespace rseqkd
