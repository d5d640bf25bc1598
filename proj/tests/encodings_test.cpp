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

#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rseqkd/error.hpp"

using namespace rseqkd;

namespace {

std::vector<int> as_vector(const IndexEncoding &e) {
    return {e.indices().begin(), e.indices().end()};
}

}  // namespace

TEST(IndexEncoding, Validation) {
    EXPECT_THROW(IndexEncoding(5, {1}), Error);
    EXPECT_THROW(IndexEncoding(5, {1, 1}), Error);
    EXPECT_THROW(IndexEncoding(5, {2, 1}), Error);
    EXPECT_THROW(IndexEncoding(5, {0, 5}), Error);
    EXPECT_THROW(IndexEncoding(5, {-1, 2}), Error);
    IndexEncoding e(6, {0, 2, 5});
    EXPECT_EQ(e.k(), 3);
    EXPECT_TRUE(e.contains(2));
    EXPECT_FALSE(e.contains(3));
    EXPECT_EQ(e.position_of(5), 2);
    EXPECT_EQ(e.position_of(4), -1);
}

TEST(Constructions, TruncationAndEvenlySpaced) {
    EXPECT_EQ(as_vector(truncation_encoding(7, 3)), (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(as_vector(evenly_spaced_encoding(25, 5)), (std::vector<int>{0, 5, 10, 15, 20}));
    EXPECT_EQ(as_vector(evenly_spaced_encoding(25, 12)), (std::vector<int>{0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22}));
    EXPECT_EQ(as_vector(evenly_spaced_encoding(7, 7)), (std::vector<int>{0, 1, 2, 3, 4, 5, 6}));
}

TEST(Constructions, BalancedBlock) {
    EXPECT_EQ(as_vector(balanced_block_encoding(9, 3, 3)), (std::vector<int>{0, 3, 6}));
    EXPECT_EQ(as_vector(balanced_block_encoding(9, 3, 5)), (std::vector<int>{0, 1, 3, 4, 6}));
    EXPECT_EQ(as_vector(balanced_block_encoding(8, 2, 3)), (std::vector<int>{0, 2, 4}));
    EXPECT_THROW(balanced_block_encoding(9, 2, 3), Error);
    for (int d : {4, 6, 8, 9, 12}) {
        for (int s = 1; s <= d; ++s) {
            if (d % s) {
                continue;
            }
            for (int k = 2; k <= d; ++k) {
                IndexEncoding e = balanced_block_encoding(d, s, k);
                EXPECT_EQ(block_overlap_numerator(e, s), e_min_numerator(d, s, k)) << d << " " << s << " " << k;
            }
        }
    }
}

TEST(ModuloCounts, MatchesHoppingMatrix) {
    for (int d = 2; d <= 10; ++d) {
        for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
            auto subset = oracle::bits_to_subset(mask);
            if (subset.size() < 2) {
                continue;
            }
            IndexEncoding e(d, subset);
            for (bool cycle : {true, false}) {
                AdjacencyCounts c = modulo_counts(e, cycle ? Topology::kCycle : Topology::kPath);
                EXPECT_EQ(c.w, oracle::internal_hops(d, subset, cycle));
                if (cycle) {
                    EXPECT_EQ(c.w + c.b, 2 * e.k());
                }
            }
        }
    }
}

TEST(ModuloCounts, PathEndpointsHaveOneNeighbour) {
    EXPECT_EQ(neighbours(5, 0, Topology::kPath), (std::vector<int>{1}));
    EXPECT_EQ(neighbours(5, 4, Topology::kPath), (std::vector<int>{3}));
    EXPECT_EQ(neighbours(2, 0, Topology::kCycle).size(), 2u);
    AdjacencyCounts c = modulo_counts(IndexEncoding(5, {0, 1}), Topology::kPath);
    EXPECT_EQ(c.w, 2);
    EXPECT_EQ(c.b, 1);
}

TEST(MinW, ClosedFormAgainstEnumeration) {
    for (int d = 2; d <= 12; ++d) {
        for (int k = 2; k <= d; ++k) {
            EXPECT_EQ(min_w_on_cycle(d, k), oracle::min_internal_hops(d, k)) << "d=" << d << " k=" << k;
            EXPECT_EQ(modulo_counts(evenly_spaced_encoding(d, k), Topology::kCycle).w, min_w_on_cycle(d, k));
        }
    }
}

TEST(BlockOverlap, Values) {
    IndexEncoding e(9, {0, 1, 2, 3});
    EXPECT_EQ(block_occupancy(e, 3), (std::vector<int>{3, 1, 0}));
    EXPECT_DOUBLE_EQ(block_overlap_of(e, 3), 10.0 / 4.0);
    EXPECT_DOUBLE_EQ(e_min(25, 5, 5), 1.0);
    EXPECT_DOUBLE_EQ(e_min(25, 5, 7), 11.0 / 7.0);
    EXPECT_DOUBLE_EQ(e_min(25, 5, 25), 5.0);
}

TEST(EMin, ClosedFormAgainstEnumeration) {
    for (int d : {4, 6, 8, 9, 12}) {
        for (int s = 1; s <= d; ++s) {
            if (d % s) {
                continue;
            }
            for (int k = 2; k <= d; ++k) {
                EXPECT_DOUBLE_EQ(e_min(d, s, k), oracle::min_block_overlap(d, s, k)) << d << " " << s << " " << k;
            }
        }
    }
}

TEST(Enumeration, Binomial) {
    EXPECT_EQ(binomial(25, 12), 5200300u);
    EXPECT_EQ(binomial(5, 0), 1u);
    EXPECT_EQ(binomial(5, 6), 0u);
    EXPECT_EQ(binomial(62, 31), 465428353255261088u);
    EXPECT_EQ(binomial(200, 100), UINT64_MAX);
}

TEST(Enumeration, LexicographicAndComplete) {
    std::vector<std::vector<int>> seen;
    for_each_k_subset(5, 3, [&](std::span<const int> s) {
        seen.emplace_back(s.begin(), s.end());
        return true;
    });
    ASSERT_EQ(seen.size(), 10u);
    EXPECT_EQ(seen.front(), (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(seen.back(), (std::vector<int>{2, 3, 4}));
    EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
    EXPECT_EQ(std::set(seen.begin(), seen.end()).size(), 10u);

    int visited = 0;
    for_each_k_subset(6, 2, [&](std::span<const int>) { return ++visited < 4; });
    EXPECT_EQ(visited, 4);
}

TEST(BruteForce, MinWitnessesAndCap) {
    OptimalEncoding best = brute_force_optimal(6, 3, Objective::min_w());
    EXPECT_EQ(best.value_numerator, 0);
    EXPECT_EQ(as_vector(best.encoding), (std::vector<int>{0, 2, 4}));

    OptimalEncoding overlap = brute_force_optimal(9, 4, Objective::min_block_overlap(3));
    EXPECT_EQ(overlap.value_numerator, 6);
    EXPECT_DOUBLE_EQ(overlap.value, 1.5);

    try {
        brute_force_optimal(40, 20, Objective::min_w());
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
    }
}
