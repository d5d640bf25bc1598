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

#include "rseqkd/channels.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rseqkd/error.hpp"

using namespace rseqkd;

namespace {

std::vector<int> as_vector(const IndexEncoding &e) {
    return {e.indices().begin(), e.indices().end()};
}

// Every subset of size >= 2 of [0, d).
std::vector<IndexEncoding> all_encodings(int d) {
    std::vector<IndexEncoding> out;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        auto subset = oracle::bits_to_subset(mask);
        if (subset.size() >= 2) {
            out.emplace_back(d, subset);
        }
    }
    return out;
}

void expect_stats(const KeptStats &got, const oracle::Stats &want, const std::string &where) {
    EXPECT_NEAR(got.alpha, want.alpha, 1e-12) << where;
    EXPECT_NEAR(got.q, want.q, 1e-12) << where;
}

}  // namespace

TEST(Depolarizing, StatsMatchTransitionMatrix) {
    for (int d = 2; d <= 12; ++d) {
        for (int k = 2; k <= d; ++k) {
            for (double eps : {0.0, 0.05, 0.3, 1.0}) {
                auto want = oracle::restricted(oracle::depolarizing(d, eps), as_vector(truncation_encoding(d, k)));
                expect_stats(depol_stats(KaryParams(d, k), eps), want, "d=" + std::to_string(d));
            }
        }
    }
}

TEST(Depolarizing, KnownValues) {
    KeptStats s = depol_stats(KaryParams(25, 5), 0.1);
    EXPECT_NEAR(s.alpha, 0.92, 1e-15);
    EXPECT_NEAR(s.q, 0.016 / 0.92, 1e-15);
    EXPECT_NEAR(depol_threshold_eps(KaryParams(2, 2)), 0.2200557288767191, 1e-12);
    EXPECT_NEAR(depol_alpha_threshold(KaryParams(25, 2)), 0.2832346968718691, 1e-12);
}

TEST(Depolarizing, ThresholdReachesQThreshold) {
    for (int d = 2; d <= 32; ++d) {
        for (int k = 2; k <= d; ++k) {
            KaryParams p(d, k);
            double eps = depol_threshold_eps(p);
            auto want = oracle::restricted(oracle::depolarizing(d, eps), as_vector(truncation_encoding(d, k)));
            EXPECT_NEAR(want.q, oracle::q_threshold(k), 1e-9) << d << " " << k;
            EXPECT_NEAR(depol_alpha_threshold(p), want.alpha, 1e-9);
        }
    }
}

TEST(Depolarizing, ThresholdMonotoneInDAtFixedK) {
    for (int k = 2; k <= 10; ++k) {
        double previous = 0;
        for (int d = k; d <= 40; ++d) {
            double eps = depol_threshold_eps(KaryParams(d, k));
            EXPECT_GT(eps, previous);
            previous = eps;
        }
    }
}

TEST(Modulo, StatsMatchTransitionMatrixForEverySubset) {
    for (int d = 2; d <= 9; ++d) {
        for (const IndexEncoding &e : all_encodings(d)) {
            for (bool cycle : {true, false}) {
                for (double eps : {0.0, 0.1, 0.5}) {
                    auto want = oracle::restricted(oracle::modulo(d, eps, cycle), as_vector(e));
                    expect_stats(
                        modulo_stats(e, eps, cycle ? Topology::kCycle : Topology::kPath), want,
                        "d=" + std::to_string(d));
                }
            }
        }
    }
}

TEST(Modulo, ThresholdZeroesRateOrSaturates) {
    for (int d = 3; d <= 9; ++d) {
        for (const IndexEncoding &e : all_encodings(d)) {
            for (bool cycle : {true, false}) {
                Topology t = cycle ? Topology::kCycle : Topology::kPath;
                double eps = modulo_threshold_eps(e, t);
                if (modulo_counts(e, t).w == 0) {
                    EXPECT_EQ(eps, 0.5);
                    continue;
                }
                ASSERT_LE(eps, 0.5);
                auto at = oracle::restricted(oracle::modulo(d, eps, cycle), as_vector(e));
                if (eps < 0.5) {
                    EXPECT_NEAR(at.q, oracle::q_threshold(e.k()), 1e-9);
                } else {
                    EXPECT_LE(at.q, oracle::q_threshold(e.k()) + 1e-12);
                }
            }
        }
    }
}

TEST(Modulo, KnownThresholds) {
    EXPECT_NEAR(modulo_threshold_eps(truncation_encoding(6, 6), Topology::kCycle), 0.1126040839882089, 1e-12);
    EXPECT_NEAR(modulo_threshold_eps(IndexEncoding(4, {0, 1}), Topology::kCycle), 0.09912171393465902, 1e-12);
    for (int k = 2; k <= 12; ++k) {
        EXPECT_EQ(modulo_threshold_eps(evenly_spaced_encoding(25, k), Topology::kCycle), 0.5);
    }
    EXPECT_LT(modulo_threshold_eps(evenly_spaced_encoding(25, 13), Topology::kCycle), 0.5);
}

TEST(BlockBias, Populations) {
    BlockPopulations p = block_populations(25, 5, 0.3, 0.07);
    EXPECT_NEAR(p.correct, 0.7096, 1e-12);
    EXPECT_NEAR(p.in_block, 0.0586, 1e-12);
    EXPECT_NEAR(p.cross_block, 0.0028, 1e-12);
    for (int s : {2, 3, 4, 6, 12}) {
        BlockPopulations q = block_populations(12, s, 0.4, 0.2);
        EXPECT_NEAR(q.correct + (s - 1) * q.in_block + (12 - s) * q.cross_block, 1.0, 1e-14);
    }
}

TEST(BlockBias, StatsMatchTransitionMatrixForEverySubset) {
    for (int d : {4, 6, 8, 9}) {
        for (int s = 2; s <= d; ++s) {
            if (d % s) {
                continue;
            }
            auto matrix = oracle::block_bias(d, s, 0.3, 0.07);
            for (const IndexEncoding &e : all_encodings(d)) {
                KeptStats got = block_stats(KaryParams(d, e.k()), s, 0.3, 0.07, block_overlap_of(e, s));
                expect_stats(got, oracle::restricted(matrix, as_vector(e)), "d=" + std::to_string(d));
            }
        }
    }
}

TEST(BlockBias, KnownStats) {
    KeptStats s = block_stats(KaryParams(25, 5), 5, 0.3, 0.07, 1.0);
    EXPECT_NEAR(s.alpha, 0.7208, 1e-12);
    EXPECT_NEAR(s.q, 0.0112 / 0.7208, 1e-12);
    EXPECT_THROW(block_stats(KaryParams(25, 5), 5, 0.3, 0.07, 0.5), Error);
}

TEST(BlockBias, ThresholdRegimes) {
    for (int d : {4, 9, 16, 25}) {
        int s = static_cast<int>(std::lround(std::sqrt(d)));
        for (int k = 2; k <= d; ++k) {
            IndexEncoding e = balanced_block_encoding(d, s, k);
            double overlap = block_overlap_of(e, s);
            for (double eps1 : {0.0, 0.07, 0.3, 0.6}) {
                Eps2Threshold t = block_threshold_eps2(KaryParams(d, k), s, eps1, overlap);
                double q_th = oracle::q_threshold(k);
                auto q_at = [&](double eps2) {
                    return oracle::restricted(oracle::block_bias(d, s, eps1, eps2), as_vector(e)).q;
                };
                switch (t.regime) {
                    case ThresholdRegime::kCrossing:
                        EXPECT_NEAR(q_at(t.eps2), q_th, 1e-9);
                        break;
                    case ThresholdRegime::kNoPositiveRate:
                        EXPECT_EQ(t.eps2, 0.0);
                        EXPECT_GE(q_at(0.0), q_th - 1e-12);
                        break;
                    case ThresholdRegime::kAlwaysPositive:
                        EXPECT_EQ(t.eps2, 1.0);
                        EXPECT_LE(q_at(1.0), q_th + 1e-12);
                        break;
                }
            }
        }
    }
}

TEST(BlockBias, DegenerateThreshold) {
    // Full depolarisation inside a single block makes the outcome independent of eps2.
    try {
        block_threshold_eps2(KaryParams(4, 4), 4, 1.0, 4.0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::kDegenerate);
    }
}

TEST(Channels, Validation) {
    EXPECT_THROW(validate_channel(Depolarizing{1.5}, 4), Error);
    EXPECT_THROW(validate_channel(Modulo{0.6}, 4), Error);
    EXPECT_THROW(validate_channel(BlockBias{0.1, 0.1, 3}, 8), Error);
    EXPECT_THROW(validate_channel(BlockBias{-0.1, 0.1, 2}, 8), Error);
    EXPECT_NO_THROW(validate_channel(BlockBias{0.1, 0.1, 4}, 8));
    EXPECT_EQ(channel_name(Modulo{0.1}), "modulo");
}

TEST(ConfusionModel, RowsAreStochasticAndMatchOracle) {
    for (int d : {4, 6, 9}) {
        std::vector<std::pair<ChannelSpec, oracle::Matrix>> channels{
            {Depolarizing{0.2}, oracle::depolarizing(d, 0.2)},
            {Modulo{0.15, Topology::kCycle}, oracle::modulo(d, 0.15, true)},
            {Modulo{0.15, Topology::kPath}, oracle::modulo(d, 0.15, false)},
        };
        if (d % 3 == 0) {
            channels.emplace_back(BlockBias{0.3, 0.07, 3}, oracle::block_bias(d, 3, 0.3, 0.07));
        } else {
            channels.emplace_back(BlockBias{0.3, 0.07, 2}, oracle::block_bias(d, 2, 0.3, 0.07));
        }
        for (const auto &[spec, matrix] : channels) {
            for (const IndexEncoding &e : all_encodings(d)) {
                ConfusionModel m = build_confusion_model(spec, e);
                auto idx = e.indices();
                for (int x = 0; x < e.k(); ++x) {
                    double total = 0;
                    for (int y = 0; y <= e.k(); ++y) {
                        total += m.row(x)[y];
                    }
                    EXPECT_NEAR(total, 1.0, 1e-12);
                    double kept = 0;
                    for (int y = 0; y < e.k(); ++y) {
                        EXPECT_NEAR(m.row(x)[y], matrix[idx[x]][idx[y]], 1e-14);
                        kept += matrix[idx[x]][idx[y]];
                    }
                    EXPECT_NEAR(m.inconclusive(x), 1 - kept, 1e-12);
                }
                KeptStats implied = m.implied_stats();
                KeptStats analytic = analytic_stats(spec, e);
                EXPECT_NEAR(implied.alpha, analytic.alpha, 1e-12);
                EXPECT_NEAR(implied.q, analytic.q, 1e-12);
            }
        }
    }
}

TEST(ConfusionModel, RejectsMalformedRows) {
    EXPECT_THROW(ConfusionModel(2, Basis::kZ, {1, 0, 0, 0, 1}), Error);
    EXPECT_THROW(ConfusionModel(2, Basis::kZ, {0.9, 0.2, -0.1, 0, 1, 0}), Error);
    EXPECT_THROW(ConfusionModel(2, Basis::kZ, {0.9, 0.05, 0.04, 0, 1, 0}), Error);
    EXPECT_NO_THROW(ConfusionModel(2, Basis::kX, {0.9, 0.05, 0.05, 0, 1, 0}));
}

TEST(CrossBasisOverlap, FourierSignalsSpreadEvenly) {
    for (int d : {4, 8, 9, 16}) {
        for (int s = 2; s <= d; ++s) {
            if (d % s) {
                continue;
            }
            for (int k : {2, d / 2, d}) {
                if (k < 2) {
                    continue;
                }
                for (const IndexEncoding &e : {truncation_encoding(d, k), evenly_spaced_encoding(d, k)}) {
                    EXPECT_NEAR(cross_basis_overlap(d, s, e), static_cast<double>(s) * k / d, 1e-10);
                }
            }
        }
    }
    try {
        cross_basis_overlap(65, 5, truncation_encoding(65, 2));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
    }
}
