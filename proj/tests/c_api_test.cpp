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

#include "rseqkd/rse_qkd.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace {

rse_channel_params channel(rse_channel_kind kind, double eps, double eps1 = 0, double eps2 = 0, int s = 0) {
    rse_channel_params p{};
    p.kind = kind;
    p.eps = eps;
    p.eps1 = eps1;
    p.eps2 = eps2;
    p.block_size = s;
    p.topology = RSE_TOPOLOGY_CYCLE;
    return p;
}

}  // namespace

TEST(CApi, ScalarFunctions) {
    double v = 0;
    ASSERT_EQ(rse_q_threshold(2, &v), RSE_OK);
    EXPECT_NEAR(v, 0.110028, 1e-6);
    ASSERT_EQ(rse_kary_entropy(0.5, 2, &v), RSE_OK);
    EXPECT_NEAR(v, 1.0, 1e-15);
    ASSERT_EQ(rse_rate_per_sifted_symbol(2, 0.05, 0.05, &v), RSE_OK);
    EXPECT_NEAR(v, 0.4272060857680875, 1e-12);
    ASSERT_EQ(rse_rate_per_signal(0.92, 5, 0.0174, &v), RSE_OK);
    EXPECT_NEAR(v, 0.9196153003069701, 1e-12);
    EXPECT_STRNE(rse_version(), "");
}

TEST(CApi, ErrorsCarryStatusAndMessage) {
    double v = 0;
    EXPECT_EQ(rse_kary_entropy(0.9, 2, &v), RSE_ERR_DOMAIN);
    EXPECT_NE(std::string(rse_last_error()), "");
    EXPECT_EQ(rse_kary_entropy(0.1, 2, nullptr), RSE_ERR_INVALID_ARGUMENT);
    ASSERT_EQ(rse_q_threshold(3, &v), RSE_OK);
    EXPECT_STREQ(rse_last_error(), "");

    rse_encoding *e = nullptr;
    EXPECT_EQ(rse_brute_force_optimal(40, 20, RSE_OBJECTIVE_MIN_W, 0, RSE_TOPOLOGY_CYCLE, &e, &v), RSE_ERR_TOO_LARGE);
    EXPECT_EQ(e, nullptr);
}

TEST(CApi, Encodings) {
    rse_encoding *e = nullptr;
    ASSERT_EQ(rse_encoding_evenly_spaced(25, 5, &e), RSE_OK);
    EXPECT_EQ(rse_encoding_dimension(e), 25);
    EXPECT_EQ(rse_encoding_size(e), 5);
    int idx[5];
    ASSERT_EQ(rse_encoding_indices(e, idx, 5), RSE_OK);
    EXPECT_EQ(idx[4], 20);
    int64_t w = -1, b = -1;
    ASSERT_EQ(rse_modulo_counts(e, RSE_TOPOLOGY_CYCLE, &w, &b), RSE_OK);
    EXPECT_EQ(w, 0);
    EXPECT_EQ(b, 10);
    double th = 0;
    ASSERT_EQ(rse_modulo_threshold_eps(e, RSE_TOPOLOGY_CYCLE, &th), RSE_OK);
    EXPECT_EQ(th, 0.5);
    rse_encoding_destroy(e);

    const int bad[] = {3, 1};
    EXPECT_EQ(rse_encoding_create(5, bad, 2, &e), RSE_ERR_INVALID_ARGUMENT);

    rse_encoding *witness = nullptr;
    double value = 0;
    ASSERT_EQ(rse_brute_force_optimal(9, 4, RSE_OBJECTIVE_MIN_BLOCK_OVERLAP, 3, RSE_TOPOLOGY_CYCLE, &witness, &value), RSE_OK);
    double emin = 0;
    ASSERT_EQ(rse_e_min(9, 3, 4, &emin), RSE_OK);
    EXPECT_DOUBLE_EQ(value, emin);
    double overlap = 0;
    ASSERT_EQ(rse_block_overlap(witness, 3, &overlap), RSE_OK);
    EXPECT_DOUBLE_EQ(overlap, emin);
    rse_encoding_destroy(witness);
}

TEST(CApi, ChannelsAndConfusion) {
    double pops[3];
    ASSERT_EQ(rse_block_populations(25, 5, 0.3, 0.07, pops), RSE_OK);
    EXPECT_NEAR(pops[0], 0.7096, 1e-12);

    rse_threshold_regime regime;
    double eps2 = 0;
    EXPECT_EQ(rse_block_threshold_eps2(4, 4, 4, 1.0, 4.0, &eps2, &regime), RSE_ERR_DEGENERATE);

    rse_encoding *e = nullptr;
    ASSERT_EQ(rse_encoding_balanced_block(25, 5, 5, &e), RSE_OK);
    rse_channel_params p = channel(RSE_CHANNEL_BLOCK_BIAS, 0, 0.3, 0.07);
    rse_kept_stats stats;
    ASSERT_EQ(rse_analytic_stats(&p, e, &stats), RSE_OK);
    EXPECT_NEAR(stats.alpha, 0.7208, 1e-12);

    rse_confusion *m = nullptr;
    ASSERT_EQ(rse_confusion_build(&p, e, &m), RSE_OK);
    ASSERT_EQ(rse_confusion_size(m), 5);
    std::vector<double> row(6);
    ASSERT_EQ(rse_confusion_row(m, 0, row.data(), row.size()), RSE_OK);
    double total = 0;
    for (double x : row) {
        total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(rse_confusion_row(m, 5, row.data(), row.size()), RSE_ERR_INVALID_ARGUMENT);
    rse_confusion_destroy(m);

    p.eps1 = 1.5;
    EXPECT_EQ(rse_analytic_stats(&p, e, &stats), RSE_ERR_INVALID_ARGUMENT);
    rse_encoding_destroy(e);
}

TEST(CApi, SimulationIsThreadIndependent) {
    rse_encoding *e = nullptr;
    ASSERT_EQ(rse_encoding_truncation(25, 5, &e), RSE_OK);
    rse_sim_config config{};
    config.channel = channel(RSE_CHANNEL_DEPOLARIZING, 0.1);
    config.encoding = e;
    config.n_rounds = 200000;
    config.seed = 7;
    std::vector<std::vector<uint64_t>> runs;
    for (unsigned threads : {1u, 3u}) {
        config.threads = threads;
        rse_tally *t = nullptr;
        ASSERT_EQ(rse_simulate(&config, &t), RSE_OK);
        std::vector<uint64_t> pairs(5 * 6);
        ASSERT_EQ(rse_tally_pair_counts(t, RSE_BASIS_X, pairs.data(), pairs.size()), RSE_OK);
        runs.push_back(pairs);
        rse_estimate est;
        ASSERT_EQ(rse_estimate_stats(t, &est), RSE_OK);
        EXPECT_NEAR(est.stats.alpha, 0.92, 5 * est.alpha_se);
        double rate = 0, se = 0;
        ASSERT_EQ(rse_empirical_rate(t, &rate, &se), RSE_OK);
        EXPECT_GT(rate, 0.8);
        rse_tally_summary summary;
        ASSERT_EQ(rse_tally_summary_get(t, &summary), RSE_OK);
        EXPECT_EQ(summary.n_rounds, 200000u);
        EXPECT_EQ(summary.basis_bias, 0.5);
        rse_tally_destroy(t);
    }
    EXPECT_EQ(runs[0], runs[1]);

    config.n_rounds = 0;
    rse_tally *t = nullptr;
    EXPECT_EQ(rse_simulate(&config, &t), RSE_ERR_INVALID_ARGUMENT);
    rse_encoding_destroy(e);
    EXPECT_NE(std::string(rse_rng_algorithm()).find("mt19937_64"), std::string::npos);
}

TEST(CApi, CountsFitAndSweep) {
    rse_channel_params p = channel(RSE_CHANNEL_BLOCK_BIAS, 0, 0.31, 0.12);
    rse_counts *c = nullptr;
    ASSERT_EQ(rse_counts_expected(&p, 25, 1e6, &c), RSE_OK);
    EXPECT_EQ(rse_counts_dimension(c), 25);

    char *csv = nullptr;
    ASSERT_EQ(rse_counts_to_csv(c, &csv), RSE_OK);
    rse_counts *back = nullptr;
    ASSERT_EQ(rse_counts_load_string(csv, &back), RSE_OK);
    rse_string_free(csv);

    rse_fit_result fit;
    ASSERT_EQ(rse_fit_block_params(back, 5, &fit), RSE_OK);
    EXPECT_NEAR(fit.eps1, 0.31, 1e-3);
    EXPECT_NEAR(fit.eps2, 0.12, 1e-3);

    rse_k_sweep *sweep = nullptr;
    ASSERT_EQ(rse_sweep_k(back, 5, 2, 25, RSE_RULE_BALANCED, &sweep), RSE_OK);
    ASSERT_EQ(rse_k_sweep_size(sweep), 24u);
    int argmax = 0;
    for (size_t i = 0; i < rse_k_sweep_size(sweep); ++i) {
        rse_k_sweep_row row;
        ASSERT_EQ(rse_k_sweep_row_get(sweep, i, &row), RSE_OK);
        if (row.is_argmax) {
            argmax = row.k;
        }
    }
    EXPECT_EQ(argmax, 5);
    EXPECT_EQ(rse_k_sweep_warning(sweep, 0), nullptr);
    rse_k_sweep_destroy(sweep);
    rse_counts_destroy(back);
    rse_counts_destroy(c);
}

TEST(CApi, ParseErrorsReportLines) {
    rse_counts *c = nullptr;
    EXPECT_EQ(rse_counts_load_string("d=2,basis=Z\n1,2\n3\n", &c), RSE_ERR_PARSE);
    EXPECT_EQ(rse_last_error_line(), 3);
    EXPECT_EQ(rse_counts_load_string("d=2,basis=Z\n1,2\n3,-1\n", &c), RSE_ERR_NEGATIVE_ENTRY);
    const char *paths[] = {"/nonexistent.csv"};
    EXPECT_EQ(rse_counts_load_files(paths, 1, &c), RSE_ERR_IO);
}

TEST(CApi, MapsSweepsAndCrossovers) {
    rse_channel_params p = channel(RSE_CHANNEL_MODULO, 0);
    rse_threshold_map *map = nullptr;
    ASSERT_EQ(rse_threshold_map_build(&p, 25, 25, 2, 26, &map), RSE_OK);
    ASSERT_EQ(rse_threshold_map_size(map), 25u);
    rse_threshold_cell cell;
    ASSERT_EQ(rse_threshold_map_cell(map, 10, &cell), RSE_OK);
    EXPECT_EQ(cell.k, 12);
    EXPECT_EQ(cell.eps_threshold, 0.5);
    EXPECT_EQ(cell.regime, RSE_REGIME_ALWAYS_POSITIVE);
    ASSERT_EQ(rse_threshold_map_cell(map, 24, &cell), RSE_OK);
    EXPECT_FALSE(cell.valid);
    rse_threshold_map_destroy(map);

    double noise[] = {0.1};
    rse_sweep *sweep = nullptr;
    ASSERT_EQ(rse_analytic_sweep(&p, 25, 2, 25, noise, 1, RSE_METRIC_PER_SIGNAL, &sweep), RSE_OK);
    for (size_t i = 0; i < rse_sweep_size(sweep); ++i) {
        rse_sweep_row row;
        ASSERT_EQ(rse_sweep_row_get(sweep, i, &row), RSE_OK);
        EXPECT_EQ(row.is_argmax != 0, row.k == 12);
    }
    rse_sweep_destroy(sweep);

    double crossover = 0;
    int found = 0;
    ASSERT_EQ(rse_find_crossover(&p, 25, 0.0, 0.5, RSE_METRIC_PER_SIGNAL, &crossover, &found), RSE_OK);
    EXPECT_TRUE(found);
    EXPECT_NEAR(crossover, 0.0326, 1e-9);
}
