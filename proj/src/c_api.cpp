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

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "rseqkd/analysis.hpp"
#include "rseqkd/channels.hpp"
#include "rseqkd/encodings.hpp"
#include "rseqkd/entropy_rates.hpp"
#include "rseqkd/error.hpp"
#include "rseqkd/ingest.hpp"
#include "rseqkd/montecarlo.hpp"

using namespace rseqkd;

struct rse_encoding {
    IndexEncoding value;
};
struct rse_confusion {
    ConfusionModel value;
};
struct rse_tally {
    Tally value;
};
struct rse_counts {
    CountPair value;
};
struct rse_sweep {
    std::vector<SweepRow> rows;
};
struct rse_threshold_map {
    std::vector<ThresholdCell> cells;
};
struct rse_k_sweep {
    KSweep value;
};

namespace {

thread_local std::string last_error;
thread_local int last_error_line = 0;

rse_status to_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidArgument:
            return RSE_ERR_INVALID_ARGUMENT;
        case ErrorCode::kDomain:
            return RSE_ERR_DOMAIN;
        case ErrorCode::kParse:
            return RSE_ERR_PARSE;
        case ErrorCode::kDimensionMismatch:
            return RSE_ERR_DIMENSION_MISMATCH;
        case ErrorCode::kNegativeEntry:
            return RSE_ERR_NEGATIVE_ENTRY;
        case ErrorCode::kInsufficientData:
            return RSE_ERR_INSUFFICIENT_DATA;
        case ErrorCode::kTooLarge:
            return RSE_ERR_TOO_LARGE;
        case ErrorCode::kDegenerate:
            return RSE_ERR_DEGENERATE;
        case ErrorCode::kIo:
            return RSE_ERR_IO;
    }
    return RSE_ERR_INTERNAL;
}

template <class F>
rse_status guarded(F &&body) {
    try {
        body();
        last_error.clear();
        last_error_line = 0;
        return RSE_OK;
    } catch (const Error &e) {
        last_error = e.what();
        last_error_line = e.line();
        return to_status(e.code());
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
        last_error_line = 0;
        return RSE_ERR_INTERNAL;
    } catch (const std::exception &e) {
        last_error = e.what();
        last_error_line = 0;
        return RSE_ERR_INTERNAL;
    }
}

void require(bool condition, const char *what) {
    if (!condition) {
        throw Error(ErrorCode::kInvalidArgument, std::string("null or invalid argument: ") + what);
    }
}

Topology topology_of(rse_topology t) {
    return t == RSE_TOPOLOGY_PATH ? Topology::kPath : Topology::kCycle;
}

Basis basis_of(rse_basis b) {
    return b == RSE_BASIS_X ? Basis::kX : Basis::kZ;
}

RateMetric metric_of(rse_rate_metric m) {
    return m == RSE_METRIC_PER_SIFTED_SYMBOL ? RateMetric::kPerSiftedSymbol : RateMetric::kPerSignal;
}

ChannelParams params_of(const rse_channel_params &c) {
    ChannelParams p;
    switch (c.kind) {
        case RSE_CHANNEL_DEPOLARIZING:
            p.kind = ChannelKind::kDepolarizing;
            break;
        case RSE_CHANNEL_MODULO:
            p.kind = ChannelKind::kModulo;
            break;
        case RSE_CHANNEL_BLOCK_BIAS:
            p.kind = ChannelKind::kBlockBias;
            break;
        default:
            throw Error(ErrorCode::kInvalidArgument, "unknown channel kind");
    }
    p.eps = c.eps;
    p.eps1 = c.eps1;
    p.eps2 = c.eps2;
    p.block_size = c.block_size;
    p.topology = topology_of(c.topology);
    return p;
}

rse_kept_stats to_c(const KeptStats &s) {
    return {s.alpha, s.q, s.no_kept_events ? 1 : 0};
}

rse_threshold_regime to_c(ThresholdRegime r) {
    switch (r) {
        case ThresholdRegime::kCrossing:
            return RSE_REGIME_CROSSING;
        case ThresholdRegime::kNoPositiveRate:
            return RSE_REGIME_NO_POSITIVE_RATE;
        case ThresholdRegime::kAlwaysPositive:
            return RSE_REGIME_ALWAYS_POSITIVE;
    }
    return RSE_REGIME_CROSSING;
}

template <class T>
void copy_out(const std::vector<T> &values, T *out, std::size_t capacity) {
    std::memcpy(out, values.data(), std::min(capacity, values.size()) * sizeof(T));
}

char *duplicate(const std::string &s) {
    char *p = static_cast<char *>(std::malloc(s.size() + 1));
    if (p == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

}  // namespace

extern "C" {

const char *rse_version(void) {
    return "1.0.0";
}

const char *rse_last_error(void) {
    return last_error.c_str();
}

int rse_last_error_line(void) {
    return last_error_line;
}

void rse_string_free(char *s) {
    std::free(s);
}

rse_status rse_kary_entropy(double q, int k, double *out) {
    return guarded([&] {
        require(out, "out");
        *out = kary_entropy(q, k);
    });
}

rse_status rse_q_threshold(int k, double *out) {
    return guarded([&] {
        require(out, "out");
        *out = solve_q_threshold(k);
    });
}

rse_status rse_rate_per_sifted_symbol(int k, double q_z, double q_x, double *out) {
    return guarded([&] {
        require(out, "out");
        *out = rate_per_sifted_symbol(k, q_z, q_x);
    });
}

rse_status rse_rate_per_signal(double alpha, int k, double q, double *out) {
    return guarded([&] {
        require(out, "out");
        *out = rate_per_signal(alpha, k, q);
    });
}

rse_status rse_encoding_create(int d, const int *indices, size_t k, rse_encoding **out) {
    return guarded([&] {
        require(out && (indices || k == 0), "indices/out");
        *out = new rse_encoding{IndexEncoding(d, std::vector<int>(indices, indices + k))};
    });
}

rse_status rse_encoding_truncation(int d, int k, rse_encoding **out) {
    return guarded([&] {
        require(out, "out");
        *out = new rse_encoding{truncation_encoding(d, k)};
    });
}

rse_status rse_encoding_evenly_spaced(int d, int k, rse_encoding **out) {
    return guarded([&] {
        require(out, "out");
        *out = new rse_encoding{evenly_spaced_encoding(d, k)};
    });
}

rse_status rse_encoding_balanced_block(int d, int block_size, int k, rse_encoding **out) {
    return guarded([&] {
        require(out, "out");
        *out = new rse_encoding{balanced_block_encoding(d, block_size, k)};
    });
}

void rse_encoding_destroy(rse_encoding *encoding) {
    delete encoding;
}

int rse_encoding_dimension(const rse_encoding *encoding) {
    return encoding ? encoding->value.d() : 0;
}

int rse_encoding_size(const rse_encoding *encoding) {
    return encoding ? encoding->value.k() : 0;
}

rse_status rse_encoding_indices(const rse_encoding *encoding, int *out, size_t capacity) {
    return guarded([&] {
        require(encoding && out, "encoding/out");
        auto idx = encoding->value.indices();
        copy_out(std::vector<int>(idx.begin(), idx.end()), out, capacity);
    });
}

rse_status rse_modulo_counts(const rse_encoding *encoding, rse_topology topology, int64_t *w, int64_t *b) {
    return guarded([&] {
        require(encoding && w && b, "encoding/w/b");
        AdjacencyCounts c = modulo_counts(encoding->value, topology_of(topology));
        *w = c.w;
        *b = c.b;
    });
}

rse_status rse_min_w_on_cycle(int d, int k, int64_t *out) {
    return guarded([&] {
        require(out, "out");
        *out = min_w_on_cycle(d, k);
    });
}

rse_status rse_block_overlap(const rse_encoding *encoding, int block_size, double *out) {
    return guarded([&] {
        require(encoding && out, "encoding/out");
        *out = block_overlap_of(encoding->value, block_size);
    });
}

rse_status rse_e_min(int d, int block_size, int k, double *out) {
    return guarded([&] {
        require(out, "out");
        *out = e_min(d, block_size, k);
    });
}

rse_status rse_brute_force_optimal(
    int d, int k, rse_objective objective, int block_size, rse_topology topology, rse_encoding **witness,
    double *value) {
    return guarded([&] {
        require(witness && value, "witness/value");
        Objective obj = objective == RSE_OBJECTIVE_MIN_BLOCK_OVERLAP ? Objective::min_block_overlap(block_size)
                                                                     : Objective::min_w();
        OptimalEncoding best = brute_force_optimal(d, k, obj, topology_of(topology));
        *value = best.value;
        *witness = new rse_encoding{std::move(best.encoding)};
    });
}

rse_status rse_depol_stats(int d, int k, double eps, rse_kept_stats *out) {
    return guarded([&] {
        require(out, "out");
        *out = to_c(depol_stats(KaryParams(d, k), eps));
    });
}

rse_status rse_depol_threshold_eps(int d, int k, double *out) {
    return guarded([&] {
        require(out, "out");
        *out = depol_threshold_eps(KaryParams(d, k));
    });
}

rse_status rse_depol_alpha_threshold(int d, int k, double *out) {
    return guarded([&] {
        require(out, "out");
        *out = depol_alpha_threshold(KaryParams(d, k));
    });
}

rse_status rse_modulo_stats(const rse_encoding *encoding, double eps, rse_topology topology, rse_kept_stats *out) {
    return guarded([&] {
        require(encoding && out, "encoding/out");
        *out = to_c(modulo_stats(encoding->value, eps, topology_of(topology)));
    });
}

rse_status rse_modulo_threshold_eps(const rse_encoding *encoding, rse_topology topology, double *out) {
    return guarded([&] {
        require(encoding && out, "encoding/out");
        *out = modulo_threshold_eps(encoding->value, topology_of(topology));
    });
}

rse_status rse_block_populations(int d, int block_size, double eps1, double eps2, double out[3]) {
    return guarded([&] {
        require(out, "out");
        BlockPopulations p = block_populations(d, block_size, eps1, eps2);
        out[0] = p.correct;
        out[1] = p.in_block;
        out[2] = p.cross_block;
    });
}

rse_status rse_block_stats(int d, int block_size, int k, double eps1, double eps2, double overlap, rse_kept_stats *out) {
    return guarded([&] {
        require(out, "out");
        *out = to_c(block_stats(KaryParams(d, k), block_size, eps1, eps2, overlap));
    });
}

rse_status rse_block_threshold_eps2(
    int d, int block_size, int k, double eps1, double overlap, double *out, rse_threshold_regime *regime) {
    return guarded([&] {
        require(out, "out");
        Eps2Threshold t = block_threshold_eps2(KaryParams(d, k), block_size, eps1, overlap);
        *out = t.eps2;
        if (regime) {
            *regime = to_c(t.regime);
        }
    });
}

rse_status rse_cross_basis_overlap(int d, int block_size, const rse_encoding *encoding_x, double *out) {
    return guarded([&] {
        require(encoding_x && out, "encoding/out");
        *out = cross_basis_overlap(d, block_size, encoding_x->value);
    });
}

rse_status rse_analytic_stats(const rse_channel_params *channel, const rse_encoding *encoding, rse_kept_stats *out) {
    return guarded([&] {
        require(channel && encoding && out, "channel/encoding/out");
        ChannelSpec spec = make_spec(params_of(*channel), encoding->value.d());
        *out = to_c(analytic_stats(spec, encoding->value));
    });
}

rse_status rse_confusion_build(const rse_channel_params *channel, const rse_encoding *encoding, rse_confusion **out) {
    return guarded([&] {
        require(channel && encoding && out, "channel/encoding/out");
        ChannelSpec spec = make_spec(params_of(*channel), encoding->value.d());
        *out = new rse_confusion{build_confusion_model(spec, encoding->value)};
    });
}

void rse_confusion_destroy(rse_confusion *model) {
    delete model;
}

int rse_confusion_size(const rse_confusion *model) {
    return model ? model->value.k() : 0;
}

rse_status rse_confusion_row(const rse_confusion *model, int x, double *out, size_t capacity) {
    return guarded([&] {
        require(model && out, "model/out");
        require(x >= 0 && x < model->value.k(), "row index");
        auto row = model->value.row(x);
        copy_out(std::vector<double>(row.begin(), row.end()), out, capacity);
    });
}

const char *rse_rng_algorithm(void) {
    return kRngAlgorithm.data();
}

unsigned rse_default_threads(void) {
    return default_thread_count();
}

rse_status rse_simulate(const rse_sim_config *config, rse_tally **out) {
    return guarded([&] {
        require(config && config->encoding && out, "config/encoding/out");
        const IndexEncoding &encoding = config->encoding->value;
        SimConfig sim{
            make_spec(params_of(config->channel), encoding.d()), encoding, config->n_rounds, config->seed,
            config->basis_bias == 0 ? 0.5 : config->basis_bias};
        *out = new rse_tally{simulate(sim, config->threads)};
    });
}

void rse_tally_destroy(rse_tally *tally) {
    delete tally;
}

rse_status rse_tally_summary_get(const rse_tally *tally, rse_tally_summary *out) {
    return guarded([&] {
        require(tally && out, "tally/out");
        const Tally &t = tally->value;
        out->n_rounds = t.n_rounds;
        for (int b = 0; b < 2; ++b) {
            out->matched[b] = t.bases[b].matched;
            out->kept[b] = t.bases[b].kept;
            out->correct[b] = t.bases[b].correct;
        }
        out->k = t.k;
        out->basis_bias = t.basis_bias;
    });
}

rse_status rse_tally_pair_counts(const rse_tally *tally, rse_basis basis, uint64_t *out, size_t capacity) {
    return guarded([&] {
        require(tally && out, "tally/out");
        const auto &counts = tally->value.basis(basis_of(basis)).pair_counts;
        std::vector<uint64_t> copy(counts.begin(), counts.end());
        copy_out(copy, out, capacity);
    });
}

rse_status rse_estimate_stats(const rse_tally *tally, rse_estimate *out) {
    return guarded([&] {
        require(tally && out, "tally/out");
        Estimate e = estimate_stats(tally->value);
        *out = {to_c(e.stats), e.alpha_se, e.q_se, e.insufficient_data ? 1 : 0};
    });
}

rse_status rse_empirical_rate(const rse_tally *tally, double *rate, double *standard_error) {
    return guarded([&] {
        require(tally && rate, "tally/rate");
        *rate = empirical_rate(tally->value);
        if (standard_error) {
            *standard_error = empirical_rate_se(tally->value);
        }
    });
}

rse_status rse_counts_load_files(const char *const *paths, size_t n_paths, rse_counts **out) {
    return guarded([&] {
        require(paths && out && n_paths > 0, "paths/out");
        std::vector<std::string> list;
        for (size_t i = 0; i < n_paths; ++i) {
            require(paths[i], "path");
            list.emplace_back(paths[i]);
        }
        *out = new rse_counts{load_count_files(list)};
    });
}

rse_status rse_counts_load_string(const char *text, rse_counts **out) {
    return guarded([&] {
        require(text && out, "text/out");
        std::istringstream in{std::string(text)};
        *out = new rse_counts{load_counts(in)};
    });
}

rse_status rse_counts_expected(const rse_channel_params *channel, int d, double exposure, rse_counts **out) {
    return guarded([&] {
        require(channel && out, "channel/out");
        ChannelSpec spec = make_spec(params_of(*channel), d);
        *out = new rse_counts{
            {expected_counts(spec, d, Basis::kZ, exposure), expected_counts(spec, d, Basis::kX, exposure)}};
    });
}

rse_status rse_counts_sampled(const rse_channel_params *channel, int d, uint64_t per_row, uint64_t seed, rse_counts **out) {
    return guarded([&] {
        require(channel && out, "channel/out");
        ChannelSpec spec = make_spec(params_of(*channel), d);
        *out = new rse_counts{
            {sampled_counts(spec, d, Basis::kZ, per_row, seed), sampled_counts(spec, d, Basis::kX, per_row, seed)}};
    });
}

void rse_counts_destroy(rse_counts *counts) {
    delete counts;
}

int rse_counts_dimension(const rse_counts *counts) {
    return counts ? counts->value.d() : 0;
}

rse_status rse_counts_to_csv(const rse_counts *counts, char **out) {
    return guarded([&] {
        require(counts && out, "counts/out");
        std::ostringstream text;
        write_counts(text, counts->value.z);
        write_counts(text, counts->value.x);
        *out = duplicate(text.str());
    });
}

rse_status rse_subset_stats(const rse_counts *counts, rse_basis basis, const rse_encoding *encoding, rse_kept_stats *out) {
    return guarded([&] {
        require(counts && encoding && out, "counts/encoding/out");
        const CountMatrix &m = basis == RSE_BASIS_X ? counts->value.x : counts->value.z;
        *out = to_c(subset_stats(m, encoding->value));
    });
}

rse_status rse_fit_block_params(const rse_counts *counts, int block_size, rse_fit_result *out) {
    return guarded([&] {
        require(counts && out, "counts/out");
        FitResult fit = fit_block_params(counts->value, block_size);
        *out = {fit.eps1, fit.eps2, fit.residual, fit.shot_noise_residual, fit.poor_fit ? 1 : 0};
    });
}

rse_status rse_sweep_k(
    const rse_counts *counts, int block_size, int k_min, int k_max, rse_subset_rule rule, rse_k_sweep **out) {
    return guarded([&] {
        require(counts && out, "counts/out");
        SubsetRule r = rule == RSE_RULE_BRUTE_FORCE ? SubsetRule::kBruteForce : SubsetRule::kBalanced;
        *out = new rse_k_sweep{sweep_k(counts->value, block_size, k_min, k_max, r)};
    });
}

void rse_k_sweep_destroy(rse_k_sweep *sweep) {
    delete sweep;
}

size_t rse_k_sweep_size(const rse_k_sweep *sweep) {
    return sweep ? sweep->value.rows.size() : 0;
}

rse_status rse_k_sweep_row_get(const rse_k_sweep *sweep, size_t i, rse_k_sweep_row *out) {
    return guarded([&] {
        require(sweep && out && i < sweep->value.rows.size(), "sweep/out/index");
        const SweepEntry &e = sweep->value.rows[i];
        *out = {e.k, to_c(e.z), to_c(e.x), e.alpha, e.q, e.rate, e.is_argmax ? 1 : 0, e.fell_back ? 1 : 0};
    });
}

rse_status rse_k_sweep_subset(const rse_k_sweep *sweep, size_t i, int *out, size_t capacity) {
    return guarded([&] {
        require(sweep && out && i < sweep->value.rows.size(), "sweep/out/index");
        copy_out(sweep->value.rows[i].subset, out, capacity);
    });
}

size_t rse_k_sweep_warning_count(const rse_k_sweep *sweep) {
    return sweep ? sweep->value.warnings.size() : 0;
}

const char *rse_k_sweep_warning(const rse_k_sweep *sweep, size_t i) {
    if (!sweep || i >= sweep->value.warnings.size()) {
        return nullptr;
    }
    return sweep->value.warnings[i].c_str();
}

rse_status rse_threshold_map_build(
    const rse_channel_params *channel, int d_min, int d_max, int k_min, int k_max, rse_threshold_map **out) {
    return guarded([&] {
        require(channel && out, "channel/out");
        *out = new rse_threshold_map{threshold_map(params_of(*channel), d_min, d_max, k_min, k_max)};
    });
}

void rse_threshold_map_destroy(rse_threshold_map *map) {
    delete map;
}

size_t rse_threshold_map_size(const rse_threshold_map *map) {
    return map ? map->cells.size() : 0;
}

rse_status rse_threshold_map_cell(const rse_threshold_map *map, size_t i, rse_threshold_cell *out) {
    return guarded([&] {
        require(map && out && i < map->cells.size(), "map/out/index");
        const ThresholdCell &c = map->cells[i];
        *out = {
            c.d, c.k, c.valid ? 1 : 0, c.eps_threshold, c.alpha_threshold ? 1 : 0, c.alpha_threshold.value_or(0.0),
            to_c(c.regime)};
    });
}

rse_status rse_analytic_sweep(
    const rse_channel_params *channel, int d, int k_min, int k_max, const double *noise, size_t n_noise,
    rse_rate_metric metric, rse_sweep **out) {
    return guarded([&] {
        require(channel && out && (noise || n_noise == 0), "channel/noise/out");
        *out = new rse_sweep{
            analytic_sweep(params_of(*channel), d, k_min, k_max, std::span<const double>(noise, n_noise), metric_of(metric))};
    });
}

void rse_sweep_destroy(rse_sweep *sweep) {
    delete sweep;
}

size_t rse_sweep_size(const rse_sweep *sweep) {
    return sweep ? sweep->rows.size() : 0;
}

rse_status rse_sweep_row_get(const rse_sweep *sweep, size_t i, rse_sweep_row *out) {
    return guarded([&] {
        require(sweep && out && i < sweep->rows.size(), "sweep/out/index");
        const SweepRow &r = sweep->rows[i];
        *out = {r.d, r.k, r.noise, to_c(r.stats), r.rate_per_signal, r.rate_per_sifted_symbol, r.is_argmax ? 1 : 0};
    });
}

rse_status rse_find_crossover(
    const rse_channel_params *channel, int d, double lo, double hi, rse_rate_metric metric, double *out, int *found) {
    return guarded([&] {
        require(channel && out && found, "channel/out/found");
        auto value = find_crossover(params_of(*channel), d, lo, hi, metric_of(metric));
        *found = value ? 1 : 0;
        *out = value.value_or(0.0);
    });
}

}  // extern "C"
