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

#include "rseqkd/analysis.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rseqkd/error.hpp"

namespace rseqkd {

namespace {

int integer_sqrt(int d) {
    int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
    return r * r == d ? r : 0;
}

double rate_of(const KeptStats &stats, int k, RateMetric metric) {
    const double q = std::min(stats.q, static_cast<double>(k - 1) / k);
    if (metric == RateMetric::kPerSiftedSymbol) {
        return rate_per_sifted_symbol(k, q, q);
    }
    return rate_per_signal(stats.alpha, k, q);
}

}  // namespace

std::optional<int> resolve_block_size(const ChannelParams &params, int d) {
    int s = params.block_size > 0 ? params.block_size : integer_sqrt(d);
    if (s < 2 || d % s != 0) {
        return std::nullopt;
    }
    return s;
}

IndexEncoding optimal_encoding(const ChannelParams &params, int d, int k) {
    switch (params.kind) {
        case ChannelKind::kDepolarizing:
            return truncation_encoding(d, k);
        case ChannelKind::kModulo:
            return evenly_spaced_encoding(d, k);
        case ChannelKind::kBlockBias: {
            auto s = resolve_block_size(params, d);
            if (!s) {
                throw Error(
                    ErrorCode::kDimensionMismatch, "no valid block size for d=" + std::to_string(d));
            }
            return balanced_block_encoding(d, *s, k);
        }
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown channel kind");
}

ChannelSpec make_spec(const ChannelParams &params, int d, std::optional<double> noise) {
    switch (params.kind) {
        case ChannelKind::kDepolarizing:
            return Depolarizing{noise.value_or(params.eps)};
        case ChannelKind::kModulo:
            return Modulo{noise.value_or(params.eps), params.topology};
        case ChannelKind::kBlockBias: {
            auto s = resolve_block_size(params, d);
            if (!s) {
                throw Error(
                    ErrorCode::kDimensionMismatch, "no valid block size for d=" + std::to_string(d));
            }
            return BlockBias{params.eps1, noise.value_or(params.eps2), *s};
        }
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown channel kind");
}

std::vector<ThresholdCell> threshold_map(const ChannelParams &params, int d_min, int d_max, int k_min, int k_max) {
    if (d_min < 2 || d_min > d_max || k_min < 2 || k_min > k_max) {
        throw Error(ErrorCode::kInvalidArgument, "empty or invalid d/k range");
    }
    std::vector<ThresholdCell> cells;
    for (int d = d_min; d <= d_max; ++d) {
        for (int k = k_min; k <= k_max; ++k) {
            ThresholdCell cell;
            cell.d = d;
            cell.k = k;
            if (k > d) {
                cells.push_back(cell);
                continue;
            }
            KaryParams kp(d, k);
            switch (params.kind) {
                case ChannelKind::kDepolarizing:
                    cell.valid = true;
                    cell.eps_threshold = depol_threshold_eps(kp);
                    cell.alpha_threshold = depol_alpha_threshold(kp);
                    break;
                case ChannelKind::kModulo: {
                    IndexEncoding encoding = evenly_spaced_encoding(d, k);
                    cell.valid = true;
                    cell.eps_threshold = modulo_threshold_eps(encoding, params.topology);
                    if (modulo_counts(encoding, params.topology).w == 0) {
                        cell.regime = ThresholdRegime::kAlwaysPositive;
                    }
                    break;
                }
                case ChannelKind::kBlockBias: {
                    auto s = resolve_block_size(params, d);
                    if (!s) {
                        break;
                    }
                    Eps2Threshold t = block_threshold_eps2(kp, *s, params.eps1, e_min(d, *s, k));
                    cell.valid = true;
                    cell.eps_threshold = t.eps2;
                    cell.regime = t.regime;
                    break;
                }
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

std::vector<SweepRow> analytic_sweep(
    const ChannelParams &params, int d, int k_min, int k_max, std::span<const double> noise, RateMetric metric) {
    k_max = std::min(k_max, d);
    if (k_min < 2 || k_min > k_max) {
        throw Error(ErrorCode::kInvalidArgument, "empty or invalid k range for d=" + std::to_string(d));
    }
    if (noise.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "no noise values to sweep");
    }
    std::vector<SweepRow> rows;
    for (double value : noise) {
        ChannelSpec spec = make_spec(params, d, value);
        std::size_t best = rows.size();
        double best_rate = -std::numeric_limits<double>::infinity();
        for (int k = k_min; k <= k_max; ++k) {
            SweepRow row;
            row.d = d;
            row.k = k;
            row.noise = value;
            row.stats = analytic_stats(spec, optimal_encoding(params, d, k));
            row.rate_per_signal = rate_of(row.stats, k, RateMetric::kPerSignal);
            row.rate_per_sifted_symbol = rate_of(row.stats, k, RateMetric::kPerSiftedSymbol);
            double r = metric == RateMetric::kPerSignal ? row.rate_per_signal : row.rate_per_sifted_symbol;
            if (r > best_rate) {
                best_rate = r;
                best = rows.size();
            }
            rows.push_back(row);
        }
        rows[best].is_argmax = true;
    }
    return rows;
}

int argmax_k(const ChannelParams &params, int d, double noise, RateMetric metric) {
    const double values[] = {noise};
    for (const SweepRow &row : analytic_sweep(params, d, 2, d, values, metric)) {
        if (row.is_argmax) {
            return row.k;
        }
    }
    return d;
}

std::optional<double> find_crossover(const ChannelParams &params, int d, double lo, double hi, RateMetric metric) {
    auto full_alphabet_wins = [&](double noise) { return argmax_k(params, d, noise, metric) == d; };
    if (!full_alphabet_wins(lo) || full_alphabet_wins(hi)) {
        return std::nullopt;
    }
    for (int iter = 0; iter < 60 && hi - lo > 1e-12; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (full_alphabet_wins(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::round(0.5 * (lo + hi) * 1e4) / 1e4;
}

}  // namespace rseqkd
