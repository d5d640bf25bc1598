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

#ifndef RSEQKD_ANALYSIS_HPP
#define RSEQKD_ANALYSIS_HPP

#include <optional>
#include <span>
#include <vector>

#include "rseqkd/channels.hpp"

namespace rseqkd {

enum class ChannelKind { kDepolarizing, kModulo, kBlockBias };

/// Channel family plus the parameters held fixed while another is swept.
/// `block_size` == 0 means "sqrt(d)" (defined only for perfect squares).
struct ChannelParams {
    ChannelKind kind = ChannelKind::kDepolarizing;
    double eps = 0.0;   // depolarizing / modulo noise
    double eps1 = 0.0;  // block-bias intra-block noise
    double eps2 = 0.0;  // block-bias inter-block noise
    int block_size = 0;
    Topology topology = Topology::kCycle;
};

enum class RateMetric { kPerSignal, kPerSiftedSymbol };

/// Block size used for dimension d, or nullopt when it is not defined or does not divide d.
std::optional<int> resolve_block_size(const ChannelParams &params, int d);

/// Encoding each channel is analysed with: truncation (depolarizing), evenly
/// spaced (modulo), balanced block occupancy (block bias).
IndexEncoding optimal_encoding(const ChannelParams &params, int d, int k);

/// Builds the ChannelSpec, with the swept noise value substituted for eps
/// (depolarizing, modulo) or eps2 (block bias).
ChannelSpec make_spec(const ChannelParams &params, int d, std::optional<double> noise = std::nullopt);

struct ThresholdCell {
    int d = 0;
    int k = 0;
    bool valid = false;  // false for k > d or an undefined block size
    double eps_threshold = 0.0;
    std::optional<double> alpha_threshold;  // depolarizing only
    ThresholdRegime regime = ThresholdRegime::kCrossing;
};

/// Physical-noise threshold for every (d, k) in the ranges, rows ordered by d then k.
std::vector<ThresholdCell> threshold_map(const ChannelParams &params, int d_min, int d_max, int k_min, int k_max);

struct SweepRow {
    int d = 0;
    int k = 0;
    double noise = 0.0;  // eps, or eps2 for block bias
    KeptStats stats;
    double rate_per_signal = 0.0;
    double rate_per_sifted_symbol = 0.0;
    bool is_argmax = false;
};

/// Rates for k in [k_min, min(k_max, d)] at each noise value, using optimal
/// encodings. One row per (noise, k); exactly one argmax per noise value
/// (smallest k on ties) under `metric`.
std::vector<SweepRow> analytic_sweep(
    const ChannelParams &params, int d, int k_min, int k_max, std::span<const double> noise,
    RateMetric metric = RateMetric::kPerSignal);

/// k maximising the rate at the given noise over k = 2..d.
int argmax_k(const ChannelParams &params, int d, double noise, RateMetric metric = RateMetric::kPerSignal);

/// Noise value where the rate-optimal alphabet stops being the full one
/// (argmax k == d below, < d above), located by bisection and rounded to 4
/// decimals. nullopt when the predicate does not change across [lo, hi].
std::optional<double> find_crossover(
    const ChannelParams &params, int d, double lo, double hi, RateMetric metric = RateMetric::kPerSignal);

}  // namespace rseqkd

#endif
