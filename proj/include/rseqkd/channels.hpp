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

#ifndef RSEQKD_CHANNELS_HPP
#define RSEQKD_CHANNELS_HPP

#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "rseqkd/encodings.hpp"
#include "rseqkd/entropy_rates.hpp"

namespace rseqkd {

/// (1-eps) rho + eps 1/d, 0 <= eps <= 1.
struct Depolarizing {
    double eps = 0.0;
};

/// Nearest-neighbour hopping with probability eps each way, 0 <= eps <= 1/2.
struct Modulo {
    double eps = 0.0;
    Topology topology = Topology::kCycle;
};

/// Intra-block depolarisation (eps1) on contiguous blocks of `block_size`,
/// followed by global depolarisation (eps2).
struct BlockBias {
    double eps1 = 0.0;
    double eps2 = 0.0;
    int block_size = 2;
};

using ChannelSpec = std::variant<Depolarizing, Modulo, BlockBias>;

/// Throws if the channel parameters are invalid for dimension d.
void validate_channel(const ChannelSpec &spec, int d);
std::string_view channel_name(const ChannelSpec &spec);

enum class Basis { kZ, kX };

KeptStats depol_stats(KaryParams params, double eps);
double depol_threshold_eps(KaryParams params);
double depol_alpha_threshold(KaryParams params);

KeptStats modulo_stats(const IndexEncoding &encoding, double eps, Topology topology);
/// Largest eps with nonnegative rate for a symmetric design. Saturates at 1/2
/// (the channel's physical limit) when no internal adjacency exists.
double modulo_threshold_eps(const IndexEncoding &encoding, Topology topology);

struct BlockPopulations {
    double correct = 1.0;      // 1 state
    double in_block = 0.0;     // each of s-1 states
    double cross_block = 0.0;  // each of d-s states
};

BlockPopulations block_populations(int d, int block_size, double eps1, double eps2);
KeptStats block_stats(KaryParams params, int block_size, double eps1, double eps2, double overlap);

enum class ThresholdRegime {
    kCrossing,        // rate changes sign at the reported value
    kNoPositiveRate,  // rate <= 0 already at zero noise; reported value is 0
    kAlwaysPositive,  // no sign change in the admissible range; reported value is the range end
};

struct Eps2Threshold {
    double eps2 = 0.0;
    ThresholdRegime regime = ThresholdRegime::kCrossing;
};

/// Inter-block noise threshold at fixed eps1. Throws ErrorCode::kDegenerate if
/// the closed form's denominator vanishes.
Eps2Threshold block_threshold_eps2(KaryParams params, int block_size, double eps1, double overlap);

/// Closed-form (alpha, Q) for any channel and encoding.
KeptStats analytic_stats(const ChannelSpec &spec, const IndexEncoding &encoding);

/// Per-sent-symbol outcome distribution over the k signal outcomes plus an
/// inconclusive outcome stored in the last column.
class ConfusionModel {
   public:
    ConfusionModel(int k, Basis basis, std::vector<double> entries);

    int k() const noexcept {
        return k_;
    }
    Basis basis() const noexcept {
        return basis_;
    }
    /// Row `x` has k+1 entries; entry k is the inconclusive probability.
    std::span<const double> row(int x) const;
    double inconclusive(int x) const {
        return row(x)[k_];
    }
    KeptStats implied_stats() const;

   private:
    int k_;
    Basis basis_;
    std::vector<double> entries_;
};

ConfusionModel build_confusion_model(const ChannelSpec &spec, const IndexEncoding &encoding, Basis basis = Basis::kZ);

inline constexpr int kDenseOracleMaxDimension = 64;

/// Overlap of Fourier-basis signals under the Z-anchored block map,
/// (s/k) sum_t Tr(Phi_block(|mu_t><mu_t|) P_X), by dense evaluation. d <= 64.
double cross_basis_overlap(int d, int block_size, const IndexEncoding &encoding_x);

}  // namespace rseqkd

#endif
