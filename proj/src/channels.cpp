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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "rseqkd/error.hpp"

namespace rseqkd {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_probability(double p, double upper, const char *name) {
    if (!(p >= 0 && p <= upper)) {
        throw Error(
            ErrorCode::kInvalidArgument,
            std::string(name) + "=" + std::to_string(p) + " outside [0, " + std::to_string(upper) + "]");
    }
}

void check_block_size(int d, int block_size) {
    if (block_size < 2) {
        throw Error(ErrorCode::kInvalidArgument, "block size must be >= 2, got " + std::to_string(block_size));
    }
    if (d % block_size != 0) {
        throw Error(
            ErrorCode::kDimensionMismatch,
            "block size " + std::to_string(block_size) + " does not divide d=" + std::to_string(d));
    }
}

KeptStats finish_stats(double alpha, double error_mass) {
    KeptStats stats;
    if (alpha <= 0) {
        stats.alpha = 0.0;
        stats.q = 0.0;
        stats.no_kept_events = true;
        return stats;
    }
    stats.alpha = alpha;
    stats.q = error_mass / alpha;
    return stats;
}

}  // namespace

void validate_channel(const ChannelSpec &spec, int d) {
    std::visit(
        Overloaded{
            [](const Depolarizing &c) { check_probability(c.eps, 1.0, "eps"); },
            [](const Modulo &c) { check_probability(c.eps, 0.5, "eps"); },
            [d](const BlockBias &c) {
                check_probability(c.eps1, 1.0, "eps1");
                check_probability(c.eps2, 1.0, "eps2");
                check_block_size(d, c.block_size);
            },
        },
        spec);
}

std::string_view channel_name(const ChannelSpec &spec) {
    return std::visit(
        Overloaded{
            [](const Depolarizing &) { return std::string_view("depol"); },
            [](const Modulo &) { return std::string_view("modulo"); },
            [](const BlockBias &) { return std::string_view("block"); },
        },
        spec);
}

KeptStats depol_stats(KaryParams params, double eps) {
    check_probability(eps, 1.0, "eps");
    const double d = params.d();
    const double k = params.k();
    double alpha = (1 - eps) + k * eps / d;
    // Q = (k-1) eps / (d(1-eps) + k eps), written over alpha for a shared guard.
    return finish_stats(alpha, (k - 1) * eps / d);
}

double depol_threshold_eps(KaryParams params) {
    double q = solve_q_threshold(params.k());
    return params.d() * q / ((params.k() - 1) + q * (params.d() - params.k()));
}

double depol_alpha_threshold(KaryParams params) {
    double q = solve_q_threshold(params.k());
    return (params.k() - 1) / ((params.k() - 1) + q * (params.d() - params.k()));
}

KeptStats modulo_stats(const IndexEncoding &encoding, double eps, Topology topology) {
    check_probability(eps, 0.5, "eps");
    AdjacencyCounts counts = modulo_counts(encoding, topology);
    const double k = encoding.k();
    double alpha = 1 - eps / k * static_cast<double>(counts.b);
    return finish_stats(alpha, eps / k * static_cast<double>(counts.w));
}

double modulo_threshold_eps(const IndexEncoding &encoding, Topology topology) {
    AdjacencyCounts counts = modulo_counts(encoding, topology);
    const double k = encoding.k();
    const double w = static_cast<double>(counts.w) / k;
    // Mean degree: 2 on the cycle, smaller on a path containing an endpoint.
    const double degree = static_cast<double>(counts.w + counts.b) / k;
    double q = solve_q_threshold(encoding.k());
    return std::min(0.5, q / (q * degree + w * (1 - q)));
}

BlockPopulations block_populations(int d, int block_size, double eps1, double eps2) {
    check_probability(eps1, 1.0, "eps1");
    check_probability(eps2, 1.0, "eps2");
    check_block_size(d, block_size);
    const double s = block_size;
    BlockPopulations p;
    p.cross_block = eps2 / d;
    p.in_block = (1 - eps2) * eps1 / s + eps2 / d;
    p.correct = (1 - eps2) * (1 - (s - 1) * eps1 / s) + eps2 / d;
    return p;
}

KeptStats block_stats(KaryParams params, int block_size, double eps1, double eps2, double overlap) {
    check_block_size(params.d(), block_size);
    check_probability(eps1, 1.0, "eps1");
    check_probability(eps2, 1.0, "eps2");
    const double s = block_size;
    const double d = params.d();
    const double k = params.k();
    if (!(overlap >= 1 - 1e-12 && overlap <= s + 1e-12)) {
        throw Error(ErrorCode::kInvalidArgument, "block overlap " + std::to_string(overlap) + " outside [1, s]");
    }
    double alpha = (1 - eps2) * (1 - (s - 1) * eps1 / s + eps1 / s * (overlap - 1)) + eps2 * k / d;
    double errors = ((1 - eps2) * eps1 / s + eps2 / d) * (overlap - 1) + eps2 / d * (k - overlap);
    return finish_stats(alpha, errors);
}

Eps2Threshold block_threshold_eps2(KaryParams params, int block_size, double eps1, double overlap) {
    check_block_size(params.d(), block_size);
    check_probability(eps1, 1.0, "eps1");
    const double s = block_size;
    const double d = params.d();
    const double k = params.k();
    const double q = solve_q_threshold(params.k());

    const double k0 = 1 - (s - 1) * eps1 / s + eps1 / s * (overlap - 1);
    const double c0 = eps1 * (overlap - 1) / s;
    const double c1 = -eps1 * (overlap - 1) / s + (k - 1) / d;
    const double denominator = c1 - q * (-k0 + k / d);
    if (std::abs(denominator) < 1e-15) {
        throw Error(ErrorCode::kDegenerate, "degenerate inter-block threshold: denominator vanishes");
    }
    double root = (q * k0 - c0) / denominator;
    if (root < 0) {
        return {0.0, ThresholdRegime::kNoPositiveRate};
    }
    if (root > 1) {
        return {1.0, ThresholdRegime::kAlwaysPositive};
    }
    return {root, ThresholdRegime::kCrossing};
}

KeptStats analytic_stats(const ChannelSpec &spec, const IndexEncoding &encoding) {
    validate_channel(spec, encoding.d());
    KaryParams params(encoding.d(), encoding.k());
    return std::visit(
        Overloaded{
            [&](const Depolarizing &c) { return depol_stats(params, c.eps); },
            [&](const Modulo &c) { return modulo_stats(encoding, c.eps, c.topology); },
            [&](const BlockBias &c) {
                return block_stats(params, c.block_size, c.eps1, c.eps2, block_overlap_of(encoding, c.block_size));
            },
        },
        spec);
}

ConfusionModel::ConfusionModel(int k, Basis basis, std::vector<double> entries)
    : k_(k), basis_(basis), entries_(std::move(entries)) {
    if (k < 2 || entries_.size() != static_cast<std::size_t>(k) * (k + 1)) {
        throw Error(ErrorCode::kDimensionMismatch, "confusion model must have k x (k+1) entries");
    }
    for (int x = 0; x < k_; ++x) {
        double total = 0;
        for (double p : row(x)) {
            if (!(p >= 0)) {
                throw Error(ErrorCode::kDomain, "negative confusion probability in row " + std::to_string(x));
            }
            total += p;
        }
        if (std::abs(total - 1) > 1e-12) {
            throw Error(ErrorCode::kDomain, "confusion row " + std::to_string(x) + " does not sum to 1");
        }
    }
}

std::span<const double> ConfusionModel::row(int x) const {
    return std::span<const double>(entries_).subspan(static_cast<std::size_t>(x) * (k_ + 1), k_ + 1);
}

KeptStats ConfusionModel::implied_stats() const {
    double kept = 0;
    double correct = 0;
    for (int x = 0; x < k_; ++x) {
        kept += 1 - inconclusive(x);
        correct += row(x)[x];
    }
    kept /= k_;
    correct /= k_;
    return finish_stats(kept, kept - correct);
}

ConfusionModel build_confusion_model(const ChannelSpec &spec, const IndexEncoding &encoding, Basis basis) {
    validate_channel(spec, encoding.d());
    const int d = encoding.d();
    const int k = encoding.k();
    const auto indices = encoding.indices();
    std::vector<double> entries(static_cast<std::size_t>(k) * (k + 1), 0.0);
    auto at = [&](int x, int y) -> double & { return entries[static_cast<std::size_t>(x) * (k + 1) + y]; };

    std::visit(
        Overloaded{
            [&](const Depolarizing &c) {
                const double off = c.eps / d;
                for (int x = 0; x < k; ++x) {
                    for (int y = 0; y < k; ++y) {
                        at(x, y) = off;
                    }
                    at(x, x) = (1 - c.eps) + off;
                    at(x, k) = off * (d - k);
                }
            },
            [&](const Modulo &c) {
                for (int x = 0; x < k; ++x) {
                    auto adjacent = neighbours(d, indices[x], c.topology);
                    // Hops missing at path endpoints leave the state in place.
                    at(x, x) = 1 - c.eps * static_cast<double>(adjacent.size());
                    for (int j : adjacent) {
                        int y = encoding.position_of(j);
                        at(x, y < 0 ? k : y) += c.eps;
                    }
                }
            },
            [&](const BlockBias &c) {
                BlockPopulations p = block_populations(d, c.block_size, c.eps1, c.eps2);
                const int s = c.block_size;
                for (int x = 0; x < k; ++x) {
                    int in_block_kept = 0;
                    for (int y = 0; y < k; ++y) {
                        if (y == x) {
                            at(x, y) = p.correct;
                        } else if (indices[y] / s == indices[x] / s) {
                            at(x, y) = p.in_block;
                            ++in_block_kept;
                        } else {
                            at(x, y) = p.cross_block;
                        }
                    }
                    int in_block_lost = (s - 1) - in_block_kept;
                    int cross_block_lost = (d - s) - (k - 1 - in_block_kept);
                    at(x, k) = in_block_lost * p.in_block + cross_block_lost * p.cross_block;
                }
            },
        },
        spec);
    return ConfusionModel(k, basis, std::move(entries));
}

double cross_basis_overlap(int d, int block_size, const IndexEncoding &encoding_x) {
    if (d > kDenseOracleMaxDimension) {
        throw Error(
            ErrorCode::kTooLarge,
            "dense overlap evaluation supports d <= " + std::to_string(kDenseOracleMaxDimension) +
                ", got d=" + std::to_string(d));
    }
    if (encoding_x.d() != d) {
        throw Error(ErrorCode::kDimensionMismatch, "encoding dimension does not match d");
    }
    if (block_size < 1 || d % block_size != 0) {
        throw Error(ErrorCode::kDimensionMismatch, "block size does not divide d");
    }
    using Matrix = Eigen::MatrixXcd;
    using Vector = Eigen::VectorXcd;
    const double two_pi = 2 * std::numbers::pi;

    auto fourier_state = [&](int t) {
        Vector v(d);
        for (int j = 0; j < d; ++j) {
            v(j) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), two_pi * t * j / d);
        }
        return v;
    };

    Matrix projector = Matrix::Zero(d, d);
    for (int t : encoding_x.indices()) {
        Vector v = fourier_state(t);
        projector += v * v.adjoint();
    }

    const int blocks = d / block_size;
    double total = 0;
    for (int t : encoding_x.indices()) {
        Vector v = fourier_state(t);
        Matrix rho = v * v.adjoint();
        Matrix smeared = Matrix::Zero(d, d);
        for (int m = 0; m < blocks; ++m) {
            std::complex<double> population = 0;
            for (int r = 0; r < block_size; ++r) {
                population += rho(m * block_size + r, m * block_size + r);
            }
            for (int r = 0; r < block_size; ++r) {
                smeared(m * block_size + r, m * block_size + r) = population / static_cast<double>(block_size);
            }
        }
        total += (smeared * projector).trace().real();
    }
    return static_cast<double>(block_size) / encoding_x.k() * total;
}

}  // namespace rseqkd
