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

#include "rseqkd/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include "rseqkd/error.hpp"

namespace rseqkd {

namespace {

double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Sampler {
    int k;
    // Cumulative outcome distribution per (basis, sent symbol).
    std::array<std::vector<double>, 2> cumulative;

    Sampler(const ConfusionModel &z, const ConfusionModel &x) : k(z.k()) {
        const ConfusionModel *models[2] = {&z, &x};
        for (int b = 0; b < 2; ++b) {
            auto &cdf = cumulative[b];
            cdf.reserve(static_cast<std::size_t>(k) * (k + 1));
            for (int s = 0; s < k; ++s) {
                double running = 0;
                for (double p : models[b]->row(s)) {
                    running += p;
                    cdf.push_back(running);
                }
                cdf.back() = 1.0;
            }
        }
    }

    int outcome(int basis, int sent, double u) const {
        auto first = cumulative[basis].begin() + static_cast<std::ptrdiff_t>(sent) * (k + 1);
        auto it = std::upper_bound(first, first + k, u);
        return static_cast<int>(it - first);
    }
};

void run_shard(const Sampler &sampler, const SimConfig &config, std::uint64_t shard, Tally &out) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(config.seed),
        static_cast<std::uint32_t>(config.seed >> 32),
        static_cast<std::uint32_t>(shard),
        static_cast<std::uint32_t>(shard >> 32)};
    std::mt19937_64 rng(seq);

    const std::uint64_t begin = shard * kShardRounds;
    const std::uint64_t end = std::min(config.n_rounds, begin + kShardRounds);
    const int k = sampler.k;
    for (std::uint64_t round = begin; round < end; ++round) {
        int alice = uniform01(rng) < config.basis_bias ? 0 : 1;
        int bob = uniform01(rng) < config.basis_bias ? 0 : 1;
        int sent = std::min(k - 1, static_cast<int>(uniform01(rng) * k));
        if (alice != bob) {
            continue;
        }
        int outcome = sampler.outcome(alice, sent, uniform01(rng));
        BasisTally &tally = out.bases[alice];
        ++tally.matched;
        ++tally.pair_counts[static_cast<std::size_t>(sent) * (k + 1) + outcome];
        if (outcome < k) {
            ++tally.kept;
            if (outcome == sent) {
                ++tally.correct;
            }
        }
    }
}

}  // namespace

Tally &Tally::operator+=(const Tally &other) {
    n_rounds += other.n_rounds;
    for (int b = 0; b < 2; ++b) {
        bases[b].matched += other.bases[b].matched;
        bases[b].kept += other.bases[b].kept;
        bases[b].correct += other.bases[b].correct;
        for (std::size_t i = 0; i < bases[b].pair_counts.size(); ++i) {
            bases[b].pair_counts[i] += other.bases[b].pair_counts[i];
        }
    }
    return *this;
}

Tally make_empty_tally(int k, double basis_bias) {
    Tally tally;
    tally.k = k;
    tally.basis_bias = basis_bias;
    for (auto &b : tally.bases) {
        b.pair_counts.assign(static_cast<std::size_t>(k) * (k + 1), 0);
    }
    return tally;
}

unsigned default_thread_count() {
    unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("RSE_QKD_THREADS")) {
        char *end = nullptr;
        long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) {
            return static_cast<unsigned>(value);
        }
    }
    return hardware;
}

Tally simulate(const SimConfig &config, unsigned threads) {
    if (config.n_rounds < 1) {
        throw Error(ErrorCode::kInvalidArgument, "n_rounds must be >= 1");
    }
    if (!(config.basis_bias > 0 && config.basis_bias < 1)) {
        throw Error(ErrorCode::kInvalidArgument, "basis_bias must lie in (0, 1)");
    }
    const int k = config.encoding.k();
    Sampler sampler(
        build_confusion_model(config.spec, config.encoding, Basis::kZ),
        build_confusion_model(config.spec, config.encoding, Basis::kX));

    const std::uint64_t shards = (config.n_rounds + kShardRounds - 1) / kShardRounds;
    if (threads == 0) {
        threads = default_thread_count();
    }
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, shards));

    std::vector<Tally> partial(shards, make_empty_tally(k, config.basis_bias));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t shard = next++; shard < shards; shard = next++) {
            run_shard(sampler, config, shard, partial[shard]);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }

    Tally total = make_empty_tally(k, config.basis_bias);
    for (const Tally &t : partial) {
        total += t;
    }
    total.n_rounds = config.n_rounds;
    return total;
}

Estimate estimate_stats(const Tally &tally) {
    const std::uint64_t matched = tally.matched();
    if (matched == 0) {
        throw Error(ErrorCode::kInsufficientData, "no basis-matched rounds");
    }
    const std::uint64_t kept = tally.kept();
    Estimate e;
    e.stats.alpha = static_cast<double>(kept) / static_cast<double>(matched);
    e.alpha_se = std::sqrt(e.stats.alpha * (1 - e.stats.alpha) / static_cast<double>(matched));
    if (kept == 0) {
        e.stats.q = 0;
        e.stats.no_kept_events = true;
        e.insufficient_data = true;
        return e;
    }
    e.stats.q = 1 - static_cast<double>(tally.correct()) / static_cast<double>(kept);
    e.q_se = std::sqrt(e.stats.q * (1 - e.stats.q) / static_cast<double>(kept));
    return e;
}

double sifted_fraction(const Tally &tally) {
    if (tally.basis_bias == 0.5 || tally.n_rounds == 0) {
        return 0.5;
    }
    return static_cast<double>(tally.matched()) / static_cast<double>(tally.n_rounds);
}

namespace {

// Q above (k-1)/k only drives the rate further negative; clamp into the domain.
double clamp_q(double q, int k) {
    return std::min(q, static_cast<double>(k - 1) / k);
}

}  // namespace

double empirical_rate(const Tally &tally) {
    Estimate e = estimate_stats(tally);
    double q = clamp_q(e.stats.q, tally.k);
    return rate_per_signal(e.stats.alpha, tally.k, q, q, sifted_fraction(tally));
}

double empirical_rate_se(const Tally &tally) {
    Estimate e = estimate_stats(tally);
    const int k = tally.k;
    double q = clamp_q(e.stats.q, k);
    double per_symbol = rate_per_sifted_symbol(k, q, q);
    if (per_symbol <= 0) {
        return 0.0;
    }
    double f = sifted_fraction(tally);
    double d_alpha = f * per_symbol;
    // dh_k/dQ = log2((1-Q)(k-1)/Q); diverges at Q = 0 where the s.e. of Q is 0.
    double d_q = 0;
    if (q > 0) {
        d_q = -2 * f * e.stats.alpha * std::log2((1 - q) * (k - 1) / q);
    }
    return std::sqrt(d_alpha * d_alpha * e.alpha_se * e.alpha_se + d_q * d_q * e.q_se * e.q_se);
}

}  // namespace rseqkd
