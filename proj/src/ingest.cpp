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

#include "rseqkd/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string_view>

#include "rseqkd/error.hpp"

namespace rseqkd {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::string where(const std::string &source, int line) {
    return source + ":" + std::to_string(line) + ": ";
}

CountMatrix parse_header(std::string_view text, const std::string &source, int line) {
    // d=<int>,basis=<Z|X>
    auto comma = text.find(',');
    std::string_view first = trim(text.substr(0, comma));
    std::string_view second = comma == std::string_view::npos ? std::string_view{} : trim(text.substr(comma + 1));
    if (!first.starts_with("d=") || !second.starts_with("basis=")) {
        throw Error(
            ErrorCode::kParse, where(source, line) + "expected header 'd=<int>,basis=<Z|X>'", line, 1);
    }
    std::string_view d_text = first.substr(2);
    int d = 0;
    auto [ptr, ec] = std::from_chars(d_text.data(), d_text.data() + d_text.size(), d);
    if (ec != std::errc() || ptr != d_text.data() + d_text.size() || d < 2) {
        throw Error(ErrorCode::kParse, where(source, line) + "invalid dimension '" + std::string(d_text) + "'", line, 1);
    }
    std::string_view basis = second.substr(6);
    CountMatrix m;
    m.d = d;
    if (basis == "Z") {
        m.basis = Basis::kZ;
    } else if (basis == "X") {
        m.basis = Basis::kX;
    } else {
        throw Error(ErrorCode::kParse, where(source, line) + "basis must be Z or X, got '" + std::string(basis) + "'", line, 2);
    }
    m.counts.reserve(static_cast<std::size_t>(d) * d);
    return m;
}

void parse_row(std::string_view text, CountMatrix &m, int row, const std::string &source, int line) {
    int column = 0;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = text.find(',', start);
        std::string_view field = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
        ++column;
        if (column > m.d) {
            throw Error(
                ErrorCode::kParse,
                where(source, line) + "row " + std::to_string(row + 1) + " has more than " + std::to_string(m.d) +
                    " entries",
                line, column);
        }
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
            throw Error(
                ErrorCode::kParse,
                where(source, line) + "row " + std::to_string(row + 1) + ", column " + std::to_string(column) +
                    ": not an integer '" + std::string(field) + "'",
                line, column);
        }
        if (value < 0) {
            throw Error(
                ErrorCode::kNegativeEntry,
                where(source, line) + "row " + std::to_string(row + 1) + ", column " + std::to_string(column) +
                    ": negative count " + std::to_string(value),
                line, column);
        }
        m.counts.push_back(value);
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    if (column != m.d) {
        throw Error(
            ErrorCode::kParse,
            where(source, line) + "row " + std::to_string(row + 1) + " has " + std::to_string(column) +
                " entries, expected " + std::to_string(m.d),
            line, column);
    }
}

// Row-normalised probabilities; rows with no counts are left at zero.
std::vector<double> normalise_rows(const CountMatrix &m) {
    std::vector<double> p(m.counts.size(), 0.0);
    for (int i = 0; i < m.d; ++i) {
        std::int64_t total = m.row_total(i);
        if (total == 0) {
            continue;
        }
        for (int j = 0; j < m.d; ++j) {
            p[static_cast<std::size_t>(i) * m.d + j] = static_cast<double>(m.at(i, j)) / static_cast<double>(total);
        }
    }
    return p;
}

KeptStats stats_from_rows(const CountMatrix &m, const std::vector<double> &p, std::span<const int> subset) {
    double kept = 0;
    double correct = 0;
    for (int i : subset) {
        if (m.row_total(i) == 0) {
            throw Error(
                ErrorCode::kInsufficientData,
                "insufficient data: no counts for sent index " + std::to_string(i));
        }
        const double *row = &p[static_cast<std::size_t>(i) * m.d];
        for (int j : subset) {
            kept += row[j];
        }
        correct += row[i];
    }
    KeptStats stats;
    const double k = static_cast<double>(subset.size());
    if (kept <= 0) {
        stats.alpha = 0;
        stats.q = 0;
        stats.no_kept_events = true;
        return stats;
    }
    stats.alpha = kept / k;
    stats.q = std::max(0.0, 1 - correct / kept);
    return stats;
}

double two_basis_rate(int k, const KeptStats &z, const KeptStats &x) {
    const double q_max = static_cast<double>(k - 1) / k;
    double alpha = 0.5 * (z.alpha + x.alpha);
    return rate_per_signal(alpha, k, std::min(z.q, q_max), std::min(x.q, q_max), 0.5);
}

struct CategorySums {
    double cells = 0;
    double sum = 0;
    double sum_squares = 0;
};

}  // namespace

std::int64_t CountMatrix::row_total(int sent) const {
    auto first = counts.begin() + static_cast<std::ptrdiff_t>(sent) * d;
    return std::accumulate(first, first + d, std::int64_t{0});
}

std::vector<CountMatrix> parse_count_matrices(std::istream &in, const std::string &source) {
    std::vector<CountMatrix> result;
    std::string line;
    int line_number = 0;
    std::optional<CountMatrix> current;
    int row = 0;
    int header_line = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view text = trim(line);
        if (!current) {
            if (text.empty()) {
                continue;
            }
            current = parse_header(text, source, line_number);
            header_line = line_number;
            row = 0;
            continue;
        }
        if (text.empty()) {
            throw Error(
                ErrorCode::kDimensionMismatch,
                where(source, line_number) + "expected " + std::to_string(current->d) + " data rows after line " +
                    std::to_string(header_line) + ", found " + std::to_string(row),
                line_number, 1);
        }
        parse_row(text, *current, row, source, line_number);
        if (++row == current->d) {
            result.push_back(std::move(*current));
            current.reset();
        }
    }
    if (current) {
        throw Error(
            ErrorCode::kDimensionMismatch,
            where(source, line_number) + "expected " + std::to_string(current->d) + " data rows after line " +
                std::to_string(header_line) + ", found " + std::to_string(row),
            line_number, 1);
    }
    if (result.empty()) {
        throw Error(ErrorCode::kParse, source + ": no count matrix found", line_number, 1);
    }
    return result;
}

CountPair pair_counts(std::vector<CountMatrix> matrices) {
    std::optional<CountMatrix> z;
    std::optional<CountMatrix> x;
    for (auto &m : matrices) {
        auto &slot = m.basis == Basis::kZ ? z : x;
        if (slot) {
            throw Error(
                ErrorCode::kParse, std::string("duplicate ") + (m.basis == Basis::kZ ? "Z" : "X") + " count matrix");
        }
        slot = std::move(m);
    }
    if (!z || !x) {
        throw Error(ErrorCode::kParse, std::string("missing ") + (!z ? "Z" : "X") + " count matrix");
    }
    if (z->d != x->d) {
        throw Error(
            ErrorCode::kDimensionMismatch,
            "Z matrix has d=" + std::to_string(z->d) + " but X matrix has d=" + std::to_string(x->d));
    }
    return {std::move(*z), std::move(*x)};
}

CountPair load_counts(std::istream &in, const std::string &source) {
    return pair_counts(parse_count_matrices(in, source));
}

CountPair load_count_files(const std::vector<std::string> &paths) {
    std::vector<CountMatrix> all;
    for (const auto &path : paths) {
        std::ifstream file(path);
        if (!file) {
            throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
        }
        auto parsed = parse_count_matrices(file, path);
        std::move(parsed.begin(), parsed.end(), std::back_inserter(all));
    }
    return pair_counts(std::move(all));
}

void write_counts(std::ostream &out, const CountMatrix &m) {
    out << "d=" << m.d << ",basis=" << (m.basis == Basis::kZ ? 'Z' : 'X') << '\n';
    for (int i = 0; i < m.d; ++i) {
        for (int j = 0; j < m.d; ++j) {
            if (j > 0) {
                out << ',';
            }
            out << m.at(i, j);
        }
        out << '\n';
    }
}

CountMatrix expected_counts(const ChannelSpec &spec, int d, Basis basis, double exposure) {
    if (!(exposure > 0) || exposure > 1e15) {
        throw Error(ErrorCode::kInvalidArgument, "exposure must lie in (0, 1e15]");
    }
    ConfusionModel model = build_confusion_model(spec, truncation_encoding(d, d), basis);
    CountMatrix m;
    m.d = d;
    m.basis = basis;
    m.counts.reserve(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i) {
        auto row = model.row(i);
        for (int j = 0; j < d; ++j) {
            m.counts.push_back(std::llround(exposure * row[j]));
        }
    }
    return m;
}

CountMatrix sampled_counts(const ChannelSpec &spec, int d, Basis basis, std::uint64_t per_row, std::uint64_t seed) {
    ConfusionModel model = build_confusion_model(spec, truncation_encoding(d, d), basis);
    CountMatrix m;
    m.d = d;
    m.basis = basis;
    m.counts.assign(static_cast<std::size_t>(d) * d, 0);
    for (int i = 0; i < d; ++i) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(i),
            static_cast<std::uint32_t>(basis)};
        std::mt19937_64 rng(seq);
        std::vector<double> cdf;
        double running = 0;
        for (int j = 0; j < d; ++j) {
            running += model.row(i)[j];
            cdf.push_back(running);
        }
        cdf.back() = 1.0;
        for (std::uint64_t n = 0; n < per_row; ++n) {
            double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            auto j = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
            ++m.counts[static_cast<std::size_t>(i) * d + std::min<std::ptrdiff_t>(j, d - 1)];
        }
    }
    return m;
}

KeptStats subset_stats(const CountMatrix &counts, const IndexEncoding &encoding) {
    if (encoding.d() != counts.d) {
        throw Error(
            ErrorCode::kDimensionMismatch,
            "encoding has d=" + std::to_string(encoding.d()) + " but counts have d=" + std::to_string(counts.d));
    }
    return stats_from_rows(counts, normalise_rows(counts), encoding.indices());
}

FitResult fit_block_params(const CountPair &counts, int block_size) {
    const int d = counts.d();
    const int s = block_size;
    if (s < 2 || d % s != 0) {
        throw Error(
            ErrorCode::kDimensionMismatch,
            "block size " + std::to_string(s) + " does not divide d=" + std::to_string(d));
    }

    // Residual is quadratic in each category's model value, so it only needs
    // per-category cell counts and first/second moments of the observations.
    std::array<CategorySums, 3> sums{};
    double inverse_exposure = 0;
    for (const CountMatrix *m : {&counts.z, &counts.x}) {
        std::vector<double> p = normalise_rows(*m);
        for (int i = 0; i < d; ++i) {
            std::int64_t total = m->row_total(i);
            if (total == 0) {
                continue;
            }
            inverse_exposure += 1.0 / static_cast<double>(total);
            for (int j = 0; j < d; ++j) {
                int category = j == i ? 0 : (j / s == i / s ? 1 : 2);
                double o = p[static_cast<std::size_t>(i) * d + j];
                sums[category].cells += 1;
                sums[category].sum += o;
                sums[category].sum_squares += o * o;
            }
        }
    }
    if (inverse_exposure == 0) {
        throw Error(ErrorCode::kInsufficientData, "insufficient data: all count rows are empty");
    }

    auto residual = [&](double eps1, double eps2) {
        BlockPopulations pop = block_populations(d, s, eps1, eps2);
        const double model[3] = {pop.correct, pop.in_block, pop.cross_block};
        double r = 0;
        for (int c = 0; c < 3; ++c) {
            r += sums[c].sum_squares - 2 * model[c] * sums[c].sum + sums[c].cells * model[c] * model[c];
        }
        return std::max(0.0, r);
    };

    auto search = [&](double lo1, double hi1, double lo2, double hi2, double step, double &best1, double &best2) {
        double best = std::numeric_limits<double>::infinity();
        const int n1 = static_cast<int>(std::lround((hi1 - lo1) / step));
        const int n2 = static_cast<int>(std::lround((hi2 - lo2) / step));
        for (int a = 0; a <= n1; ++a) {
            double e1 = std::clamp(lo1 + a * step, 0.0, 1.0);
            for (int b = 0; b <= n2; ++b) {
                double e2 = std::clamp(lo2 + b * step, 0.0, 1.0);
                double r = residual(e1, e2);
                if (r < best) {
                    best = r;
                    best1 = e1;
                    best2 = e2;
                }
            }
        }
        return best;
    };

    double eps1 = 0;
    double eps2 = 0;
    search(0.0, 1.0, 0.0, 1.0, kFitGridStep, eps1, eps2);
    double lo1 = std::max(0.0, eps1 - kFitGridStep);
    double lo2 = std::max(0.0, eps2 - kFitGridStep);
    double hi1 = std::min(1.0, eps1 + kFitGridStep);
    double hi2 = std::min(1.0, eps2 + kFitGridStep);
    FitResult fit;
    fit.residual = search(lo1, hi1, lo2, hi2, kFitRefineStep, fit.eps1, fit.eps2);

    BlockPopulations pop = block_populations(d, s, fit.eps1, fit.eps2);
    double per_row_variance = pop.correct * (1 - pop.correct) + (s - 1) * pop.in_block * (1 - pop.in_block) +
                              (d - s) * pop.cross_block * (1 - pop.cross_block);
    fit.shot_noise_residual = per_row_variance * inverse_exposure;
    fit.poor_fit = fit.residual > 10 * fit.shot_noise_residual;
    return fit;
}

KSweep sweep_k(const CountPair &counts, int block_size, int k_min, int k_max, SubsetRule rule) {
    const int d = counts.d();
    if (k_min < 2 || k_max > d || k_min > k_max) {
        throw Error(
            ErrorCode::kInvalidArgument,
            "k range " + std::to_string(k_min) + ".." + std::to_string(k_max) + " invalid for d=" +
                std::to_string(d));
    }
    if (block_size < 1 || d % block_size != 0) {
        throw Error(
            ErrorCode::kDimensionMismatch,
            "block size " + std::to_string(block_size) + " does not divide d=" + std::to_string(d));
    }
    const std::vector<double> pz = normalise_rows(counts.z);
    const std::vector<double> px = normalise_rows(counts.x);

    KSweep sweep;
    for (int k = k_min; k <= k_max; ++k) {
        SweepEntry entry;
        entry.k = k;
        bool brute = rule == SubsetRule::kBruteForce;
        if (brute && binomial(d, k) > kEnumerationCap) {
            brute = false;
            entry.fell_back = true;
            sweep.warnings.push_back(
                "k=" + std::to_string(k) + ": C(" + std::to_string(d) + "," + std::to_string(k) +
                ") exceeds the enumeration cap; using balanced subset");
        }
        if (brute) {
            double best = -1;
            for_each_k_subset(d, k, [&](std::span<const int> subset) {
                KeptStats z = stats_from_rows(counts.z, pz, subset);
                KeptStats x = stats_from_rows(counts.x, px, subset);
                double rate = two_basis_rate(k, z, x);
                if (rate > best) {
                    best = rate;
                    entry.z = z;
                    entry.x = x;
                    entry.rate = rate;
                    entry.subset.assign(subset.begin(), subset.end());
                }
                return true;
            });
        } else {
            IndexEncoding encoding = balanced_block_encoding(d, block_size, k);
            entry.subset.assign(encoding.indices().begin(), encoding.indices().end());
            entry.z = stats_from_rows(counts.z, pz, entry.subset);
            entry.x = stats_from_rows(counts.x, px, entry.subset);
            entry.rate = two_basis_rate(k, entry.z, entry.x);
        }
        entry.alpha = 0.5 * (entry.z.alpha + entry.x.alpha);
        entry.q = 0.5 * (entry.z.q + entry.x.q);
        sweep.rows.push_back(std::move(entry));
    }
    for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
        if (sweep.rows[i].rate > sweep.rows[sweep.argmax].rate) {
            sweep.argmax = i;
        }
    }
    sweep.rows[sweep.argmax].is_argmax = true;
    return sweep;
}

}  // namespace rseqkd
