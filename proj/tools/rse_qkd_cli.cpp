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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "rseqkd/rse_qkd.h"

namespace {

using nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDegenerate = 4;
constexpr int kExitInternal = 1;

struct CliError {
    int exit_code;
    std::string message;
};

[[noreturn]] void usage_error(std::string message) {
    throw CliError{kExitUsage, std::move(message)};
}

void check(rse_status status) {
    if (status == RSE_OK) {
        return;
    }
    int code = kExitInternal;
    switch (status) {
        case RSE_ERR_INVALID_ARGUMENT:
        case RSE_ERR_DOMAIN:
        case RSE_ERR_TOO_LARGE:
            code = kExitUsage;
            break;
        case RSE_ERR_PARSE:
        case RSE_ERR_DIMENSION_MISMATCH:
        case RSE_ERR_NEGATIVE_ENTRY:
        case RSE_ERR_INSUFFICIENT_DATA:
        case RSE_ERR_IO:
            code = kExitData;
            break;
        case RSE_ERR_DEGENERATE:
            code = kExitDegenerate;
            break;
        default:
            break;
    }
    throw CliError{code, rse_last_error()};
}

template <class T, void (*Destroy)(T *)>
struct Deleter {
    void operator()(T *p) const {
        Destroy(p);
    }
};
using Encoding = std::unique_ptr<rse_encoding, Deleter<rse_encoding, rse_encoding_destroy>>;
using Tally = std::unique_ptr<rse_tally, Deleter<rse_tally, rse_tally_destroy>>;
using Counts = std::unique_ptr<rse_counts, Deleter<rse_counts, rse_counts_destroy>>;
using Sweep = std::unique_ptr<rse_sweep, Deleter<rse_sweep, rse_sweep_destroy>>;
using ThresholdMap = std::unique_ptr<rse_threshold_map, Deleter<rse_threshold_map, rse_threshold_map_destroy>>;
using KSweep = std::unique_ptr<rse_k_sweep, Deleter<rse_k_sweep, rse_k_sweep_destroy>>;

// Fixed-point text without a "-0.000000".
std::string fixed(double x, int places) {
    std::string s = fmt::format("{:.{}f}", x, places);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

// JSON number rounded to a fixed number of decimals; null when not finite.
ordered_json rounded(double x, int places = 6) {
    if (!std::isfinite(x)) {
        return nullptr;
    }
    double scale = std::pow(10.0, places);
    double r = std::round(x * scale) / scale;
    return r == 0.0 ? 0.0 : r;
}

// Six significant digits, for quantities spanning many decades.
double significant(double x) {
    return std::stod(fmt::format("{:.5e}", x));
}

int parse_int(const std::string &text, const std::string &flag) {
    try {
        size_t used = 0;
        int v = std::stoi(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception &) {
    }
    usage_error(fmt::format("{}: '{}' is not an integer", flag, text));
}

std::pair<int, int> parse_range(const std::string &text, const std::string &flag) {
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        int v = parse_int(text, flag);
        return {v, v};
    }
    int lo = parse_int(text.substr(0, dots), flag);
    int hi = parse_int(text.substr(dots + 2), flag);
    if (lo > hi) {
        usage_error(fmt::format("{}: empty range '{}'", flag, text));
    }
    return {lo, hi};
}

// Accepts "25", "4,9,16" and "2..10" (and mixtures of the two).
std::vector<int> parse_int_set(const std::string &text, const std::string &flag) {
    std::vector<int> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto [lo, hi] = parse_range(item, flag);
        for (int v = lo; v <= hi; ++v) {
            values.push_back(v);
        }
    }
    if (values.empty()) {
        usage_error(flag + ": no values given");
    }
    return values;
}

const std::map<std::string, rse_channel_kind> kChannels{
    {"depol", RSE_CHANNEL_DEPOLARIZING}, {"modulo", RSE_CHANNEL_MODULO}, {"block", RSE_CHANNEL_BLOCK_BIAS}};
const std::map<std::string, rse_topology> kTopologies{{"cycle", RSE_TOPOLOGY_CYCLE}, {"path", RSE_TOPOLOGY_PATH}};
const std::map<std::string, rse_subset_rule> kRules{{"balanced", RSE_RULE_BALANCED}, {"brute", RSE_RULE_BRUTE_FORCE}};
const std::map<std::string, rse_rate_metric> kMetrics{
    {"per-signal", RSE_METRIC_PER_SIGNAL}, {"per-sifted", RSE_METRIC_PER_SIFTED_SYMBOL}};

const char *regime_name(rse_threshold_regime r) {
    switch (r) {
        case RSE_REGIME_CROSSING:
            return "crossing";
        case RSE_REGIME_NO_POSITIVE_RATE:
            return "no_positive_rate";
        case RSE_REGIME_ALWAYS_POSITIVE:
            return "always_positive";
    }
    return "";
}

struct Options {
    rse_channel_kind channel = RSE_CHANNEL_DEPOLARIZING;
    std::string d;
    std::optional<int> k;
    std::string k_range;
    std::vector<double> eps;
    double eps1 = 0.0;
    std::vector<double> eps2;
    int s = 0;
    rse_topology topology = RSE_TOPOLOGY_CYCLE;
    uint64_t n = 0;
    uint64_t seed = 0;
    rse_subset_rule rule = RSE_RULE_BALANCED;
    std::string out;
    std::string format = "csv";
    rse_rate_metric metric = RSE_METRIC_PER_SIGNAL;
    bool crossover = false;
    std::vector<int> indices;
    std::vector<std::string> paths;
};

rse_channel_params channel_params(const Options &o) {
    rse_channel_params p{};
    p.kind = o.channel;
    p.eps = o.eps.empty() ? 0.0 : o.eps.front();
    p.eps1 = o.eps1;
    p.eps2 = o.eps2.empty() ? 0.0 : o.eps2.front();
    p.block_size = o.s;
    p.topology = o.topology;
    return p;
}

std::string channel_name(rse_channel_kind kind) {
    for (const auto &[name, value] : kChannels) {
        if (value == kind) {
            return name;
        }
    }
    return "";
}

std::vector<double> noise_values(const Options &o) {
    const std::vector<double> &values = o.channel == RSE_CHANNEL_BLOCK_BIAS ? o.eps2 : o.eps;
    if (values.empty()) {
        usage_error(o.channel == RSE_CHANNEL_BLOCK_BIAS ? "--eps2 is required for the block channel"
                                                        : "--eps is required for this channel");
    }
    return values;
}

std::pair<int, int> k_bounds(const Options &o, int d_max) {
    if (!o.k_range.empty()) {
        return parse_range(o.k_range, "--k-range");
    }
    if (o.k) {
        return {*o.k, *o.k};
    }
    return {2, d_max};
}

void emit(const Options &o, const std::string &text) {
    if (o.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!file) {
        throw CliError{kExitData, "cannot open output file " + o.out};
    }
    file << text;
}

void cmd_threshold(const Options &o) {
    std::vector<int> ds = parse_int_set(o.d, "--d");
    int d_max = *std::max_element(ds.begin(), ds.end());
    auto [k_min, k_max] = k_bounds(o, d_max);
    rse_channel_params params = channel_params(o);

    std::string csv = "d,k,eps_threshold,alpha_threshold,regime\n";
    ordered_json rows = ordered_json::array();
    for (int d : ds) {
        rse_threshold_map *raw = nullptr;
        check(rse_threshold_map_build(&params, d, d, k_min, k_max, &raw));
        ThresholdMap map(raw);
        for (size_t i = 0; i < rse_threshold_map_size(map.get()); ++i) {
            rse_threshold_cell c;
            check(rse_threshold_map_cell(map.get(), i, &c));
            ordered_json row{{"d", c.d}, {"k", c.k}};
            if (!c.valid) {
                csv += fmt::format("{},{},,,\n", c.d, c.k);
                row["eps_threshold"] = nullptr;
                row["alpha_threshold"] = nullptr;
                row["regime"] = nullptr;
            } else {
                std::string alpha = c.has_alpha_threshold ? fixed(c.alpha_threshold, 4) : "";
                csv += fmt::format(
                    "{},{},{},{},{}\n", c.d, c.k, fixed(c.eps_threshold, 4), alpha, regime_name(c.regime));
                row["eps_threshold"] = rounded(c.eps_threshold, 4);
                row["alpha_threshold"] = c.has_alpha_threshold ? rounded(c.alpha_threshold, 4) : ordered_json(nullptr);
                row["regime"] = regime_name(c.regime);
            }
            rows.push_back(std::move(row));
        }
    }
    emit(o, o.format == "json" ? rows.dump(2) + "\n" : csv);
}

void cmd_sweep(const Options &o) {
    std::vector<int> ds = parse_int_set(o.d, "--d");
    rse_channel_params params = channel_params(o);
    bool block = o.channel == RSE_CHANNEL_BLOCK_BIAS;

    if (o.crossover) {
        std::string csv = "d,crossover\n";
        ordered_json rows = ordered_json::array();
        for (int d : ds) {
            double value = 0.0;
            int found = 0;
            check(rse_find_crossover(&params, d, 0.0, 0.5, o.metric, &value, &found));
            csv += fmt::format("{},{}\n", d, found ? fixed(value, 4) : "");
            rows.push_back({{"d", d}, {"crossover", found ? rounded(value, 4) : ordered_json(nullptr)}});
        }
        emit(o, o.format == "json" ? rows.dump(2) + "\n" : csv);
        return;
    }

    std::vector<double> noise = noise_values(o);
    std::string csv = block ? "d,k,eps1,eps2,s," : "d,k,eps,";
    csv += "alpha,q,rate_per_signal,rate_per_sifted_symbol,is_argmax\n";
    ordered_json rows = ordered_json::array();
    for (int d : ds) {
        auto [k_min, k_max] = k_bounds(o, d);
        rse_sweep *raw = nullptr;
        check(rse_analytic_sweep(&params, d, k_min, k_max, noise.data(), noise.size(), o.metric, &raw));
        Sweep sweep(raw);
        int s = o.s;
        if (block && s == 0) {
            s = static_cast<int>(std::lround(std::sqrt(d)));
        }
        for (size_t i = 0; i < rse_sweep_size(sweep.get()); ++i) {
            rse_sweep_row r;
            check(rse_sweep_row_get(sweep.get(), i, &r));
            ordered_json row{{"d", r.d}, {"k", r.k}};
            if (block) {
                csv += fmt::format("{},{},{},{},{},", r.d, r.k, fixed(o.eps1, 6), fixed(r.noise, 6), s);
                row["eps1"] = rounded(o.eps1);
                row["eps2"] = rounded(r.noise);
                row["s"] = s;
            } else {
                csv += fmt::format("{},{},{},", r.d, r.k, fixed(r.noise, 6));
                row["eps"] = rounded(r.noise);
            }
            csv += fmt::format(
                "{},{},{},{},{}\n", fixed(r.stats.alpha, 6), fixed(r.stats.q, 6), fixed(r.rate_per_signal, 6),
                fixed(r.rate_per_sifted_symbol, 6), r.is_argmax);
            row["alpha"] = rounded(r.stats.alpha);
            row["q"] = rounded(r.stats.q);
            row["rate_per_signal"] = rounded(r.rate_per_signal);
            row["rate_per_sifted_symbol"] = rounded(r.rate_per_sifted_symbol);
            row["is_argmax"] = r.is_argmax != 0;
            rows.push_back(std::move(row));
        }
    }
    emit(o, o.format == "json" ? rows.dump(2) + "\n" : csv);
}

Encoding simulation_encoding(const Options &o, int d, int k) {
    rse_encoding *raw = nullptr;
    if (!o.indices.empty()) {
        check(rse_encoding_create(d, o.indices.data(), o.indices.size(), &raw));
        if (rse_encoding_size(raw) != k) {
            rse_encoding_destroy(raw);
            usage_error(fmt::format("--indices lists {} states but --k is {}", o.indices.size(), k));
        }
        return Encoding(raw);
    }
    switch (o.channel) {
        case RSE_CHANNEL_DEPOLARIZING:
            check(rse_encoding_truncation(d, k, &raw));
            break;
        case RSE_CHANNEL_MODULO:
            check(rse_encoding_evenly_spaced(d, k, &raw));
            break;
        case RSE_CHANNEL_BLOCK_BIAS: {
            int s = o.s != 0 ? o.s : static_cast<int>(std::lround(std::sqrt(d)));
            check(rse_encoding_balanced_block(d, s, k, &raw));
            break;
        }
    }
    return Encoding(raw);
}

// z-score of an estimate against its analytic value under binomial sampling.
double z_score(double estimate, double expected, uint64_t trials) {
    double se = trials == 0 ? 0.0 : std::sqrt(expected * (1.0 - expected) / static_cast<double>(trials));
    if (se == 0.0) {
        return estimate == expected ? 0.0 : INFINITY;
    }
    return (estimate - expected) / se;
}

void cmd_simulate(const Options &o) {
    if (o.n == 0) {
        usage_error("--n must be a positive number of rounds");
    }
    if (!o.k) {
        usage_error("--k is required");
    }
    int d = parse_int(o.d, "--d");
    Encoding encoding = simulation_encoding(o, d, *o.k);
    rse_channel_params params = channel_params(o);

    rse_sim_config config{};
    config.channel = params;
    config.encoding = encoding.get();
    config.n_rounds = o.n;
    config.seed = o.seed;
    rse_tally *raw = nullptr;
    check(rse_simulate(&config, &raw));
    Tally tally(raw);

    rse_tally_summary summary;
    check(rse_tally_summary_get(tally.get(), &summary));
    rse_kept_stats analytic;
    check(rse_analytic_stats(&params, encoding.get(), &analytic));
    double analytic_rate = 0.0;
    check(rse_rate_per_signal(analytic.alpha, summary.k, analytic.q, &analytic_rate));

    std::vector<int> indices(summary.k);
    check(rse_encoding_indices(encoding.get(), indices.data(), indices.size()));

    ordered_json channel{{"kind", channel_name(o.channel)}};
    switch (o.channel) {
        case RSE_CHANNEL_DEPOLARIZING:
            channel["eps"] = params.eps;
            break;
        case RSE_CHANNEL_MODULO:
            channel["eps"] = params.eps;
            channel["topology"] = o.topology == RSE_TOPOLOGY_PATH ? "path" : "cycle";
            break;
        case RSE_CHANNEL_BLOCK_BIAS:
            channel["eps1"] = params.eps1;
            channel["eps2"] = params.eps2;
            channel["s"] = o.s != 0 ? o.s : static_cast<int>(std::lround(std::sqrt(d)));
            break;
    }

    ordered_json tally_json{{"n_rounds", summary.n_rounds}};
    size_t width = static_cast<size_t>(summary.k) + 1;
    for (rse_basis basis : {RSE_BASIS_Z, RSE_BASIS_X}) {
        std::vector<uint64_t> pairs(static_cast<size_t>(summary.k) * width);
        check(rse_tally_pair_counts(tally.get(), basis, pairs.data(), pairs.size()));
        ordered_json matrix = ordered_json::array();
        for (int x = 0; x < summary.k; ++x) {
            matrix.push_back(std::vector<uint64_t>(pairs.begin() + x * width, pairs.begin() + (x + 1) * width));
        }
        tally_json[basis == RSE_BASIS_Z ? "Z" : "X"] = {
            {"matched", summary.matched[basis]},
            {"kept", summary.kept[basis]},
            {"correct", summary.correct[basis]},
            {"pair_counts", std::move(matrix)}};
    }

    ordered_json report{
        {"rng", rse_rng_algorithm()},
        {"config",
         {{"channel", channel},
          {"d", d},
          {"k", summary.k},
          {"encoding", indices},
          {"n_rounds", o.n},
          {"seed", o.seed},
          {"basis_bias", summary.basis_bias}}},
        {"tally", tally_json}};

    rse_estimate estimate;
    rse_status status = rse_estimate_stats(tally.get(), &estimate);
    if (status == RSE_ERR_INSUFFICIENT_DATA) {
        report["estimate"] = nullptr;
        report["warning"] = rse_last_error();
    } else {
        check(status);
        uint64_t matched = summary.matched[0] + summary.matched[1];
        uint64_t kept = summary.kept[0] + summary.kept[1];
        report["estimate"] = {
            {"alpha", rounded(estimate.stats.alpha)},
            {"alpha_se", rounded(estimate.alpha_se)},
            {"q", rounded(estimate.stats.q)},
            {"q_se", rounded(estimate.q_se)}};
        report["analytic"] = {
            {"alpha", rounded(analytic.alpha)}, {"q", rounded(analytic.q)}, {"rate_per_signal", rounded(analytic_rate)}};
        report["z_scores"] = {
            {"alpha", rounded(z_score(estimate.stats.alpha, analytic.alpha, matched), 4)},
            {"q", rounded(z_score(estimate.stats.q, analytic.q, kept), 4)}};
        double rate = 0.0;
        double rate_se = 0.0;
        check(rse_empirical_rate(tally.get(), &rate, &rate_se));
        report["empirical_rate"] = {{"rate_per_signal", rounded(rate)}, {"se", rounded(rate_se)}};
    }
    emit(o, report.dump(2) + "\n");
}

void cmd_ingest(const Options &o) {
    std::vector<const char *> paths;
    for (const auto &p : o.paths) {
        paths.push_back(p.c_str());
    }
    rse_counts *raw = nullptr;
    check(rse_counts_load_files(paths.data(), paths.size(), &raw));
    Counts counts(raw);
    int d = rse_counts_dimension(counts.get());
    if (!o.d.empty()) {
        int flag_d = parse_int(o.d, "--d");
        if (flag_d != d) {
            throw CliError{kExitData, fmt::format("--d {} does not match d={} in the count files", flag_d, d)};
        }
    }
    int s = o.s;
    if (s == 0) {
        s = static_cast<int>(std::lround(std::sqrt(d)));
        if (s * s != d) {
            usage_error(fmt::format("d={} is not a perfect square; pass --s", d));
        }
    }
    auto [k_min, k_max] = k_bounds(o, d);

    rse_fit_result fit;
    check(rse_fit_block_params(counts.get(), s, &fit));
    rse_k_sweep *raw_sweep = nullptr;
    check(rse_sweep_k(counts.get(), s, k_min, k_max, o.rule, &raw_sweep));
    KSweep sweep(raw_sweep);

    std::vector<std::string> warnings;
    for (size_t i = 0; i < rse_k_sweep_warning_count(sweep.get()); ++i) {
        warnings.emplace_back(rse_k_sweep_warning(sweep.get(), i));
    }
    if (fit.poor_fit) {
        warnings.push_back("fit residual exceeds ten times the shot-noise floor");
    }
    for (const auto &w : warnings) {
        std::cerr << "warning: " << w << "\n";
    }

    std::string csv = fmt::format(
        "# fit eps1={} eps2={} residual={} shot_noise_residual={} poor_fit={}\n", fixed(fit.eps1, 6),
        fixed(fit.eps2, 6), fmt::format("{:.5e}", fit.residual), fmt::format("{:.5e}", fit.shot_noise_residual),
        fit.poor_fit);
    csv += "d,s,k,alpha_z,q_z,alpha_x,q_x,alpha,q,rate_per_signal,is_argmax,fell_back,subset\n";
    ordered_json rows = ordered_json::array();
    for (size_t i = 0; i < rse_k_sweep_size(sweep.get()); ++i) {
        rse_k_sweep_row r;
        check(rse_k_sweep_row_get(sweep.get(), i, &r));
        std::vector<int> subset(r.k);
        check(rse_k_sweep_subset(sweep.get(), i, subset.data(), subset.size()));
        csv += fmt::format(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n", d, s, r.k, fixed(r.z.alpha, 6), fixed(r.z.q, 6),
            fixed(r.x.alpha, 6), fixed(r.x.q, 6), fixed(r.alpha, 6), fixed(r.q, 6), fixed(r.rate_per_signal, 6),
            r.is_argmax, r.fell_back, fmt::join(subset, " "));
        rows.push_back(
            {{"d", d},
             {"s", s},
             {"k", r.k},
             {"alpha_z", rounded(r.z.alpha)},
             {"q_z", rounded(r.z.q)},
             {"alpha_x", rounded(r.x.alpha)},
             {"q_x", rounded(r.x.q)},
             {"alpha", rounded(r.alpha)},
             {"q", rounded(r.q)},
             {"rate_per_signal", rounded(r.rate_per_signal)},
             {"is_argmax", r.is_argmax != 0},
             {"fell_back", r.fell_back != 0},
             {"subset", subset}});
    }
    if (o.format == "json") {
        ordered_json report{
            {"fit",
             {{"eps1", rounded(fit.eps1)},
              {"eps2", rounded(fit.eps2)},
              {"residual", significant(fit.residual)},
              {"shot_noise_residual", significant(fit.shot_noise_residual)},
              {"poor_fit", fit.poor_fit != 0}}},
            {"rows", rows},
            {"warnings", warnings}};
        emit(o, report.dump(2) + "\n");
    } else {
        emit(o, csv);
    }
}

void add_channel_flags(CLI::App *cmd, Options &o) {
    cmd->add_option("--channel", o.channel, "Noise model")->transform(CLI::CheckedTransformer(kChannels));
    cmd->add_option("--eps1", o.eps1, "Block-bias intra-block noise");
    cmd->add_option("--s", o.s, "Block size (default sqrt(d))");
    cmd->add_option("--topology", o.topology, "Modulo hopping graph")->transform(CLI::CheckedTransformer(kTopologies));
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Key rates, thresholds and simulations for reduced-state high-dimensional QKD"};
    app.require_subcommand(1);
    Options o;

    auto *threshold = app.add_subcommand("threshold", "Physical-noise threshold for each (d, k)");
    add_channel_flags(threshold, o);
    threshold->add_option("--d", o.d, "Dimensions: 25, 4,9,16 or 2..32")->required();
    threshold->add_option("--k-range", o.k_range, "Signal-set sizes a..b");
    threshold->add_option("--out", o.out, "Write output to a file");
    threshold->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

    auto *sweep = app.add_subcommand("sweep", "Key rate against signal-set size");
    add_channel_flags(sweep, o);
    sweep->add_option("--d", o.d, "Dimensions: 25, 4,9,16 or 2..32")->required();
    sweep->add_option("--k-range", o.k_range, "Signal-set sizes a..b");
    sweep->add_option("--eps", o.eps, "Noise values (depol, modulo)")->delimiter(',');
    sweep->add_option("--eps2", o.eps2, "Inter-block noise values (block)")->delimiter(',');
    sweep->add_option("--metric", o.metric, "Rate normalisation")->transform(CLI::CheckedTransformer(kMetrics));
    sweep->add_flag("--crossover", o.crossover, "Report the noise where argmax k leaves d");
    sweep->add_option("--out", o.out, "Write output to a file");
    sweep->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

    auto *simulate = app.add_subcommand("simulate", "Monte Carlo protocol run");
    add_channel_flags(simulate, o);
    simulate->add_option("--d", o.d, "Dimension")->required();
    simulate->add_option("--k", o.k, "Signal-set size")->required();
    simulate->add_option("--indices", o.indices, "Explicit signal set")->delimiter(',');
    simulate->add_option("--eps", o.eps, "Noise (depol, modulo)")->expected(1);
    simulate->add_option("--eps2", o.eps2, "Inter-block noise (block)")->expected(1);
    simulate->add_option("--n", o.n, "Rounds")->required();
    simulate->add_option("--seed", o.seed, "RNG seed");
    simulate->add_option("--out", o.out, "Write output to a file");
    simulate->add_option("--format", o.format)->check(CLI::IsMember({"json"}));

    auto *ingest = app.add_subcommand("ingest", "Fit and sweep measured confusion counts");
    ingest->add_option("paths", o.paths, "Count CSV files")->required();
    ingest->add_option("--d", o.d, "Expected dimension");
    ingest->add_option("--s", o.s, "Block size (default sqrt(d))");
    ingest->add_option("--k-range", o.k_range, "Signal-set sizes a..b");
    ingest->add_option("--rule", o.rule, "Subset rule")->transform(CLI::CheckedTransformer(kRules));
    ingest->add_option("--out", o.out, "Write output to a file");
    ingest->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (threshold->parsed()) {
            cmd_threshold(o);
        } else if (sweep->parsed()) {
            cmd_sweep(o);
        } else if (simulate->parsed()) {
            cmd_simulate(o);
        } else {
            cmd_ingest(o);
        }
    } catch (const CliError &e) {
        std::cerr << "error: " << e.message << "\n";
        return e.exit_code;
    }
    return 0;
}
