// bench: replay a trace (or synthetic Zipf stream) through one of the
// interval-frequency sketches and emit a machine-readable report.
//
// Examples:
//   bench --algo hit --epsilon 2^-6 --window 2^13 --zipf 1.0 --count 200000 \
//         --oracle --out report.json
//   bench --algo acc --k 4 --epsilon 2^-8 --window 2^20 --trace flows.txt \
//         --interval-pct 1,5,10,15,30,50 --out report.json
//
// Exit codes: 0 success, 1 configuration or trace error, 2 oracle-mode
// sandwich-bound violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ifq/bench/runner.hpp"

namespace {

// Accepts "2^13", "2^-6", or a plain decimal.
double parse_pow2(const std::string& text) {
    if (text.rfind("2^", 0) == 0) {
        int exp = std::stoi(text.substr(2));
        return std::ldexp(1.0, exp);
    }
    return std::stod(text);
}

std::vector<double> parse_pct_list(const std::string& text) {
    std::vector<double> out;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find(',', start);
        std::string part = text.substr(start, end == std::string::npos ? std::string::npos
                                                                       : end - start);
        if (!part.empty()) out.push_back(std::stod(part));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"interval-frequency sketch benchmark"};
    app.name("bench");

    std::string algo_str;
    std::string epsilon_str, window_str;
    uint32_t k = 1;
    std::string trace_path;
    uint32_t csv_col = 0;
    std::string csv_delim = ",";
    double zipf_alpha = -1.0;
    uint64_t universe = 1u << 16;
    uint64_t count = 0;
    bool oracle = false;
    std::string pct_list = "1";
    uint64_t seed = 1;
    std::string block_mode = "standard";
    bool deamortize = false;
    uint64_t query_count = 10000;
    uint64_t query_every = 0;
    std::string out_path;

    app.add_option("--algo", algo_str, "sketch to run: raw|acc|hit")->required();
    app.add_option("--epsilon", epsilon_str, "error parameter, e.g. 2^-6 or 0.015625")
        ->required();
    app.add_option("--window", window_str, "maximal window W, e.g. 2^13 or 8192")->required();
    app.add_option("--k", k, "ACC levels (acc only)");
    app.add_option("--trace", trace_path, "token trace path, '-' for stdin");
    app.add_option("--csv-col", csv_col, "1-based CSV column to extract (0 = whole line)");
    app.add_option("--csv-delim", csv_delim, "CSV delimiter (default ',')");
    app.add_option("--zipf", zipf_alpha, "synthetic Zipf skew alpha (no trace given)");
    app.add_option("--universe", universe, "synthetic universe size");
    app.add_option("--count", count, "synthetic stream length");
    app.add_flag("--oracle", oracle, "check every query against the exact window");
    app.add_option("--interval-pct", pct_list, "interval sizes as %% of W, comma list");
    app.add_option("--seed", seed, "workload RNG seed");
    app.add_option("--block-mode", block_mode, "standard|reduced");
    app.add_flag("--deamortize", deamortize, "spread solver inserts across blocks");
    app.add_option("--queries", query_count, "total interval queries to issue");
    app.add_option("--query-every", query_every, "issue one query per N updates (0: at end)");
    app.add_option("--out", out_path, "report output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        ifq::bench::BenchOptions opt;
        if (algo_str == "raw")
            opt.algo = ifq::bench::Algo::raw;
        else if (algo_str == "acc")
            opt.algo = ifq::bench::Algo::acc;
        else if (algo_str == "hit")
            opt.algo = ifq::bench::Algo::hit;
        else
            ifq::raise(ifq::Errc::config_invalid, "unknown --algo " + algo_str);

        opt.config.window = static_cast<uint64_t>(parse_pow2(window_str));
        opt.config.epsilon = parse_pow2(epsilon_str);
        opt.config.acc_levels = k;
        if (block_mode == "standard")
            opt.config.block_mode = ifq::BlockMode::standard;
        else if (block_mode == "reduced")
            opt.config.block_mode = ifq::BlockMode::reduced;
        else
            ifq::raise(ifq::Errc::config_invalid, "unknown --block-mode " + block_mode);
        opt.config.deamortize = deamortize;

        if (!trace_path.empty()) {
            ifq::bench::TraceSource src;
            src.path = trace_path;
            src.csv_column = csv_col;
            src.delimiter = csv_delim.empty() ? ',' : csv_delim[0];
            opt.trace = src;
        } else {
            if (zipf_alpha < 0) zipf_alpha = 1.0;
            if (count == 0)
                ifq::raise(ifq::Errc::config_invalid,
                           "either --trace or --zipf/--count must be given");
            opt.zipf = {zipf_alpha, universe, count};
        }
        opt.oracle = oracle;
        opt.interval_pcts = parse_pct_list(pct_list);
        if (opt.interval_pcts.empty()) opt.interval_pcts = {1.0};
        opt.seed = seed;
        opt.query_count = query_count;
        opt.query_every = query_every;

        ifq::bench::Report rep = ifq::bench::run_bench(opt);

        std::ofstream out(out_path);
        if (!out) ifq::raise(ifq::Errc::trace_unreadable, "cannot write " + out_path);
        out << rep.to_json().dump(2) << "\n";

        std::printf("algo=%s W=%llu eps=%g s=%llu n=%llu\n", rep.algo.c_str(),
                    (unsigned long long)rep.config.base.window, rep.config.base.epsilon,
                    (unsigned long long)rep.config.block_size,
                    (unsigned long long)rep.config.window_blocks);
        std::printf("items=%llu distinct=%llu skipped=%llu\n",
                    (unsigned long long)rep.trace_items, (unsigned long long)rep.trace_distinct,
                    (unsigned long long)rep.trace_skipped);
        std::printf("updates/s=%.3g queries/s=%.3g entries=%llu bytes=%llu\n",
                    rep.updates_per_sec, rep.queries_per_sec, (unsigned long long)rep.entries,
                    (unsigned long long)rep.bytes_model);
        if (rep.oracle) {
            std::printf("rmse=%.4g max_err=%.4g mean_err=%.4g violations=%llu (budget %g)\n",
                        rep.rmse, rep.max_err, rep.mean_err, (unsigned long long)rep.violations,
                        rep.config.error_budget());
        }
        if (rep.oracle && rep.violations > 0) {
            std::fprintf(stderr, "BoundViolation: %llu queries broke the sandwich bound\n",
                         (unsigned long long)rep.violations);
            return 2;
        }
        return 0;
    } catch (const ifq::SketchError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
