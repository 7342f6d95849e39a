#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "../config.hpp"
#include "../errors.hpp"
#include "../exact_oracle.hpp"
#include "../raw.hpp"
#include "../reduction.hpp"
#include "report.hpp"
#include "trace.hpp"
#include "zipf.hpp"

namespace ifq::bench {

enum class Algo { raw, acc, hit };

inline const char* algo_name(Algo a) noexcept {
    switch (a) {
        case Algo::raw: return "raw";
        case Algo::acc: return "acc";
        case Algo::hit: return "hit";
    }
    return "?";
}

struct ZipfSpec {
    double alpha = 1.0;
    uint64_t universe = 1u << 16;
    uint64_t count = 0;
};

struct BenchOptions {
    Algo algo = Algo::hit;
    SketchConfig config;
    std::optional<TraceSource> trace;  // zipf when absent
    ZipfSpec zipf;
    bool oracle = false;
    std::vector<double> interval_pcts = {1.0};
    uint64_t seed = 1;
    uint64_t query_count = 10000;
    uint64_t query_every = 0;  // 0: all queries after the feed
};

namespace detail_run {

using Sketch = std::variant<RawSketch, AccReduction, HitReduction>;

inline Sketch build(Algo algo, const SketchConfig& cfg) {
    switch (algo) {
        case Algo::raw: return RawSketch(validate_config(cfg));
        case Algo::acc: return make_acc_reduction(cfg);
        case Algo::hit: return make_hit_reduction(cfg);
    }
    raise(Errc::config_invalid, "unknown algorithm");
}

inline void sketch_add(Sketch& s, ItemId x) {
    std::visit([&](auto& sk) { sk.add(x); }, s);
}

inline uint64_t sketch_query(Sketch& s, ItemId x, uint64_t i, uint64_t j) {
    return std::visit([&](auto& sk) -> uint64_t { return sk.interval_query(x, i, j); }, s);
}

inline uint64_t sketch_warmup(const Sketch& s, uint64_t window) {
    if (const auto* raw = std::get_if<RawSketch>(&s)) {
        return raw->instance_count() * raw->granule();
    }
    return window;
}

inline size_t sketch_entries(const Sketch& s) {
    return std::visit([](const auto& sk) { return sk.live_entries(); }, s);
}

inline size_t sketch_bytes(const Sketch& s) {
    return std::visit([](const auto& sk) { return sk.bytes_model(); }, s);
}

struct ErrAccum {
    double sum = 0.0, sum_sq = 0.0, max = 0.0;
    uint64_t n = 0;

    void push(double err) {
        sum += err;
        sum_sq += err * err;
        if (err > max) max = err;
        ++n;
    }

    double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
    double rmse() const { return n ? std::sqrt(sum_sq / static_cast<double>(n)) : 0.0; }
};

}  // namespace detail_run

/// Replays a trace (or a seeded Zipf stream) through one sketch, interleaving
/// interval queries per the workload, and reports throughput, live-entry
/// footprint and — with the oracle enabled — observed error. Deterministic
/// given (seed, trace, flags); wall-clock rates are the only nondeterministic
/// report fields. With the oracle on, every query is checked against the
/// exact window and any sandwich-bound violation is tallied (callers treat a
/// nonzero tally as a failed run).
inline Report run_bench(const BenchOptions& opt) {
    using clock = std::chrono::steady_clock;

    ValidatedConfig cfg = validate_config(opt.config);
    Report rep;
    rep.config = cfg;
    rep.algo = algo_name(opt.algo);
    rep.oracle = opt.oracle;
    rep.seed = opt.seed;

    // Materialize the stream.
    std::vector<ItemId> items;
    if (opt.trace) {
        TraceData data = parse_trace(*opt.trace);
        items = std::move(data.items);
        rep.trace_source = opt.trace->path;
        rep.trace_skipped = data.skipped;
        rep.trace_distinct = data.interner.size();
    } else {
        ZipfGenerator gen(opt.zipf.alpha, opt.zipf.universe, opt.seed);
        items.reserve(static_cast<size_t>(opt.zipf.count));
        detail::FlatMap<ItemId, char> distinct;
        for (uint64_t i = 0; i < opt.zipf.count; ++i) {
            ItemId id = gen.next();
            distinct[id] = 1;
            items.push_back(id);
        }
        rep.trace_source = "zipf(alpha=" + std::to_string(opt.zipf.alpha) +
                           ",universe=" + std::to_string(opt.zipf.universe) + ")";
        rep.trace_distinct = distinct.size();
    }
    rep.trace_items = items.size();

    detail_run::Sketch sketch = detail_run::build(opt.algo, opt.config);
    const uint64_t W = cfg.window();
    ExactOracle oracle(W);

    std::mt19937_64 qrng(opt.seed * 0x9e3779b97f4a7c15ULL + 17);
    std::vector<detail_run::ErrAccum> per_pct(opt.interval_pcts.size());
    std::vector<uint64_t> pct_queries(opt.interval_pcts.size(), 0);
    std::vector<double> pct_qtime(opt.interval_pcts.size(), 0.0);
    detail_run::ErrAccum overall;
    uint64_t violations = 0;
    uint64_t queries_done = 0;
    double query_seconds = 0.0;

    auto run_query = [&](size_t pct_idx) {
        double pct = opt.interval_pcts[pct_idx];
        uint64_t size = static_cast<uint64_t>(
            std::llround(static_cast<double>(W) * pct / 100.0));
        if (size == 0) size = 1;
        if (size > W) size = W;
        uint64_t i = std::uniform_int_distribution<uint64_t>(0, W - size)(qrng);
        uint64_t j = i + size;
        ItemId x;
        if (std::uniform_int_distribution<int>(0, 3)(qrng) != 0) {
            uint64_t pos = std::uniform_int_distribution<uint64_t>(1, oracle.size())(qrng);
            x = oracle.at_recency(pos);
        } else {
            x = detail::mix64(qrng()) & 0x7fffffffffffffffULL;  // almost surely absent
        }
        auto t0 = clock::now();
        uint64_t est = detail_run::sketch_query(sketch, x, i, j);
        auto t1 = clock::now();
        double secs = std::chrono::duration<double>(t1 - t0).count();
        pct_qtime[pct_idx] += secs;
        query_seconds += secs;
        ++pct_queries[pct_idx];
        ++queries_done;
        if (opt.oracle) {
            uint64_t exact = oracle.interval_frequency(x, i, j);
            bool ok = est >= exact && cfg.within_error_budget(est - exact);
            if (!ok) ++violations;
            double err = static_cast<double>(est) - static_cast<double>(exact);
            per_pct[pct_idx].push(err);
            overall.push(err);
        }
    };

    // Feed: the first warm-up stretch is untimed, the remainder is the
    // steady-state update measurement. Queries start once every window the
    // sketch might reference is full.
    const uint64_t ready = std::max(W, detail_run::sketch_warmup(sketch, W));
    uint64_t warm = detail_run::sketch_warmup(sketch, W);
    if (warm > items.size()) warm = items.size();
    for (uint64_t i = 0; i < warm; ++i) {
        detail_run::sketch_add(sketch, items[static_cast<size_t>(i)]);
        oracle.add(items[static_cast<size_t>(i)]);
    }
    uint64_t timed = items.size() - warm;
    size_t rr_pct = 0;
    double update_seconds = 0.0;
    {
        auto t0 = clock::now();
        for (uint64_t i = warm; i < items.size(); ++i) {
            detail_run::sketch_add(sketch, items[static_cast<size_t>(i)]);
            oracle.add(items[static_cast<size_t>(i)]);
            if (opt.query_every > 0 && oracle.elements_seen() >= ready &&
                (i - warm + 1) % opt.query_every == 0 && queries_done < opt.query_count) {
                auto tq0 = clock::now();
                run_query(rr_pct);
                rr_pct = (rr_pct + 1) % opt.interval_pcts.size();
                // exclude query time from the update clock
                update_seconds -= std::chrono::duration<double>(clock::now() - tq0).count();
            }
        }
        update_seconds += std::chrono::duration<double>(clock::now() - t0).count();
    }
    rep.updates_per_sec =
        update_seconds > 0 && timed > 0 ? static_cast<double>(timed) / update_seconds : 0.0;

    // Remaining query budget, split evenly over the interval mix.
    if (oracle.elements_seen() >= ready && queries_done < opt.query_count) {
        uint64_t remaining = opt.query_count - queries_done;
        for (size_t p = 0; p < opt.interval_pcts.size(); ++p) {
            uint64_t quota = remaining / opt.interval_pcts.size() +
                             (p < remaining % opt.interval_pcts.size() ? 1 : 0);
            for (uint64_t q = 0; q < quota; ++q) run_query(p);
        }
    }

    rep.queries = queries_done;
    rep.queries_per_sec =
        query_seconds > 0 ? static_cast<double>(queries_done) / query_seconds : 0.0;
    rep.entries = detail_run::sketch_entries(sketch);
    rep.bytes_model = detail_run::sketch_bytes(sketch);
    rep.violations = violations;
    if (opt.oracle && overall.n > 0) {
        rep.rmse = overall.rmse();
        rep.max_err = overall.max;
        rep.mean_err = overall.mean();
    }
    for (size_t p = 0; p < opt.interval_pcts.size(); ++p) {
        SweepRow row;
        row.interval_pct = opt.interval_pcts[p];
        row.queries = pct_queries[p];
        row.queries_per_sec = pct_qtime[p] > 0
                                  ? static_cast<double>(pct_queries[p]) / pct_qtime[p]
                                  : 0.0;
        if (opt.oracle && per_pct[p].n > 0) {
            row.rmse = per_pct[p].rmse();
            row.max_err = per_pct[p].max;
        }
        rep.sweep.push_back(row);
    }
    return rep;
}

}  // namespace ifq::bench
