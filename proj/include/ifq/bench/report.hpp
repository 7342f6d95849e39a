#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "../config.hpp"
#include "../detail/hash.hpp"

namespace ifq::bench {

struct SweepRow {
    double interval_pct = 0.0;
    uint64_t queries = 0;
    double queries_per_sec = 0.0;  // timing: excluded from the determinism hash
    double rmse = -1.0;            // -1 encodes "oracle off" -> null in JSON
    double max_err = -1.0;
};

/// Benchmark result. Field names are normative for downstream plotting:
/// config, algo, trace, updates_per_sec, queries_per_sec, entries,
/// bytes_model, rmse, max_err, sweep.
struct Report {
    ValidatedConfig config{};
    std::string algo;
    std::string trace_source;
    uint64_t trace_items = 0;
    uint64_t trace_skipped = 0;
    uint64_t trace_distinct = 0;
    uint64_t seed = 0;

    double updates_per_sec = 0.0;
    double queries_per_sec = 0.0;
    uint64_t queries = 0;
    uint64_t entries = 0;
    uint64_t bytes_model = 0;
    double rmse = -1.0;
    double max_err = -1.0;
    double mean_err = -1.0;
    uint64_t violations = 0;
    bool oracle = false;
    std::vector<SweepRow> sweep;

    nlohmann::json to_json() const {
        nlohmann::json j = deterministic_json();
        j["updates_per_sec"] = updates_per_sec;
        j["queries_per_sec"] = queries_per_sec;
        auto& sw = j["sweep"];
        for (size_t r = 0; r < sweep.size(); ++r) {
            sw[r]["queries_per_sec"] = sweep[r].queries_per_sec;
        }
        j["determinism_hash"] = determinism_hash();
        return j;
    }

    /// Everything except wall-clock rates; two runs with equal seed, trace
    /// and flags must produce byte-identical output here.
    nlohmann::json deterministic_json() const {
        nlohmann::json j;
        j["config"] = {
            {"window", config.base.window},
            {"epsilon", config.base.epsilon},
            {"epsilon_inverse", config.epsilon_inverse},
            {"k", config.base.acc_levels},
            {"block_mode", block_mode_name(config.base.block_mode)},
            {"deamortize", config.base.deamortize},
            {"block_size", config.block_size},
            {"blocks_per_frame", config.window_blocks},
            {"max_block_events", config.max_block_events},
        };
        j["algo"] = algo;
        j["trace"] = {
            {"source", trace_source},
            {"items", trace_items},
            {"skipped", trace_skipped},
            {"distinct", trace_distinct},
        };
        j["seed"] = seed;
        j["queries"] = queries;
        j["entries"] = entries;
        j["bytes_model"] = bytes_model;
        j["oracle"] = oracle;
        j["rmse"] = rmse < 0 ? nlohmann::json() : nlohmann::json(rmse);
        j["max_err"] = max_err < 0 ? nlohmann::json() : nlohmann::json(max_err);
        j["mean_err"] = mean_err < 0 ? nlohmann::json() : nlohmann::json(mean_err);
        j["violations"] = violations;
        auto& sw = j["sweep"] = nlohmann::json::array();
        for (const auto& row : sweep) {
            sw.push_back({
                {"interval_pct", row.interval_pct},
                {"queries", row.queries},
                {"rmse", row.rmse < 0 ? nlohmann::json() : nlohmann::json(row.rmse)},
                {"max_err", row.max_err < 0 ? nlohmann::json() : nlohmann::json(row.max_err)},
            });
        }
        return j;
    }

    std::string determinism_hash() const {
        std::string canon = deterministic_json().dump();
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(detail::fnv1a64(canon.data(), canon.size())));
        return std::string(buf);
    }
};

}  // namespace ifq::bench
