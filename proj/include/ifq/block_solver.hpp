#pragma once

#include <concepts>
#include <cstdint>
#include <vector>

#include "detail/flat_map.hpp"
#include "item.hpp"

namespace ifq {

/// Count table used at every level of the block solvers. Keys are dense
/// per-frame ids (see FrameInterner), values are block-event multiplicities.
using CountTable = detail::FlatMap<uint32_t, uint32_t>;

struct SolverStats {
    uint64_t table_writes = 0;     // per-table increments during add
    uint64_t table_reads = 0;      // count-table probes during queries
    uint64_t win_queries = 0;
    uint64_t max_win_reads = 0;    // max probes within one window query
    uint64_t max_query_reads = 0;  // max probes within one interval query
};

/// Per-frame short-id interning: raw 64-bit ids are replaced by dense
/// 32-bit indices inside every table; an append-only array per frame maps
/// back. Two frames of arrays are retained, matching table retention.
class FrameInterner {
public:
    static constexpr uint32_t npos = 0xfffffffeu;  // 0xffffffff is FlatMap's empty key

    uint32_t intern(ItemId x) {
        uint32_t* found = idx_[cur_].find(x);
        if (found) return *found;
        uint32_t local = static_cast<uint32_t>(ids_[cur_].size());
        ids_[cur_].push_back(x);
        idx_[cur_][x] = local;
        return local;
    }

    uint32_t find_current(ItemId x) const { return idx_[cur_].get(x, npos); }
    uint32_t find_previous(ItemId x) const { return idx_[cur_ ^ 1].get(x, npos); }

    ItemId resolve_current(uint32_t local) const { return ids_[cur_][local]; }
    ItemId resolve_previous(uint32_t local) const { return ids_[cur_ ^ 1][local]; }

    void rotate() {
        cur_ ^= 1;
        ids_[cur_].clear();
        idx_[cur_].clear();
    }

    size_t live_entries() const { return ids_[0].size() + ids_[1].size(); }
    size_t bytes_model() const { return live_entries() * 20; }  // 8B id + 12B reverse map

private:
    std::vector<ItemId> ids_[2];
    detail::FlatMap<ItemId, uint32_t> idx_[2];
    int cur_ = 0;
};

/// Exact block-interval solvers: maintain a window of the last n completed
/// blocks of a block stream and answer g(x, i, j) — x's total event count in
/// the blocks at recency positions i+1..j (1 = newest completed block) —
/// with no error. The reduction turns any such solver into an approximate
/// element-interval sketch.
template <typename S>
concept BlockIntervalSolver = requires(S s, const S cs, ItemId x, uint64_t i, uint64_t j) {
    { s.add(x) };
    { s.end_block() };
    { s.block_interval_query(x, i, j) } -> std::convertible_to<uint64_t>;
    { cs.window_blocks() } -> std::convertible_to<uint64_t>;
    { cs.frame_blocks() } -> std::convertible_to<uint64_t>;
    { cs.completed_blocks() } -> std::convertible_to<uint64_t>;
    { cs.live_entries() } -> std::convertible_to<size_t>;
    { cs.bytes_model() } -> std::convertible_to<size_t>;
};

}  // namespace ifq
