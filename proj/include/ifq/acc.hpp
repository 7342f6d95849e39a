#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "block_solver.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "item.hpp"

namespace ifq {

/// Approximate Cumulative Count solver, k levels of segment tables.
///
/// The block stream is cut into frames of `frame_blocks` blocks. Level-l
/// segments tile the frame in runs of d^l blocks (d ~ n^(1/k)); when the
/// block at 1-based frame offset `c` closes, the single level
/// l* = min(k-1, nu_d(c)) publishes Tables[l*][c], a snapshot of the counts
/// accumulated since that segment's enclosing level-(l*+1) segment started
/// (from the frame start when l* = k-1). incTables hold the running counts
/// so a publish is one table copy; ghostTables retain the displaced
/// previous-frame table per level for queries that reach past slots this
/// frame already overwrote.
///
/// A prefix count "frame start through block b" reads one published table
/// per nonzero base-d digit of b, low level to high, so at most k probes;
/// a window query is at most two prefixes plus the previous frame's total,
/// 2k+1 probes. Updates write the k incomplete tables and nothing else.
class AccSketch {
    static constexpr uint64_t kOverflowCap = ~0ULL;

public:
    AccSketch(uint64_t window_blocks, uint32_t levels) : n_window_(window_blocks), k_(levels) {
        if (window_blocks == 0) raise(Errc::config_invalid, "window_blocks must be positive");
        if (levels == 0) raise(Errc::config_invalid, "levels must be positive");
        d_ = detail::root_round(window_blocks, levels);
        if (d_ < 2) raise(Errc::bad_acc_arity, "round(n^(1/k)) < 2");
        if (k_ == 1) d_ = window_blocks;  // single flat level; arity is moot

        dpow_.assign(k_ + 1, 1);
        for (uint32_t l = 1; l <= k_; ++l) {
            dpow_[l] = (dpow_[l - 1] > kOverflowCap / d_) ? kOverflowCap : dpow_[l - 1] * d_;
        }
        // Pad the frame to whole top-level segments so the previous frame's
        // total is always a single level-(k-1) table.
        uint64_t top = dpow_[k_ - 1];
        n_frame_ = (k_ == 1) ? n_window_ : top * ((n_window_ + top - 1) / top);

        tables_.assign(k_, std::vector<CountTable>(static_cast<size_t>(n_frame_) + 1));
        inc_.assign(k_, CountTable{});
        ghost_.assign(k_, CountTable{});
    }

    void add(ItemId x) {
        uint32_t local = intern_.intern(x);
        for (uint32_t l = 0; l < k_; ++l) inc_[l][local]++;
        stats_.table_writes += k_;
    }

    void end_block() {
        uint64_t c = offset_ + 1;  // 1-based offset of the block being closed
        uint32_t l = 0;
        while (l + 1 < k_ && c % dpow_[l + 1] == 0) {
            inc_[l].clear();
            ghost_[l].clear();
            ++l;
        }
        ghost_[l] = std::move(tables_[l][static_cast<size_t>(c)]);
        if (c == n_frame_) {
            tables_[l][static_cast<size_t>(c)] = std::move(inc_[k_ - 1]);
            inc_[k_ - 1].clear();
            for (uint32_t g = 0; g < k_; ++g) ghost_[g].clear();
            intern_.rotate();
            offset_ = 0;
        } else {
            tables_[l][static_cast<size_t>(c)] = inc_[l];  // segment continues accumulating
            offset_ = c;
        }
        ++completed_;
    }

    /// Event count of x over the last w completed blocks, exact.
    uint64_t window_query(ItemId x, uint64_t w) {
        if (w > n_window_ || w > completed_)
            raise(Errc::bad_block_index, "window of " + std::to_string(w) + " blocks unavailable");
        ++stats_.win_queries;
        uint64_t before = stats_.table_reads;
        uint64_t result = window_query_inner(x, w);
        uint64_t reads = stats_.table_reads - before;
        if (reads > stats_.max_win_reads) stats_.max_win_reads = reads;
        return result;
    }

    /// g(x, i, j): events in completed blocks at recencies i+1..j, exact.
    uint64_t block_interval_query(ItemId x, uint64_t i, uint64_t j) {
        if (i > j || j > n_window_)
            raise(Errc::bad_block_index, "bad block interval (" + std::to_string(i) + ", " +
                                             std::to_string(j) + "]");
        if (j > completed_)
            raise(Errc::bad_block_index, "only " + std::to_string(completed_) +
                                             " blocks completed");
        uint64_t before = stats_.table_reads;
        uint64_t result;
        if (i == j)
            result = 0;
        else if (i == 0)
            result = window_query(x, j);
        else
            result = window_query(x, j) - window_query(x, i);
        uint64_t reads = stats_.table_reads - before;
        if (reads > stats_.max_query_reads) stats_.max_query_reads = reads;
        return result;
    }

    uint64_t window_blocks() const noexcept { return n_window_; }
    uint64_t frame_blocks() const noexcept { return n_frame_; }
    uint64_t completed_blocks() const noexcept { return completed_; }
    uint32_t levels() const noexcept { return k_; }
    uint64_t arity() const noexcept { return d_; }

    const SolverStats& stats() const noexcept { return stats_; }
    void reset_stats() { stats_ = SolverStats{}; }

    /// Count-table entries only (published + incomplete + ghost).
    size_t table_entries() const {
        size_t total = 0;
        for (uint32_t l = 0; l < k_; ++l) {
            for (const auto& t : tables_[l]) total += t.size();
            total += inc_[l].size() + ghost_[l].size();
        }
        return total;
    }

    size_t live_entries() const { return table_entries() + intern_.live_entries(); }

    size_t bytes_model() const {
        return table_entries() * 8 + intern_.bytes_model();  // 4B key + 4B count per entry
    }

    /// Every distinct id with a live table entry, resolved to raw ItemIds.
    template <typename Fn>
    void for_each_live_item(Fn&& fn) const {
        auto emit_table = [&](const CountTable& t, bool current_frame) {
            t.for_each([&](uint32_t local, uint32_t) {
                fn(current_frame ? intern_.resolve_current(local)
                                 : intern_.resolve_previous(local));
            });
        };
        for (uint32_t l = 0; l < k_; ++l) {
            for (size_t idx = 1; idx < tables_[l].size(); ++idx) {
                if (tables_[l][idx].empty()) continue;
                emit_table(tables_[l][idx], idx <= offset_);
            }
            emit_table(inc_[l], true);
            emit_table(ghost_[l], false);
        }
    }

private:
    // min(k-1, nu_d(b)); also the level block b publishes at.
    uint32_t cap_level(uint64_t b) const {
        uint32_t l = 0;
        while (l + 1 < k_ && b % dpow_[l + 1] == 0) ++l;
        return l;
    }

    uint64_t read(const CountTable& t, uint32_t local) {
        ++stats_.table_reads;
        return t.get(local, 0);
    }

    // Count from the current frame's start through its completed block b.
    uint64_t prefix_current(uint64_t b, uint32_t local) {
        uint64_t sum = 0;
        while (b > 0) {
            uint32_t l = cap_level(b);
            sum += read(tables_[l][static_cast<size_t>(b)], local);
            if (l == k_ - 1) break;
            b = dpow_[l + 1] * (b / dpow_[l + 1]);
        }
        return sum;
    }

    // Count from the previous frame's start through its block b. Slots at
    // indices <= offset_ were overwritten this frame; for exactly those, the
    // displaced table is ghost_[l] (the walk index at level l equals
    // d^l*floor(offset/d^l) whenever it has fallen to or below offset_).
    uint64_t prefix_previous(uint64_t b, uint32_t local) {
        uint64_t sum = 0;
        while (b > 0) {
            uint32_t l = cap_level(b);
            const CountTable& t =
                (b > offset_) ? tables_[l][static_cast<size_t>(b)] : ghost_[l];
            sum += read(t, local);
            if (l == k_ - 1) break;
            b = dpow_[l + 1] * (b / dpow_[l + 1]);
        }
        return sum;
    }

    uint64_t window_query_inner(ItemId x, uint64_t w) {
        if (w == 0) return 0;
        if (w <= offset_) {
            uint32_t local = intern_.find_current(x);
            if (local == FrameInterner::npos) return 0;
            return prefix_current(offset_, local) - prefix_current(offset_ - w, local);
        }
        uint64_t sum = 0;
        uint32_t cur = intern_.find_current(x);
        if (cur != FrameInterner::npos) sum += prefix_current(offset_, cur);
        uint32_t prev = intern_.find_previous(x);
        if (prev != FrameInterner::npos) {
            uint64_t boundary = n_frame_ - (w - offset_);
            sum += prefix_previous(n_frame_, prev) - prefix_previous(boundary, prev);
        }
        return sum;
    }

    uint64_t n_window_;
    uint32_t k_;
    uint64_t d_ = 0;
    uint64_t n_frame_ = 0;
    std::vector<uint64_t> dpow_;

    std::vector<std::vector<CountTable>> tables_;  // [level][1..n_frame]
    std::vector<CountTable> inc_;
    std::vector<CountTable> ghost_;
    FrameInterner intern_;

    uint64_t offset_ = 0;  // completed blocks in the current frame
    uint64_t completed_ = 0;
    SolverStats stats_;
};

static_assert(BlockIntervalSolver<AccSketch>);

}  // namespace ifq
