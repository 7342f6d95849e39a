#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "block_solver.hpp"
#include "errors.hpp"
#include "item.hpp"

namespace ifq {

/// Hierarchical Interval Tree solver: dyadic per-block tables.
///
/// Blocks are numbered 1..n inside each frame (n a power of two; the
/// requested window is rounded up). A block at in-frame position p owns
/// tables at levels 0..ctz(p); its level-l table counts events over the
/// dyadic span of 2^l blocks ending at p, built by merging the two child
/// level-(l-1) tables when the block closes. A query walks from the newest
/// queried block toward the oldest, each step consuming the largest dyadic
/// span that is both owned by the current block and inside the remaining
/// range, so any interval costs at most 2*log2(n) table lookups. Two full
/// frames of tables are retained in a ring of 2n slots; a span never
/// crosses its own frame's start (l <= ctz(p)), so every lookup is served
/// by a live table.
class HitSketch {
public:
    explicit HitSketch(uint64_t window_blocks) : n_window_(window_blocks) {
        if (window_blocks == 0) raise(Errc::config_invalid, "window_blocks must be positive");
        n_frame_ = std::bit_ceil(window_blocks < 2 ? uint64_t{2} : window_blocks);
        log2n_ = static_cast<uint32_t>(std::countr_zero(n_frame_));
        // No query spans more than window_blocks, so the greedy walk never
        // requests a level above floor(log2(window_blocks)); don't build them.
        max_level_ = static_cast<uint32_t>(std::bit_width(n_window_) - 1);
        slots_.assign(static_cast<size_t>(2 * n_frame_), {});
    }

    void add(ItemId x) {
        inc_[intern_.intern(x)]++;
        ++stats_.table_writes;
    }

    void end_block() {
        uint64_t abs = completed_ + 1;
        uint64_t p = (abs - 1) % n_frame_ + 1;
        uint32_t levels = levels_of(p);
        auto& tables = slots_[slot_of(abs)];
        tables.clear();
        tables.resize(levels + 1);
        tables[0] = std::move(inc_);
        inc_.clear();
        for (uint32_t l = 1; l <= levels; ++l) {
            tables[l] = merged(tables[l - 1], sibling(abs, l));
        }
        ++completed_;
        // Tables older than one full window can never be read again; drop
        // them now rather than when their ring slot is reused. (Merges only
        // reach back n/2 < n_window blocks, so children stay live.)
        if (abs > n_window_) slots_[slot_of(abs - n_window_)].clear();
        // A level-l table at age a is only read while 2^l <= n_window - a
        // (the walk's remaining span caps the level), so level l of the
        // block aging past n_window - 2^l is dead; shed levels on schedule.
        for (uint32_t l = max_level_; l >= 1; --l) {
            uint64_t dead_age = n_window_ - (uint64_t{1} << l) + 1;
            if (abs <= dead_age) break;
            auto& tv = slots_[slot_of(abs - dead_age)];
            if (tv.size() > l) tv.resize(l);
        }
        if (p == n_frame_) intern_.rotate();
    }

    /// g(x, i, j): events in completed blocks at recencies i+1..j, exact.
    uint64_t block_interval_query(ItemId x, uint64_t i, uint64_t j) {
        if (i > j || j > n_window_)
            raise(Errc::bad_block_index, "bad block interval (" + std::to_string(i) + ", " +
                                             std::to_string(j) + "]");
        if (j > completed_)
            raise(Errc::bad_block_index,
                  "only " + std::to_string(completed_) + " blocks completed");
        uint64_t remaining = j - i;
        uint64_t reads = 0;
        uint64_t count = 0;
        if (remaining > 0) {
            uint32_t cur = intern_.find_current(x);
            uint32_t prev = intern_.find_previous(x);
            uint64_t open_frame = completed_ / n_frame_;
            uint64_t b = completed_ - i;  // newest queried block, absolute
            while (remaining > 0) {
                uint64_t p = (b - 1) % n_frame_ + 1;
                uint32_t level = static_cast<uint32_t>(std::countr_zero(p));
                uint32_t span_cap = static_cast<uint32_t>(std::bit_width(remaining) - 1);
                if (span_cap < level) level = span_cap;
                uint32_t local = ((b - 1) / n_frame_ == open_frame) ? cur : prev;
                ++reads;
                if (local != FrameInterner::npos) {
                    count += slots_[slot_of(b)][level].get(local, 0);
                }
                b -= uint64_t{1} << level;
                remaining -= uint64_t{1} << level;
            }
        }
        stats_.table_reads += reads;
        if (reads > stats_.max_query_reads) stats_.max_query_reads = reads;
        last_query_lookups_ = reads;
        return count;
    }

    uint64_t window_blocks() const noexcept { return n_window_; }
    uint64_t frame_blocks() const noexcept { return n_frame_; }
    uint64_t completed_blocks() const noexcept { return completed_; }
    uint64_t last_query_lookups() const noexcept { return last_query_lookups_; }

    const SolverStats& stats() const noexcept { return stats_; }
    void reset_stats() { stats_ = SolverStats{}; }

    /// Count-table entries only (published + incomplete block).
    size_t table_entries() const {
        size_t total = inc_.size();
        for (const auto& tables : slots_)
            for (const auto& t : tables) total += t.size();
        return total;
    }

    size_t live_entries() const { return table_entries() + intern_.live_entries(); }

    size_t bytes_model() const { return table_entries() * 8 + intern_.bytes_model(); }

    template <typename Fn>
    void for_each_live_item(Fn&& fn) const {
        uint64_t open_frame = completed_ / n_frame_;
        inc_.for_each([&](uint32_t local, uint32_t) { fn(intern_.resolve_current(local)); });
        for (uint64_t abs = live_begin(); abs <= completed_; ++abs) {
            bool current = (abs - 1) / n_frame_ == open_frame;
            for (const auto& t : slots_[slot_of(abs)]) {
                t.for_each([&](uint32_t local, uint32_t) {
                    fn(current ? intern_.resolve_current(local) : intern_.resolve_previous(local));
                });
            }
        }
    }

    /// Test hook: every published level-l table must equal the entrywise sum
    /// of its two level-(l-1) children (checked where both children's slots
    /// are still live in the ring).
    bool check_dyadic_consistency() const {
        for (uint64_t abs = live_begin(); abs <= completed_; ++abs) {
            uint64_t p = (abs - 1) % n_frame_ + 1;
            uint32_t levels = levels_of(p);
            const auto& tables = slots_[slot_of(abs)];
            for (uint32_t l = 1; l <= levels; ++l) {
                if (abs - (uint64_t{1} << (l - 1)) < live_begin()) break;
                if (tables.size() <= l) break;  // aged out of its high levels
                const auto& sib = slots_[slot_of(abs - (uint64_t{1} << (l - 1)))];
                if (sib.size() < l) break;
                const CountTable& a = tables[l - 1];
                const CountTable& b = sib[l - 1];
                bool ok = true;
                tables[l].for_each([&](uint32_t key, uint32_t v) {
                    if (a.get(key, 0) + b.get(key, 0) != v) ok = false;
                });
                size_t expect = 0;
                CountTable probe = a;
                b.for_each([&](uint32_t key, uint32_t v) { probe[key] += v; });
                probe.for_each([&](uint32_t, uint32_t) { ++expect; });
                if (!ok || expect != tables[l].size()) return false;
            }
        }
        return true;
    }

private:
    size_t slot_of(uint64_t abs) const { return static_cast<size_t>((abs - 1) % (2 * n_frame_)); }

    uint32_t levels_of(uint64_t p) const {
        uint32_t l = static_cast<uint32_t>(std::countr_zero(p));
        return l < max_level_ ? l : max_level_;
    }

    // Oldest block whose tables are still retained (exactly the queryable range).
    uint64_t live_begin() const {
        return completed_ > n_window_ ? completed_ - n_window_ + 1 : 1;
    }

    const CountTable& sibling(uint64_t abs, uint32_t level) const {
        return slots_[slot_of(abs - (uint64_t{1} << (level - 1)))][level - 1];
    }

    static CountTable merged(const CountTable& a, const CountTable& b) {
        const CountTable& big = a.size() >= b.size() ? a : b;
        const CountTable& small = a.size() >= b.size() ? b : a;
        CountTable out = big;
        small.for_each([&](uint32_t key, uint32_t v) { out[key] += v; });
        return out;
    }

    uint64_t n_window_;
    uint64_t n_frame_ = 0;
    uint32_t log2n_ = 0;
    uint32_t max_level_ = 0;
    std::vector<std::vector<CountTable>> slots_;  // [(abs-1) % 2n][level]
    CountTable inc_;
    FrameInterner intern_;
    uint64_t completed_ = 0;
    uint64_t last_query_lookups_ = 0;
    SolverStats stats_;
};

static_assert(BlockIntervalSolver<HitSketch>);

}  // namespace ifq
