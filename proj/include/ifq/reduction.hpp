#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "acc.hpp"
#include "block_solver.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "exact_oracle.hpp"
#include "hit.hpp"
#include "item.hpp"
#include "space_saving.hpp"

namespace ifq {

/// Turns an exact block-interval solver into a (W, eps) interval-frequency
/// sketch.
///
/// The element stream is cut into frames of `frame` = n*s elements (n blocks
/// of s). A per-frame Space Saving instance with n counters tracks arrivals;
/// when an item's counter crosses a multiple of s, one block event for the
/// item is recorded (into the open block and, via solver.add, into the
/// solver). Every s arrivals the open block closes; every frame the Space
/// Saving instance is flushed.
///
/// A query (i, j] maps to the smallest completed-block range that covers it
/// given the open block's current fill q = fo mod s: the open block's events
/// are added whenever i < q, and the estimate is s * (events + 2).
///
/// Error budget, in units of s (block size), standard mode:
///   over:  <= 1 per end from block-granularity covering (2 total),
///          <= 1 per frame from the first crossing's inherited counter base
///          plus the oldest event's credit dipping past the range (2 total),
///          plus the +2 correction; 6 units, and 6s <= W*eps by construction.
///   under: the flush forfeits < 1 unit of uncredited arrivals and the
///          current counter residual is < 1 unit; the +2 correction covers
///          both, so estimates never undershoot.
/// Reduced mode rounds each endpoint to the nearest block boundary instead
/// of covering, trading the guaranteed-over alignment for half-sized
/// granularity error; blocks are W*eps/5. Deamortized mode delays solver
/// inserts by one block and compensates with +3 blocks of correction and
/// W*eps/7 blocks.
template <BlockIntervalSolver Solver>
class ReductionSketch {
public:
    // The Space Saving flush period only has to reach W and land on a block
    // boundary; n blocks of s do exactly that, with capacity n keeping every
    // counter that reaches s safe from reassignment until the flush.
    ReductionSketch(const ValidatedConfig& cfg, Solver solver)
        : cfg_(cfg),
          solver_(std::move(solver)),
          ss_(cfg.window_blocks),
          frame_(cfg.window_blocks * cfg.block_size) {}

    void add(ItemId x) {
        fo_ = (fo_ + 1) % frame_;
        ++elements_;
        uint64_t value = ss_.add(x);
        if (value % cfg_.block_size == 0) {
            uint32_t& events = open_[x];
            ++events;
            ++overflow_events_;
            if (cfg_.base.deamortize)
                pending_.push_back(x);
            else
                solver_.add(x);
        }
        if (fo_ % cfg_.block_size == 0) {
            solver_.end_block();
            if (cfg_.base.deamortize) {
                for (ItemId p : pending_) solver_.add(p);
                pending_.clear();
            }
            open_.clear();
        }
        if (fo_ == 0) ss_.flush();
    }

    /// Estimate of x's count among element recencies i+1..j;
    /// exact <= estimate <= exact + W*eps, and always a multiple of s.
    uint64_t interval_query(ItemId x, uint64_t i, uint64_t j) {
        check_interval(i, j);
        uint64_t s = cfg_.block_size;
        uint64_t q = fo_ % s;  // open block fill
        uint64_t lo, hi;       // completed-block range (lo, hi]
        bool with_open;
        if (cfg_.base.block_mode == BlockMode::reduced) {
            lo = nearest_boundary(i, q, s);
            hi = nearest_boundary(j, q, s);
            with_open = i * 2 <= q;  // head boundary is nearer than the block edge
        } else {
            with_open = i < q;
            lo = (i <= q) ? 0 : (i - q) / s;
            hi = (j <= q) ? 0 : (j - q + s - 1) / s;
        }
        uint64_t events = (lo < hi) ? solver_.block_interval_query(x, lo, hi) : 0;
        if (with_open) events += open_.get(x, 0);
        return s * (events + cfg_.correction);
    }

    /// Items whose estimated interval frequency reaches theta*(j-i).
    /// Candidates are drawn from live solver tables, live Space Saving
    /// counters and the open block — never the whole universe.
    std::vector<ItemId> heavy_hitters(double theta, uint64_t i, uint64_t j) {
        check_interval(i, j);
        if (!(theta > 0.0) || theta > 1.0)
            raise(Errc::config_invalid, "theta must be in (0,1]");
        detail::FlatMap<ItemId, char> seen;
        std::vector<ItemId> candidates;
        auto offer = [&](ItemId id) {
            char& mark = seen[id];
            if (!mark) {
                mark = 1;
                candidates.push_back(id);
            }
        };
        solver_.for_each_live_item(offer);
        ss_.for_each_live([&](ItemId id, uint64_t) { offer(id); });
        open_.for_each([&](ItemId id, uint32_t) { offer(id); });

        double threshold = theta * static_cast<double>(j - i);
        std::vector<ItemId> out;
        for (ItemId id : candidates) {
            if (static_cast<double>(interval_query(id, i, j)) >= threshold) out.push_back(id);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Only legal before the first add; rebuilds the sketch for the mode.
    void set_block_size_mode(BlockMode mode) {
        if (elements_ > 0)
            raise(Errc::mode_change_after_start, "mode is fixed once elements have arrived");
        SketchConfig base = cfg_.base;
        base.block_mode = mode;
        *this = make(base);
    }

    static ReductionSketch make(const SketchConfig& base) {
        ValidatedConfig cfg = validate_config(base);
        return ReductionSketch(cfg, make_solver(cfg));
    }

    const ValidatedConfig& config() const noexcept { return cfg_; }
    uint64_t elements_seen() const noexcept { return elements_; }
    uint64_t frame_size() const noexcept { return frame_; }
    uint64_t frame_offset() const noexcept { return fo_; }
    uint64_t overflow_events() const noexcept { return overflow_events_; }
    Solver& solver() noexcept { return solver_; }
    const Solver& solver() const noexcept { return solver_; }
    const SpaceSavingSummary& space_saving() const noexcept { return ss_; }
    /// Open-block event count for x (at most 1 per item between block closes).
    uint32_t open_block_events(ItemId x) const { return open_.get(x, 0); }

    size_t live_entries() const {
        return solver_.live_entries() + ss_.live_entries() + open_.size();
    }

    size_t bytes_model() const {
        return solver_.bytes_model() + ss_.bytes_model() + open_.size() * 12;
    }

private:
    static Solver make_solver(const ValidatedConfig& cfg) {
        if constexpr (std::is_same_v<Solver, AccSketch>) {
            return AccSketch(cfg.window_blocks, cfg.base.acc_levels);
        } else {
            return Solver(cfg.window_blocks);
        }
    }

    void check_interval(uint64_t i, uint64_t j) const {
        if (i > j || j > cfg_.window())
            raise(Errc::index_beyond_window, "bad interval (" + std::to_string(i) + ", " +
                                                 std::to_string(j) + "]");
        if (j > elements_)
            raise(Errc::index_beyond_window, "j=" + std::to_string(j) +
                                                 " exceeds elements seen (" +
                                                 std::to_string(elements_) + ")");
    }

    // Nearest block boundary behind recency e; boundaries sit at q + t*s.
    uint64_t nearest_boundary(uint64_t e, uint64_t q, uint64_t s) const {
        if (e <= q) return 0;
        return (2 * (e - q) + s) / (2 * s);
    }

    ValidatedConfig cfg_;
    Solver solver_;
    SpaceSavingSummary ss_;
    uint64_t frame_;
    uint64_t fo_ = 0;
    uint64_t elements_ = 0;
    uint64_t overflow_events_ = 0;
    detail::FlatMap<ItemId, uint32_t> open_;
    std::vector<ItemId> pending_;
};

using AccReduction = ReductionSketch<AccSketch>;
using HitReduction = ReductionSketch<HitSketch>;

inline AccReduction make_acc_reduction(const SketchConfig& cfg) { return AccReduction::make(cfg); }
inline HitReduction make_hit_reduction(const SketchConfig& cfg) { return HitReduction::make(cfg); }

}  // namespace ifq
