#pragma once

#include <cstdint>
#include <vector>

#include "config.hpp"
#include "detail/flat_map.hpp"
#include "errors.hpp"
#include "fixed_window.hpp"
#include "item.hpp"

namespace ifq {

/// Redundant Approximate Windows: a bank of fixed-window estimators at
/// arithmetically spaced window sizes g, 2g, ..., m*g (g = floor(W*eps/4),
/// m = ceil(W/g)), every one fed each arrival. An interval (i, j] is
/// answered from just two instances:
///
///     est = A_hi.query(x) - A_lo.query(x) + g,
///     hi = ceil(j/g), lo = floor(i/g), A_0 := 0.
///
/// A_hi's window contains position j and A_lo's is contained in position i,
/// and each instance errs by at most g, so est lands in [f, f + 4g] and
/// 4g <= W*eps. This is the baseline the leveled sketches are measured
/// against: per-element work and space are Theta(1/eps) times theirs.
///
/// Items are interned to dense 32-bit ids up front; with hundreds of
/// instances probing their tables per arrival, halving the entry width is
/// the difference between cache-resident and not.
class RawSketch {
    static constexpr uint32_t kUnseen = 0xfffffffeu;

public:
    explicit RawSketch(const ValidatedConfig& cfg) : cfg_(cfg) {
        uint64_t W = cfg.window();
        granule_ = W / (4 * cfg.epsilon_inverse);
        if (granule_ == 0)
            raise(Errc::block_too_small, "window*epsilon/4 is below one element");
        count_ = (W + granule_ - 1) / granule_;
        double inst_eps = 1.0 / static_cast<double>(count_);
        instances_.reserve(static_cast<size_t>(count_));
        for (uint64_t l = 1; l <= count_; ++l) {
            // below 8-element blocks the sketch costs more than the window
            instances_.emplace_back(l * granule_, inst_eps, /*exact_below_block=*/8);
        }
    }

    void add(ItemId x) {
        uint32_t local = intern(x);
        for (auto& inst : instances_) inst.add(local);
        updates_ += count_;
        ++seen_;
    }

    uint64_t interval_query(ItemId x, uint64_t i, uint64_t j) {
        if (i > j || j > cfg_.window())
            raise(Errc::index_beyond_window, "bad interval (" + std::to_string(i) + ", " +
                                                 std::to_string(j) + "]");
        uint32_t local = ids_.get(x, kUnseen);
        uint64_t hi = (j + granule_ - 1) / granule_;
        uint64_t lo = i / granule_;
        last_query_instances_ = 0;
        uint64_t est_hi = 0, est_lo = 0;
        if (hi > 0) {
            est_hi = instances_[static_cast<size_t>(hi - 1)].query(local);
            ++last_query_instances_;
        }
        if (lo > 0) {
            est_lo = instances_[static_cast<size_t>(lo - 1)].query(local);
            ++last_query_instances_;
        }
        return est_hi - est_lo + granule_;
    }

    uint64_t instance_count() const noexcept { return count_; }
    uint64_t granule() const noexcept { return granule_; }
    uint64_t update_operations() const noexcept { return updates_; }
    uint64_t last_query_instances() const noexcept { return last_query_instances_; }
    uint64_t elements_seen() const noexcept { return seen_; }
    const ValidatedConfig& config() const noexcept { return cfg_; }

    size_t live_entries() const {
        size_t total = ids_.size();
        for (const auto& inst : instances_) total += inst.live_entries();
        return total;
    }

    size_t bytes_model() const {
        size_t total = ids_.size() * 12;
        for (const auto& inst : instances_) total += inst.bytes_model();
        return total;
    }

private:
    uint32_t intern(ItemId x) {
        uint32_t* found = ids_.find(x);
        if (found) return *found;
        uint32_t local = next_id_++;
        ids_[x] = local;
        return local;
    }

    ValidatedConfig cfg_;
    uint64_t granule_ = 0;
    uint64_t count_ = 0;
    uint64_t seen_ = 0;
    uint64_t updates_ = 0;
    uint64_t last_query_instances_ = 0;
    uint32_t next_id_ = 0;
    detail::FlatMap<ItemId, uint32_t> ids_;
    std::vector<BasicFixedWindowEstimator<uint32_t>> instances_;
};

}  // namespace ifq
