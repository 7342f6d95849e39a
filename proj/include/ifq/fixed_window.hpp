#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "detail/flat_map.hpp"
#include "errors.hpp"
#include "item.hpp"
#include "space_saving.hpp"

namespace ifq {

/// Frequency estimator for one fixed window of the last `w` elements:
/// after the window has filled, query(x) satisfies
///
///     f <= query(x) <= f + w*eps,   f = x's exact count in the last w.
///
/// Structure: the stream is cut into frames of n_b blocks of s_b elements
/// (s_b = floor(w*eps/6), frame = n_b*s_b >= w). A per-frame Space Saving
/// instance with n_b counters tracks arrivals; whenever an item's counter
/// crosses a multiple of s_b, the item is appended to the open block and
/// its histogram entry B[x] bumped. Blocks expire after n_b block closes
/// (their B entries are decremented), and the Space Saving instance is
/// flushed at every frame boundary. The estimate is
///
///     s_b * (B[x] + 2) + (counter(x) mod s_b).
///
/// Error budget, in units of s_b (each term at most one unit, so the total
/// stays within 6*s_b <= w*eps):
///   over:  live blocks cover up to q + frame <= w + 2s_b - 2 elements, so
///          arrivals in the covered-but-expired fringe add <= 2 units;
///          per frame, s_b*(events) + residual exceeds true arrivals only by
///          the first crossing's inherited base, < 1 unit per frame, <= 2;
///          the "+2" correction itself adds 2 units when nothing was lost.
///   under: the frame flush forfeits at most s_b-1 uncredited arrivals, and
///          an item that lost its sub-s_b counter forfeits at most s_b-1
///          more; both are repaid by the "+2" correction, so the estimate
///          never drops below f.
///
/// When the block size would fall below `exact_below_block` (always when
/// w*eps < 6) the sketch machinery would cost as much as the window itself;
/// the estimator then degrades to an exact ring-buffer window, whose zero
/// error also satisfies the contract.
///
/// `Key` is the stored identifier type; callers that intern items densely
/// (RAW runs hundreds of instances) use a 32-bit key to halve table traffic.
template <typename Key = ItemId>
class BasicFixedWindowEstimator {
    static constexpr Key kNone = static_cast<Key>(-1);

public:
    BasicFixedWindowEstimator(uint64_t w, double eps, uint64_t exact_below_block = 1)
        : w_(w) {
        if (w == 0) raise(Errc::config_invalid, "window must be positive");
        if (!(eps > 0.0) || eps > 1.0) raise(Errc::config_invalid, "epsilon must be in (0,1]");
        uint64_t s = static_cast<uint64_t>(std::floor(static_cast<double>(w) * eps / 6.0 + 1e-9));
        if (s < exact_below_block || s == 0) {
            exact_ = true;
            ring_.assign(static_cast<size_t>(w), kNone);
            return;
        }
        s_ = s;
        nb_ = (w + s - 1) / s;
        frame_ = nb_ * s_;
        ss_.emplace(nb_);
    }

    uint64_t window() const noexcept { return w_; }
    bool full() const noexcept { return seen_ >= w_; }
    bool exact_mode() const noexcept { return exact_; }
    uint64_t block_size() const noexcept { return s_; }

    void add(Key x) {
        ++seen_;
        ++work_;
        if (exact_) {
            size_t pos = static_cast<size_t>((seen_ - 1) % w_);
            Key old = ring_[pos];
            if (old != kNone && old != x) {
                uint32_t* c = counts_.find(old);
                if (c && --(*c) == 0) counts_.erase(old);
                counts_[x]++;
            } else if (old == kNone) {
                counts_[x]++;
            }
            ring_[pos] = x;
            return;
        }
        fo_ = (fo_ + 1) % frame_;
        uint64_t value = ss_->add(static_cast<ItemId>(x));
        if (value % s_ == 0) {
            open_.push_back(x);
            B_[x]++;
            ++work_;
        }
        if (fo_ % s_ == 0) {
            blocks_.push_back(std::move(open_));
            open_.clear();
            if (blocks_.size() > nb_) {
                for (Key id : blocks_.front()) {
                    uint32_t* c = B_.find(id);
                    ++work_;
                    if (c && --(*c) == 0) B_.erase(id);
                }
                blocks_.pop_front();
            }
        }
        if (fo_ == 0) ss_->flush();
    }

    uint64_t query(Key x) const {
        if (!full())
            raise(Errc::window_not_full, "only " + std::to_string(seen_) + " of " +
                                             std::to_string(w_) + " elements seen");
        if (exact_) return counts_.get(x);
        return s_ * (B_.get(x) + 2) + ss_->query(static_cast<ItemId>(x)) % s_;
    }

    /// Cumulative table touches; the amortized-cost tests divide by adds.
    uint64_t work() const noexcept { return work_; }
    uint64_t elements_seen() const noexcept { return seen_; }

    size_t live_entries() const {
        if (exact_) return counts_.size();
        size_t blocks_items = open_.size();
        for (const auto& b : blocks_) blocks_items += b.size();
        return ss_->live_entries() + B_.size() + blocks_items;
    }

    size_t bytes_model() const {
        if (exact_) return static_cast<size_t>(w_) * sizeof(Key) + counts_.size() * 12;
        size_t blocks_items = open_.size();
        for (const auto& b : blocks_) blocks_items += b.size();
        return ss_->bytes_model() + B_.size() * 12 + blocks_items * sizeof(Key);
    }

private:
    uint64_t w_;
    bool exact_ = false;
    uint64_t seen_ = 0;
    uint64_t work_ = 0;

    // exact mode
    std::vector<Key> ring_;
    detail::FlatMap<Key, uint32_t> counts_;

    // sketch mode
    uint64_t s_ = 0, nb_ = 0, frame_ = 0, fo_ = 0;
    std::optional<SpaceSavingSummary> ss_;
    std::deque<std::vector<Key>> blocks_;
    std::vector<Key> open_;
    detail::FlatMap<Key, uint32_t> B_;
};

using FixedWindowEstimator = BasicFixedWindowEstimator<>;

}  // namespace ifq
