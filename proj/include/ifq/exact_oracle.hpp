#pragma once

#include <cstdint>
#include <vector>

#include "detail/flat_map.hpp"
#include "errors.hpp"
#include "item.hpp"

namespace ifq {

/// Exact sliding-window reference. Keeps the last W ids verbatim and answers
/// interval counts by scanning; every approximate answer in the test suites
/// is checked against this. Recency is 1-based from the stream head: index 1
/// is the most recent element, and a query (i, j) covers positions i+1..j.
class ExactOracle {
public:
    explicit ExactOracle(uint64_t window) : window_(window), ring_(window, kNoItem) {
        if (window == 0) raise(Errc::config_invalid, "oracle window must be positive");
    }

    void add(ItemId x) {
        ring_[static_cast<size_t>(seen_ % window_)] = x;
        ++seen_;
    }

    uint64_t window() const noexcept { return window_; }
    uint64_t elements_seen() const noexcept { return seen_; }
    uint64_t size() const noexcept { return seen_ < window_ ? seen_ : window_; }

    /// Element at recency position r (1 = newest). Pre: 1 <= r <= size().
    ItemId at_recency(uint64_t r) const { return ring_[static_cast<size_t>((seen_ - r) % window_)]; }

    /// Exact count of x among recency positions i+1..j.
    uint64_t interval_frequency(ItemId x, uint64_t i, uint64_t j) const {
        check_range(i, j);
        uint64_t count = 0;
        for (uint64_t r = i + 1; r <= j; ++r) {
            if (at_recency(r) == x) ++count;
        }
        return count;
    }

    /// Exact histogram of the interval, for heavy-hitter classification.
    detail::FlatMap<ItemId, uint64_t> interval_histogram(uint64_t i, uint64_t j) const {
        check_range(i, j);
        detail::FlatMap<ItemId, uint64_t> h;
        for (uint64_t r = i + 1; r <= j; ++r) h[at_recency(r)]++;
        return h;
    }

private:
    void check_range(uint64_t i, uint64_t j) const {
        if (i > j || j > window_)
            raise(Errc::index_beyond_window, "interval (" + std::to_string(i) + ", " +
                                                 std::to_string(j) + "] outside window");
        if (j > seen_)
            raise(Errc::index_beyond_window,
                  "j=" + std::to_string(j) + " exceeds elements seen (" +
                      std::to_string(seen_) + ")");
    }

    uint64_t window_;
    uint64_t seen_ = 0;
    std::vector<ItemId> ring_;
};

}  // namespace ifq
