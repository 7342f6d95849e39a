#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detail/flat_map.hpp"
#include "errors.hpp"
#include "item.hpp"

namespace ifq {

/// Space Saving counter summary with a constant-time flush.
///
/// The classic stream-summary layout: counter cells live in value buckets,
/// buckets form an ascending doubly-linked list, so find-min and increment
/// are O(1). An arriving item with a counter is incremented; an arriving
/// item without one takes over a minimal counter (least-recently-updated
/// among ties) and increments it.
///
/// Flush is a generation bump: a cell whose epoch differs from the current
/// one reads as zero and is reusable. The abandoned bucket chain is parked
/// on a garbage list and reclaimed a couple of nodes per add, so no
/// operation degrades past O(1) amortized.
class SpaceSavingSummary {
    static constexpr uint32_t kNil = 0xffffffffu;

    struct Cell {
        ItemId id = kNoItem;
        uint64_t value = 0;
        uint64_t epoch = 0;
        uint32_t prev = kNil, next = kNil;  // within bucket, LRU order (head oldest)
        uint32_t bucket = kNil;
    };

    struct Bucket {
        uint64_t value = 0;
        uint32_t head = kNil, tail = kNil;
        uint32_t prev = kNil, next = kNil;  // ascending by value
    };

public:
    explicit SpaceSavingSummary(uint64_t capacity) : capacity_(capacity) {
        if (capacity == 0) raise(Errc::config_invalid, "space saving capacity must be positive");
        cells_.resize(static_cast<size_t>(capacity));
        index_.reserve(static_cast<size_t>(capacity) * 2);
    }

    /// Record one arrival; returns x's counter value after the update.
    uint64_t add(ItemId x) {
        reclaim_garbage(2);
        maybe_rebuild_index();
        ++insertions_;

        uint32_t ci = find_cell(x);
        if (ci != kNil) {
            bump(ci);
            return cells_[ci].value;
        }
        if (live_ < capacity_) {
            ci = static_cast<uint32_t>(live_);  // cells join an epoch in index order
            Cell& c = cells_[ci];
            c.id = x;
            c.value = 0;
            c.epoch = epoch_;
            c.prev = c.next = kNil;
            c.bucket = kNil;
            ++live_;
            index_[x] = ci;
            link_fresh(ci);
            return 1;
        }
        // Take over the least-recently-updated minimal counter.
        uint32_t victim = buckets_[bucket_head_].head;
        Cell& c = cells_[victim];
        ++evictions_;
        if (c.value > max_evicted_value_) max_evicted_value_ = c.value;
        index_.erase(c.id);
        c.id = x;
        index_[x] = victim;
        bump(victim);
        return c.value;
    }

    /// Counter value if x holds one, otherwise the minimal counter's value.
    uint64_t query(ItemId x) const {
        uint32_t ci = find_cell(x);
        if (ci != kNil) return cells_[ci].value;
        return min_value();
    }

    bool has_counter(ItemId x) const { return find_cell(x) != kNil; }

    uint64_t min_value() const {
        if (live_ < capacity_) return 0;
        return buckets_[bucket_head_].value;
    }

    /// All counters read as zero afterwards; O(1).
    void flush() {
        ++epoch_;
        insertions_ = 0;
        live_ = 0;
        max_evicted_value_ = 0;
        if (bucket_head_ != kNil) garbage_.push_back(bucket_head_);
        bucket_head_ = kNil;
    }

    uint64_t insertions() const noexcept { return insertions_; }
    uint64_t capacity() const noexcept { return capacity_; }
    uint64_t live_counters() const noexcept { return live_; }
    uint64_t generation() const noexcept { return epoch_; }
    uint64_t evictions() const noexcept { return evictions_; }
    /// Largest counter value reassigned since the last flush.
    uint64_t max_evicted_value() const noexcept { return max_evicted_value_; }

    template <typename Fn>
    void for_each_live(Fn&& fn) const {
        for (uint64_t i = 0; i < live_; ++i) fn(cells_[i].id, cells_[i].value);
    }

    uint64_t counter_sum() const {
        uint64_t sum = 0;
        for (uint64_t i = 0; i < live_; ++i) sum += cells_[i].value;
        return sum;
    }

    size_t live_entries() const noexcept { return static_cast<size_t>(live_); }

    size_t bytes_model() const noexcept {
        // 32B per allocated cell (id, value, epoch, links), 12B per live index entry.
        return static_cast<size_t>(capacity_) * 32 + static_cast<size_t>(live_) * 12;
    }

private:
    uint32_t find_cell(ItemId x) const {
        const uint32_t* ci = index_.find(x);
        if (!ci) return kNil;
        const Cell& c = cells_[*ci];
        if (c.id != x || c.epoch != epoch_) return kNil;
        return *ci;
    }

    uint32_t alloc_bucket(uint64_t value) {
        uint32_t bi;
        if (!free_buckets_.empty()) {
            bi = free_buckets_.back();
            free_buckets_.pop_back();
        } else {
            bi = static_cast<uint32_t>(buckets_.size());
            buckets_.emplace_back();
        }
        buckets_[bi] = Bucket{value, kNil, kNil, kNil, kNil};
        return bi;
    }

    void unlink_bucket(uint32_t bi) {
        Bucket& b = buckets_[bi];
        if (b.prev != kNil) buckets_[b.prev].next = b.next;
        if (b.next != kNil) buckets_[b.next].prev = b.prev;
        if (bucket_head_ == bi) bucket_head_ = b.next;
        free_buckets_.push_back(bi);
    }

    void append_cell(uint32_t bi, uint32_t ci) {
        Bucket& b = buckets_[bi];
        Cell& c = cells_[ci];
        c.bucket = bi;
        c.prev = b.tail;
        c.next = kNil;
        if (b.tail != kNil) cells_[b.tail].next = ci;
        b.tail = ci;
        if (b.head == kNil) b.head = ci;
    }

    void detach_cell(uint32_t ci) {
        Cell& c = cells_[ci];
        Bucket& b = buckets_[c.bucket];
        if (c.prev != kNil) cells_[c.prev].next = c.next;
        if (c.next != kNil) cells_[c.next].prev = c.prev;
        if (b.head == ci) b.head = c.next;
        if (b.tail == ci) b.tail = c.prev;
        c.prev = c.next = kNil;
    }

    // Freshly allocated cell, value 0 -> 1; the value-1 bucket is always the list front.
    void link_fresh(uint32_t ci) {
        uint32_t target;
        if (bucket_head_ != kNil && buckets_[bucket_head_].value == 1) {
            target = bucket_head_;
        } else {
            target = alloc_bucket(1);
            buckets_[target].next = bucket_head_;
            if (bucket_head_ != kNil) buckets_[bucket_head_].prev = target;
            bucket_head_ = target;
        }
        cells_[ci].value = 1;
        append_cell(target, ci);
    }

    // value v -> v+1: move to the adjacent bucket, creating it if absent.
    void bump(uint32_t ci) {
        Cell& c = cells_[ci];
        uint32_t bi = c.bucket;
        uint64_t nv = c.value + 1;
        uint32_t nb = buckets_[bi].next;
        uint32_t target;
        if (nb != kNil && buckets_[nb].value == nv) {
            target = nb;
        } else {
            target = alloc_bucket(nv);
            Bucket& cur = buckets_[bi];
            buckets_[target].prev = bi;
            buckets_[target].next = cur.next;
            if (cur.next != kNil) buckets_[cur.next].prev = target;
            cur.next = target;
        }
        detach_cell(ci);
        if (buckets_[bi].head == kNil) unlink_bucket(bi);
        c.value = nv;
        append_cell(target, ci);
    }

    void reclaim_garbage(int steps) {
        while (steps-- > 0 && !garbage_.empty()) {
            uint32_t bi = garbage_.back();
            uint32_t next = buckets_[bi].next;
            free_buckets_.push_back(bi);
            if (next != kNil)
                garbage_.back() = next;
            else
                garbage_.pop_back();
        }
    }

    void maybe_rebuild_index() {
        if (index_.size() <= 4 * static_cast<size_t>(capacity_) + 64) return;
        index_.clear();
        for (uint64_t i = 0; i < live_; ++i) index_[cells_[i].id] = static_cast<uint32_t>(i);
    }

    uint64_t capacity_;
    std::vector<Cell> cells_;
    std::vector<Bucket> buckets_;
    std::vector<uint32_t> free_buckets_;
    std::vector<uint32_t> garbage_;
    uint32_t bucket_head_ = kNil;
    detail::FlatMap<ItemId, uint32_t> index_;
    uint64_t epoch_ = 1;
    uint64_t insertions_ = 0;
    uint64_t live_ = 0;
    uint64_t evictions_ = 0;
    uint64_t max_evicted_value_ = 0;
};

}  // namespace ifq
