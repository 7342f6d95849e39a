#pragma once

#include <cassert>
#include <cstdint>
#include <utility>
#include <vector>

#include "hash.hpp"

namespace ifq::detail {

/// Open-addressing hash map for integral keys, linear probing with
/// backward-shift deletion. One sentinel key is reserved as "empty".
/// This is the table type behind every per-block/per-segment count table,
/// so it favors small entries and probe locality over generality.
template <typename K, typename V, K Empty = static_cast<K>(-1)>
class FlatMap {
public:
    struct Slot {
        K key;
        V value;
    };

    FlatMap() = default;

    explicit FlatMap(size_t expected) { reserve(expected); }

    FlatMap(const FlatMap&) = default;
    FlatMap& operator=(const FlatMap&) = default;

    FlatMap(FlatMap&& o) noexcept
        : slots_(std::move(o.slots_)), mask_(o.mask_), size_(o.size_) {
        o.mask_ = 0;
        o.size_ = 0;
    }

    FlatMap& operator=(FlatMap&& o) noexcept {
        slots_ = std::move(o.slots_);
        mask_ = o.mask_;
        size_ = o.size_;
        o.mask_ = 0;
        o.size_ = 0;
        return *this;
    }

    void reserve(size_t expected) {
        size_t want = 8;
        while (want * 7 < expected * 10) want <<= 1;  // keep load below ~0.7
        if (want > slots_.size()) rehash(want);
    }

    size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    void clear() noexcept {
        for (auto& s : slots_) s.key = Empty;
        size_ = 0;
    }

    V* find(K key) noexcept {
        if (slots_.empty()) return nullptr;
        size_t i = index_of(key);
        while (slots_[i].key != Empty) {
            if (slots_[i].key == key) return &slots_[i].value;
            i = (i + 1) & mask_;
        }
        return nullptr;
    }

    const V* find(K key) const noexcept {
        return const_cast<FlatMap*>(this)->find(key);
    }

    V get(K key, V fallback = V{}) const noexcept {
        const V* v = find(key);
        return v ? *v : fallback;
    }

    /// Returns a reference to the value for `key`, default-constructed if absent.
    V& operator[](K key) {
        assert(key != Empty);
        if (slots_.empty() || (size_ + 1) * 10 > slots_.size() * 7) {
            rehash(slots_.empty() ? 8 : slots_.size() * 2);
        }
        size_t i = index_of(key);
        while (slots_[i].key != Empty) {
            if (slots_[i].key == key) return slots_[i].value;
            i = (i + 1) & mask_;
        }
        slots_[i].key = key;
        slots_[i].value = V{};
        ++size_;
        return slots_[i].value;
    }

    void erase(K key) noexcept {
        if (slots_.empty()) return;
        size_t i = index_of(key);
        while (slots_[i].key != Empty && slots_[i].key != key) i = (i + 1) & mask_;
        if (slots_[i].key == Empty) return;
        // Backward-shift: keep probe chains contiguous without tombstones.
        size_t hole = i;
        size_t j = (i + 1) & mask_;
        while (slots_[j].key != Empty) {
            size_t home = index_of(slots_[j].key);
            // Can slot j legally move into the hole?
            bool movable = ((hole - home) & mask_) <= ((j - home) & mask_);
            if (movable) {
                slots_[hole] = slots_[j];
                hole = j;
            }
            j = (j + 1) & mask_;
        }
        slots_[hole].key = Empty;
        --size_;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (const auto& s : slots_) {
            if (s.key != Empty) fn(s.key, s.value);
        }
    }

    template <typename Fn>
    void for_each_mut(Fn&& fn) {
        for (auto& s : slots_) {
            if (s.key != Empty) fn(s.key, s.value);
        }
    }

private:
    size_t index_of(K key) const noexcept {
        return static_cast<size_t>(mix64(static_cast<uint64_t>(key))) & mask_;
    }

    void rehash(size_t new_cap) {
        std::vector<Slot> old = std::move(slots_);
        slots_.assign(new_cap, Slot{Empty, V{}});
        mask_ = new_cap - 1;
        size_ = 0;
        for (auto& s : old) {
            if (s.key != Empty) {
                size_t i = static_cast<size_t>(mix64(static_cast<uint64_t>(s.key))) & mask_;
                while (slots_[i].key != Empty) i = (i + 1) & mask_;
                slots_[i] = s;
                ++size_;
            }
        }
    }

    std::vector<Slot> slots_;
    size_t mask_ = 0;
    size_t size_ = 0;
};

}  // namespace ifq::detail
