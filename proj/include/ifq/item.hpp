#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ifq {

/// Universe element after interning. Raw identifiers are byte strings
/// (flow tuples, URLs, ...); everything sketch-internal keys on this token.
using ItemId = uint64_t;

inline constexpr ItemId kNoItem = static_cast<ItemId>(-1);

/// Bijective byte-string -> ItemId interner. Tokens are dense (0,1,2,...)
/// in first-seen order, so traces replay deterministically.
class StringInterner {
public:
    ItemId intern(std::string_view raw) {
        auto it = index_.find(std::string(raw));
        if (it != index_.end()) return it->second;
        ItemId id = static_cast<ItemId>(names_.size());
        names_.emplace_back(raw);
        index_.emplace(names_.back(), id);
        return id;
    }

    const std::string& name(ItemId id) const { return names_.at(id); }

    size_t size() const noexcept { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, ItemId> index_;
};

}  // namespace ifq
