#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ifq/item.hpp"

namespace ifq::testing {

// Skewed random stream: small ids are hot, tail is long.
inline std::vector<ItemId> skewed_stream(uint64_t length, uint64_t universe, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<ItemId> out;
    out.reserve(length);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (uint64_t i = 0; i < length; ++i) {
        double u = unit(rng);
        // u^3 concentrates mass at the low ranks, roughly zipfian.
        uint64_t rank = static_cast<uint64_t>(u * u * u * static_cast<double>(universe));
        if (rank >= universe) rank = universe - 1;
        out.push_back(rank + 1);
    }
    return out;
}

inline std::vector<ItemId> uniform_stream(uint64_t length, uint64_t universe, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<ItemId> out;
    out.reserve(length);
    std::uniform_int_distribution<uint64_t> pick(1, universe);
    for (uint64_t i = 0; i < length; ++i) out.push_back(pick(rng));
    return out;
}

}  // namespace ifq::testing
