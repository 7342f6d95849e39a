#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "../detail/hash.hpp"
#include "../item.hpp"

namespace ifq::bench {

/// Zipf(alpha) item source over a fixed universe, deterministic per seed.
/// Rank r is drawn with probability proportional to 1/r^alpha and scrambled
/// through a 64-bit bijection so ids don't correlate with popularity.
class ZipfGenerator {
public:
    ZipfGenerator(double alpha, uint64_t universe, uint64_t seed)
        : rng_(seed ^ 0x5eed5eed5eedULL) {
        if (universe == 0) universe = 1;
        cdf_.resize(static_cast<size_t>(universe));
        double total = 0.0;
        for (uint64_t r = 1; r <= universe; ++r) {
            total += 1.0 / std::pow(static_cast<double>(r), alpha);
            cdf_[static_cast<size_t>(r - 1)] = total;
        }
        total_ = total;
    }

    ItemId next() {
        double u = std::uniform_real_distribution<double>(0.0, total_)(rng_);
        auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        uint64_t rank = static_cast<uint64_t>(it - cdf_.begin());
        // top bit cleared keeps ids away from the reserved sentinel values
        return detail::mix64(rank + 1) & 0x7fffffffffffffffULL;
    }

    uint64_t universe() const noexcept { return cdf_.size(); }

private:
    std::mt19937_64 rng_;
    std::vector<double> cdf_;
    double total_ = 0.0;
};

}  // namespace ifq::bench
