#pragma once

#include <cmath>
#include <cstdint>

#include "errors.hpp"

namespace ifq {

enum class BlockMode { standard, reduced };

inline const char* block_mode_name(BlockMode m) noexcept {
    return m == BlockMode::standard ? "standard" : "reduced";
}

/// User-facing sketch parameters. `window` is the maximal lookback W in
/// elements; queries address any interval inside it. `epsilon` fixes the
/// additive error budget W*epsilon. `acc_levels` is the ACC table depth k.
struct SketchConfig {
    uint64_t window = 0;
    double epsilon = 0.0;
    uint32_t acc_levels = 1;
    BlockMode block_mode = BlockMode::standard;
    bool deamortize = false;
};

/// Config plus the derived constants every component shares.
///
/// Block size is s = floor(W*eps / D) where D is 6 (standard), 5 (reduced)
/// or 7 (deamortized); the frame is n = ceil(W/s) blocks of s elements, so
/// frame >= W and D*s <= W*eps keeps the whole error budget inside W*eps
/// even when W*eps/D is fractional. In the integral case this reproduces
/// s = W*eps/6, n = 6/eps, frame = W exactly.
struct ValidatedConfig {
    SketchConfig base;
    uint64_t epsilon_inverse = 0;  // 1/eps, integral by contract
    uint64_t block_size = 0;       // s
    uint64_t window_blocks = 0;    // n = ceil(W/s): blocks a query may reach
    uint64_t max_block_events = 0; // N = 2n: live block-event capacity (2 frames)
    uint32_t correction = 2;       // query-side "+c blocks" compensation

    uint64_t window() const noexcept { return base.window; }

    /// Additive error budget W*eps as an exact rational check:
    /// err <= W*eps  <=>  err * eps_inverse <= W.
    bool within_error_budget(uint64_t err) const noexcept {
        return err * epsilon_inverse <= base.window;
    }

    double error_budget() const noexcept {
        return static_cast<double>(base.window) / static_cast<double>(epsilon_inverse);
    }
};

namespace detail {

// round(n^(1/k)), settled against neighbors to dodge pow() slop.
inline uint64_t root_round(uint64_t n, uint32_t k) {
    if (k == 1) return n;
    double est = std::pow(static_cast<double>(n), 1.0 / static_cast<double>(k));
    uint64_t best = 0;
    double best_dist = 0;
    for (long long c = std::llround(est) - 1; c <= std::llround(est) + 1; ++c) {
        if (c < 1) continue;
        double dist = std::abs(std::pow(static_cast<double>(c), static_cast<double>(k)) -
                               static_cast<double>(n));
        if (best == 0 || dist < best_dist) {
            best = static_cast<uint64_t>(c);
            best_dist = dist;
        }
    }
    return best;
}

}  // namespace detail

inline ValidatedConfig validate_config(const SketchConfig& cfg) {
    if (cfg.window == 0) raise(Errc::config_invalid, "window must be positive");
    if (!(cfg.epsilon > 0.0) || cfg.epsilon > 1.0)
        raise(Errc::config_invalid, "epsilon must be in (0,1]");
    if (cfg.acc_levels == 0) raise(Errc::config_invalid, "acc_levels must be positive");
    if (cfg.deamortize && cfg.block_mode == BlockMode::reduced)
        raise(Errc::config_invalid, "deamortize is defined for standard block mode only");

    double inv = 1.0 / cfg.epsilon;
    uint64_t einv = static_cast<uint64_t>(std::llround(inv));
    if (einv == 0 || std::abs(inv - static_cast<double>(einv)) > 1e-6)
        raise(Errc::non_integer_epsilon_inverse,
              "1/epsilon = " + std::to_string(inv) + " is not an integer");

    uint32_t divisor = cfg.deamortize ? 7 : (cfg.block_mode == BlockMode::reduced ? 5 : 6);

    // s = floor(W*eps/D) computed exactly as W / (D / eps).
    uint64_t block = cfg.window / (static_cast<uint64_t>(divisor) * einv);
    if (block == 0)
        raise(Errc::block_too_small, "window*epsilon/" + std::to_string(divisor) +
                                         " is below one element");

    ValidatedConfig out;
    out.base = cfg;
    out.epsilon_inverse = einv;
    out.block_size = block;
    out.window_blocks = (cfg.window + block - 1) / block;
    out.max_block_events = 2 * out.window_blocks;
    out.correction = cfg.deamortize ? 3 : 2;

    // ACC arity must stay meaningful after rounding.
    if (detail::root_round(out.window_blocks, cfg.acc_levels) < 2)
        raise(Errc::bad_acc_arity,
              "round(n^(1/k)) < 2 for n=" + std::to_string(out.window_blocks) +
                  ", k=" + std::to_string(cfg.acc_levels));

    return out;
}

}  // namespace ifq
