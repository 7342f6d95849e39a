#pragma once

#include <stdexcept>
#include <string>

namespace ifq {

enum class Errc {
    non_integer_epsilon_inverse,
    block_too_small,
    bad_acc_arity,
    window_not_full,
    index_beyond_window,
    bad_block_index,
    mode_change_after_start,
    trace_unreadable,
    config_invalid,
    bound_violation,
};

inline const char* errc_name(Errc c) noexcept {
    switch (c) {
        case Errc::non_integer_epsilon_inverse: return "NonIntegerEpsilonInverse";
        case Errc::block_too_small: return "BlockTooSmall";
        case Errc::bad_acc_arity: return "BadAccArity";
        case Errc::window_not_full: return "WindowNotFull";
        case Errc::index_beyond_window: return "IndexBeyondWindow";
        case Errc::bad_block_index: return "BadBlockIndex";
        case Errc::mode_change_after_start: return "ModeChangeAfterStart";
        case Errc::trace_unreadable: return "TraceUnreadable";
        case Errc::config_invalid: return "ConfigInvalid";
        case Errc::bound_violation: return "BoundViolation";
    }
    return "Unknown";
}

class SketchError : public std::runtime_error {
public:
    SketchError(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
    throw SketchError(code, what);
}

}  // namespace ifq
