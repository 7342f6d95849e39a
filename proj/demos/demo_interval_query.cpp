// Minimal tour: feed a stream, then ask for counts over intervals chosen
// at query time — the whole window, the newest slice, an interior slice.

#include <cstdio>

#include "ifq/sketch.hpp"

int main() {
    ifq::SketchConfig cfg;
    cfg.window = 1200;
    cfg.epsilon = 0.1;  // additive error at most 120 anywhere in the window

    auto sketch = ifq::make_hit_reduction(cfg);
    ifq::ExactOracle oracle(cfg.window);

    // Two chatty flows plus background noise.
    for (int t = 0; t < 3000; ++t) {
        ifq::ItemId id = (t % 3 == 0) ? 7 : (t % 5 == 0) ? 11 : 1000 + t % 97;
        sketch.add(id);
        oracle.add(id);
    }

    struct {
        const char* label;
        uint64_t i, j;
    } queries[] = {
        {"whole window ", 0, 1200},
        {"newest 100   ", 0, 100},
        {"interior 300 ", 500, 800},
    };
    for (auto& q : queries) {
        uint64_t est = sketch.interval_query(7, q.i, q.j);
        uint64_t exact = oracle.interval_frequency(7, q.i, q.j);
        std::printf("flow 7, %s (%4llu,%4llu]: estimate %5llu, exact %5llu\n", q.label,
                    (unsigned long long)q.i, (unsigned long long)q.j, (unsigned long long)est,
                    (unsigned long long)exact);
    }
    return 0;
}
