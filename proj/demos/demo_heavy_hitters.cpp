// Heavy hitters over a drill-down interval: who dominated the middle of the
// window, not just the window as a whole?

#include <cstdio>

#include "ifq/bench/zipf.hpp"
#include "ifq/sketch.hpp"

int main() {
    ifq::SketchConfig cfg;
    cfg.window = 4096;
    cfg.epsilon = 1.0 / 64;
    cfg.acc_levels = 2;

    auto sketch = ifq::make_acc_reduction(cfg);
    ifq::bench::ZipfGenerator zipf(1.2, 1u << 14, 42);

    // A burst from one flow in the middle of the stream, Zipf noise around it.
    for (int t = 0; t < 8192; ++t) {
        bool burst = t >= 5000 && t < 5600;
        sketch.add(burst && t % 2 == 0 ? 99 : zipf.next());
    }

    for (auto [i, j] : {std::pair<uint64_t, uint64_t>{0, 4096},
                        std::pair<uint64_t, uint64_t>{2200, 3400}}) {
        auto hh = sketch.heavy_hitters(0.05, i, j);
        std::printf("theta=0.05 over (%4llu,%4llu]: %zu heavy hitters:", (unsigned long long)i,
                    (unsigned long long)j, hh.size());
        for (auto id : hh) std::printf(" %llu", (unsigned long long)id);
        std::printf("\n");
    }
    return 0;
}
