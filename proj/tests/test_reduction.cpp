#include <doctest.h>

#include <random>
#include <unordered_map>

#include "ifq/exact_oracle.hpp"
#include "ifq/reduction.hpp"
#include "support/generators.hpp"

using namespace ifq;

namespace {

template <class Sketch>
void sweep_against_oracle(Sketch& sketch, uint64_t W, uint64_t budget,
                          const std::vector<ItemId>& stream, uint64_t seed,
                          uint64_t queries_per_checkpoint = 6) {
    ExactOracle oracle(W);
    std::mt19937_64 rng(seed);
    for (ItemId x : stream) {
        sketch.add(x);
        oracle.add(x);
        if (oracle.elements_seen() < W || oracle.elements_seen() % 29 != 0) continue;
        for (uint64_t q = 0; q < queries_per_checkpoint; ++q) {
            std::uniform_int_distribution<uint64_t> pos(0, W);
            uint64_t i = pos(rng), j = pos(rng);
            if (i > j) std::swap(i, j);
            ItemId probe = rng() % 4 == 0 ? 424242 : stream[rng() % stream.size()];
            uint64_t est = sketch.interval_query(probe, i, j);
            uint64_t truth = oracle.interval_frequency(probe, i, j);
            REQUIRE(est >= truth);
            REQUIRE(est - truth <= budget);
        }
    }
}

}  // namespace

TEST_SUITE("reduction") {
    TEST_CASE("degenerate block size: every arrival closes a block") {
        SketchConfig cfg{.window = 6, .epsilon = 1.0};  // s = 1
        auto r = make_acc_reduction(cfg);
        CHECK(r.config().block_size == 1);
        r.add(5);
        CHECK(r.solver().completed_blocks() == 1);  // end_block fired immediately
        r.add(5);
        CHECK(r.solver().completed_blocks() == 2);
    }

    TEST_CASE("two arrivals of one item trigger exactly one solver insert") {
        // W=12, eps=1: s = 2; the counter crosses s once after two arrivals
        SketchConfig cfg{.window = 12, .epsilon = 1.0};
        auto r = make_acc_reduction(cfg);
        CHECK(r.config().block_size == 2);
        r.add(9);
        CHECK(r.overflow_events() == 0);
        r.add(9);
        CHECK(r.overflow_events() == 1);
    }

    TEST_CASE("space saving reads all-zero at the frame boundary") {
        SketchConfig cfg{.window = 12, .epsilon = 1.0};
        auto r = make_acc_reduction(cfg);
        CHECK(r.frame_size() == 12);
        for (int i = 0; i < 12; ++i) r.add(i % 3);
        CHECK(r.space_saving().insertions() == 0);
        CHECK(r.space_saving().query(0) == 0);
    }

    TEST_CASE("never-seen item estimates the bare correction") {
        SketchConfig cfg{.window = 1200, .epsilon = 0.1};  // s = 20
        auto r = make_hit_reduction(cfg);
        for (int i = 0; i < 1200; ++i) r.add(7);
        CHECK(r.interval_query(555, 0, 1200) == 2 * r.config().block_size);
    }

    TEST_CASE("homogeneous stream covers the true count") {
        SketchConfig cfg{.window = 1200, .epsilon = 0.1};
        auto r = make_acc_reduction(cfg);
        for (int i = 0; i < 1200; ++i) r.add(7);
        uint64_t est = r.interval_query(7, 0, 1200);
        CHECK(est >= 1200);
        CHECK(est <= 1200 + 120);
        CHECK(est % r.config().block_size == 0);
    }

    TEST_CASE("estimates are always multiples of the block size") {
        SketchConfig cfg{.window = 128, .epsilon = 0.25};  // s = 5
        auto r = make_hit_reduction(cfg);
        auto stream = testing::skewed_stream(400, 30, 2);
        std::mt19937_64 rng(3);
        for (ItemId x : stream) r.add(x);
        for (int q = 0; q < 200; ++q) {
            uint64_t i = rng() % 129, j = rng() % 129;
            if (i > j) std::swap(i, j);
            CHECK(r.interval_query(stream[rng() % stream.size()], i, j) %
                      r.config().block_size ==
                  0);
        }
    }

    TEST_CASE("warm-up queries are rejected, not clamped") {
        SketchConfig cfg{.window = 128, .epsilon = 0.25};
        auto r = make_acc_reduction(cfg);
        for (int i = 0; i < 50; ++i) r.add(1);
        CHECK_NOTHROW(r.interval_query(1, 0, 50));
        CHECK_THROWS_AS(r.interval_query(1, 0, 51), SketchError);
        CHECK_THROWS_AS(r.interval_query(1, 0, 300), SketchError);
        CHECK_THROWS_AS(r.interval_query(1, 40, 10), SketchError);
    }

    TEST_CASE("overflow persistence: one event per s arrivals after the first") {
        SketchConfig cfg{.window = 240, .epsilon = 0.25};  // s = 10, frame 240
        auto r = make_acc_reduction(cfg);
        uint64_t s = r.config().block_size;
        // x arrives mixed with noise; track the gap between its events
        std::mt19937_64 rng(8);
        uint64_t x_arrivals = 0, arrivals_at_last_event = 0, events = 0;
        for (uint64_t t = 0; t < r.frame_size(); ++t) {  // stay inside one frame
            bool is_x = rng() % 3 == 0;
            ItemId id = is_x ? 77 : 1000 + rng() % 50;
            uint64_t before = r.overflow_events();
            r.add(id);
            if (!is_x) continue;
            ++x_arrivals;
            if (r.overflow_events() > before) {
                ++events;
                if (events > 1) {
                    CHECK(x_arrivals - arrivals_at_last_event == s);
                }
                arrivals_at_last_event = x_arrivals;
            }
        }
        CHECK(events >= 2);
    }

    TEST_CASE("solver insert happens at most once per item per block") {
        SketchConfig cfg{.window = 240, .epsilon = 0.25};
        auto r = make_hit_reduction(cfg);
        auto stream = testing::skewed_stream(2000, 8, 4);  // few ids: heavy repetition
        for (ItemId x : stream) {
            r.add(x);
            CHECK(r.open_block_events(x) <= 1);
        }
    }

    TEST_CASE("sandwich bound, both solvers, wide sweep") {
        const uint64_t W = 1296;
        SketchConfig cfg{.window = W, .epsilon = 1.0 / 6};  // s = 36, n = 36
        uint64_t budget = W / 6;
        auto stream = testing::skewed_stream(4 * W, 200, 99);
        {
            auto r = make_acc_reduction(cfg);
            sweep_against_oracle(r, W, budget, stream, 15);
        }
        {
            SketchConfig c2 = cfg;
            c2.acc_levels = 3;
            auto r = make_acc_reduction(c2);
            sweep_against_oracle(r, W, budget, stream, 16);
        }
        {
            auto r = make_hit_reduction(cfg);
            sweep_against_oracle(r, W, budget, stream, 17);
        }
    }

    TEST_CASE("reduced mode: constants and sweep") {
        SketchConfig cfg{.window = 1000, .epsilon = 0.1, .block_mode = BlockMode::reduced};
        auto r = make_acc_reduction(cfg);
        CHECK(r.config().block_size == 20);
        CHECK(r.config().window_blocks == 50);
        for (int i = 0; i < 1000; ++i) r.add(7);
        CHECK(r.interval_query(555, 0, 1000) <= 2 * r.config().block_size);

        auto stream = testing::skewed_stream(3000, 150, 5);
        auto r2 = make_hit_reduction(cfg);
        sweep_against_oracle(r2, 1000, 100, stream, 6);
    }

    TEST_CASE("standard and reduced modes both hold the budget on one stream") {
        auto stream = testing::skewed_stream(2600, 120, 12);
        for (BlockMode mode : {BlockMode::standard, BlockMode::reduced}) {
            SketchConfig cfg{.window = 840, .epsilon = 1.0 / 7, .block_mode = mode};
            auto r = make_acc_reduction(cfg);
            sweep_against_oracle(r, 840, 120, stream, 21);
        }
    }

    TEST_CASE("mode change after first add is rejected") {
        SketchConfig cfg{.window = 1000, .epsilon = 0.1};
        auto r = make_acc_reduction(cfg);
        CHECK_NOTHROW(r.set_block_size_mode(BlockMode::reduced));
        CHECK(r.config().block_size == 20);  // rebuilt for reduced mode
        r.add(1);
        CHECK_THROWS_AS(r.set_block_size_mode(BlockMode::standard), SketchError);
    }

    TEST_CASE("deamortized mode keeps the bound with delayed inserts") {
        SketchConfig cfg{.window = 840, .epsilon = 1.0 / 6, .deamortize = true};
        auto v = validate_config(cfg);
        CHECK(v.block_size == 20);  // W*eps/7
        CHECK(v.correction == 3);
        auto stream = testing::skewed_stream(2600, 120, 13);
        auto r = make_hit_reduction(cfg);
        sweep_against_oracle(r, 840, 140, stream, 31);
    }

    TEST_CASE("config matrix: awkward windows and arities hold the budget") {
        struct Case {
            uint64_t W;
            uint64_t einv;
            uint32_t k;
            BlockMode mode;
        };
        // odd windows, frames that overshoot W, padded arities
        Case cases[] = {
            {1000, 3, 1, BlockMode::standard},   // s=55, n=19, frame 1045 > W
            {1000, 3, 2, BlockMode::standard},
            {777, 4, 2, BlockMode::standard},    // s=32, n=25
            {2050, 8, 5, BlockMode::standard},   // deep levels
            {900, 5, 1, BlockMode::reduced},     // s=36, n=25
        };
        for (const auto& c : cases) {
            CAPTURE(c.W);
            CAPTURE(c.einv);
            CAPTURE(c.k);
            SketchConfig cfg{.window = c.W,
                             .epsilon = 1.0 / static_cast<double>(c.einv),
                             .acc_levels = c.k,
                             .block_mode = c.mode};
            uint64_t budget = c.W / c.einv;
            auto stream = testing::skewed_stream(3 * c.W, c.W / 8 + 5, c.W ^ c.einv);
            auto acc = make_acc_reduction(cfg);
            sweep_against_oracle(acc, c.W, budget, stream, c.W + c.k, 3);
            auto hit = make_hit_reduction(cfg);
            sweep_against_oracle(hit, c.W, budget, stream, c.W + c.k + 1, 3);
        }
    }

    TEST_CASE("deamortize plus reduced mode is rejected") {
        SketchConfig cfg{.window = 840,
                         .epsilon = 1.0 / 6,
                         .block_mode = BlockMode::reduced,
                         .deamortize = true};
        CHECK_THROWS_AS(validate_config(cfg), SketchError);
    }
}

TEST_SUITE("heavy hitters") {
    TEST_CASE("homogeneous stream: the single item is the only hitter") {
        SketchConfig cfg{.window = 1200, .epsilon = 0.1};
        auto r = make_acc_reduction(cfg);
        for (int i = 0; i < 1200; ++i) r.add(7);
        auto hh = r.heavy_hitters(1.0, 0, 1200);
        REQUIRE(hh.size() == 1);
        CHECK(hh[0] == 7);
    }

    TEST_CASE("alternating items at theta=1: only relaxed membership allowed") {
        SketchConfig cfg{.window = 1200, .epsilon = 0.1};
        auto r = make_acc_reduction(cfg);
        ExactOracle oracle(1200);
        for (int i = 0; i < 1200; ++i) {
            r.add(i % 2);
            oracle.add(i % 2);
        }
        auto hh = r.heavy_hitters(1.0, 0, 1200);
        // nobody reaches f >= j-i; anything returned must clear the relaxed floor
        for (ItemId x : hh) {
            CHECK(oracle.interval_frequency(x, 0, 1200) >= 1200 - 120);
        }
    }

    TEST_CASE("classification against the oracle on a skewed stream") {
        const uint64_t W = 1296;
        SketchConfig cfg{.window = W, .epsilon = 1.0 / 6};  // s = 36, W*eps = 216
        auto r = make_hit_reduction(cfg);
        ExactOracle oracle(W);
        auto stream = testing::skewed_stream(3 * W, 60, 21);
        for (ItemId x : stream) {
            r.add(x);
            oracle.add(x);
        }
        double budget = static_cast<double>(W) / 6.0;
        for (double theta : {0.1, 0.2}) {
            for (auto [i, j] : {std::pair<uint64_t, uint64_t>{0, W},
                                std::pair<uint64_t, uint64_t>{W / 4, W}}) {
                auto hh = r.heavy_hitters(theta, i, j);
                auto hist = oracle.interval_histogram(i, j);
                double cut = theta * static_cast<double>(j - i);
                // mandatory: every item at or above theta*(j-i)
                hist.for_each([&](ItemId id, uint64_t f) {
                    if (static_cast<double>(f) >= cut) {
                        CHECK(std::binary_search(hh.begin(), hh.end(), id));
                    }
                });
                // forbidden: nothing below theta*(j-i) - W*eps
                for (ItemId id : hh) {
                    CHECK(static_cast<double>(hist.get(id, 0)) >= cut - budget);
                }
            }
        }
    }
}
