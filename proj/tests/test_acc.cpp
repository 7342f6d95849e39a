#include <doctest.h>

#include <random>

#include "ifq/acc.hpp"
#include "support/block_oracle.hpp"

using namespace ifq;

namespace {

// Random block stream: a few adds per block from a small universe, queries
// checked against the brute-force oracle at each checkpoint.
void grid_check(AccSketch& acc, const testing::BlockOracle& oracle, uint64_t n) {
    uint64_t jmax = std::min<uint64_t>(n, oracle.completed_blocks());
    for (uint64_t i = 0; i <= jmax; ++i) {
        for (uint64_t j = i; j <= jmax; ++j) {
            for (ItemId x : {ItemId{1}, ItemId{2}, ItemId{5}, ItemId{31}}) {
                REQUIRE(acc.block_interval_query(x, i, j) ==
                        oracle.block_interval_query(x, i, j));
            }
        }
    }
}

}  // namespace

TEST_SUITE("acc") {
    TEST_CASE("one add writes k tables") {
        AccSketch acc(16, 2);
        acc.add(3);
        CHECK(acc.stats().table_writes == 2);
        AccSketch acc4(16, 4);
        acc4.add(3);
        CHECK(acc4.stats().table_writes == 4);
    }

    TEST_CASE("k=1 publishes cumulative frame tables") {
        AccSketch acc(4, 1);
        acc.add(7);
        acc.end_block();
        CHECK(acc.block_interval_query(7, 0, 1) == 1);
        acc.add(7);
        acc.add(7);
        acc.end_block();
        CHECK(acc.block_interval_query(7, 0, 2) == 3);
        CHECK(acc.block_interval_query(7, 1, 2) == 1);  // older block only
        CHECK(acc.block_interval_query(7, 2, 2) == 0);
    }

    TEST_CASE("adding twice in a block accumulates multiplicity") {
        AccSketch acc(8, 2);
        acc.add(9);
        acc.add(9);
        acc.end_block();
        CHECK(acc.block_interval_query(9, 0, 1) == 2);
    }

    TEST_CASE("bad block indices are rejected") {
        AccSketch acc(8, 2);
        acc.add(1);
        acc.end_block();
        CHECK_THROWS_AS(acc.block_interval_query(1, 0, 2), SketchError);  // only 1 completed
        CHECK_THROWS_AS(acc.block_interval_query(1, 3, 1), SketchError);
        CHECK_THROWS_AS(acc.block_interval_query(1, 0, 9), SketchError);
    }

    TEST_CASE("empty interval is zero") {
        AccSketch acc(8, 3);
        for (int b = 0; b < 5; ++b) {
            acc.add(1);
            acc.end_block();
        }
        CHECK(acc.block_interval_query(1, 3, 3) == 0);
    }

    TEST_CASE("frame padding keeps top-level segments whole") {
        AccSketch acc(8, 2);  // d = round(sqrt(8)) = 3, frame padded to 9
        CHECK(acc.arity() == 3);
        CHECK(acc.frame_blocks() == 9);
        CHECK(acc.window_blocks() == 8);
    }

    TEST_CASE("exhaustive grid vs brute force, multiple arities and frames") {
        // 12 and 20 force padded frames (n' = d^(k-1)*m with m not a power
        // of d), the case the clean-arity grids never reach
        for (uint64_t n : {8u, 12u, 20u, 64u}) {
            for (uint32_t k : {1u, 2u, 3u}) {
                for (uint64_t seed : {11u, 22u, 33u}) {
                    AccSketch acc(n, k);
                    testing::BlockOracle oracle(n);
                    std::mt19937_64 rng(seed * 1000 + n * 10 + k);
                    uint64_t blocks = 3 * acc.frame_blocks() + n / 2 + 1;  // > 3 frames
                    for (uint64_t b = 0; b < blocks; ++b) {
                        uint64_t adds = rng() % 4;
                        for (uint64_t a = 0; a < adds; ++a) {
                            ItemId x = 1 + rng() % 32;
                            acc.add(x);
                            oracle.add(x);
                        }
                        acc.end_block();
                        oracle.end_block();
                        bool check_now = n <= 20 || b % 8 == 7 || b + 1 == blocks;
                        if (check_now) grid_check(acc, oracle, n);
                    }
                    // mid-block state must not disturb completed-block answers
                    acc.add(5);
                    oracle.add(5);
                    grid_check(acc, oracle, n);
                }
            }
        }
    }

    TEST_CASE("read and write bounds") {
        for (uint64_t n : {8u, 64u}) {
            for (uint32_t k : {1u, 2u, 3u}) {
                AccSketch acc(n, k);
                std::mt19937_64 rng(n + k);
                uint64_t adds_total = 0;
                for (uint64_t b = 0; b < 3 * acc.frame_blocks(); ++b) {
                    uint64_t adds = 1 + rng() % 3;
                    for (uint64_t a = 0; a < adds; ++a) {
                        acc.add(1 + rng() % 16);
                        ++adds_total;
                    }
                    acc.end_block();
                    uint64_t jmax = std::min<uint64_t>(n, acc.completed_blocks());
                    acc.block_interval_query(3, jmax / 3, jmax);
                }
                CHECK(acc.stats().table_writes == adds_total * k);
                CHECK(acc.stats().max_win_reads <= 2 * k + 1);
            }
        }
    }

    TEST_CASE("space accounting stays within N*k*d entries") {
        // every live event sits in at most k*d tables (d = n for k = 1),
        // and at most N = two frames of events are live
        for (uint32_t k : {1u, 2u, 3u}) {
            const uint64_t n = 64;
            AccSketch acc(n, k);
            std::mt19937_64 rng(k * 5 + 1);
            uint64_t events_per_frame = 3 * acc.frame_blocks();
            for (uint64_t b = 0; b < 5 * acc.frame_blocks(); ++b) {
                for (int a = 0; a < 3; ++a) acc.add(1 + rng() % 24);
                acc.end_block();
                CHECK(acc.table_entries() <= 2 * events_per_frame * k * acc.arity());
            }
        }
    }

    TEST_CASE("ghost tables serve queries that reach past overwritten slots") {
        // Two full frames, then query windows that cross back into the old
        // frame while the new frame keeps overwriting its slots.
        const uint64_t n = 16;
        const uint32_t k = 2;  // d = 4
        AccSketch acc(n, k);
        testing::BlockOracle oracle(n);
        ItemId ids[] = {1, 2, 3};
        uint64_t tick = 0;
        auto one_block = [&] {
            ItemId x = ids[tick % 3];
            acc.add(x);
            oracle.add(x);
            if (tick % 2 == 0) {
                acc.add(3);
                oracle.add(3);
            }
            acc.end_block();
            oracle.end_block();
            ++tick;
        };
        for (uint64_t b = 0; b < 2 * acc.frame_blocks(); ++b) one_block();
        // now walk block-by-block through a third frame, always querying the
        // full window (forces the previous-frame prefix through ghosts)
        for (uint64_t b = 0; b < acc.frame_blocks(); ++b) {
            one_block();
            for (uint64_t i : {0ULL, 1ULL, 5ULL, 9ULL}) {
                for (ItemId x : ids) {
                    REQUIRE(acc.block_interval_query(x, i, n) ==
                            oracle.block_interval_query(x, i, n));
                }
            }
        }
    }
}
