#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ptpsim/clock.hpp"
#include "ptpsim/rng.hpp"

using namespace ptpsim;

TEST_CASE("advance at identity rate")
{
    SimClock c(ClockId::Phc);
    c.advance(kNsPerSec);
    CHECK(c.read_raw(c.true_now()).ns == 1'000'000'000);
    CHECK(c.phase_offset_ns() == 0);
}

TEST_CASE("advance with 50 ppm intrinsic error")
{
    SimClock c(ClockId::Phc, 50'000);
    c.advance(kNsPerSec);
    CHECK(c.read_raw(c.true_now()).ns == 1'000'050'000);
}

TEST_CASE("one ppb carried through a billion 1 ns steps")
{
    SimClock c(ClockId::System, 1);
    for (int i = 0; i < 1'000'000'000; ++i)
        c.advance(1);
    CHECK(c.read_raw(c.true_now()).ns == 1'000'000'001);
    CHECK(c.residual_frac() == 0);
}

TEST_CASE("read_raw")
{
    SUBCASE("plain")
    {
        SimClock c(ClockId::Phc);
        CHECK(c.read_raw(SimTime::from_seconds(5)).ns == 5'000'000'000);
    }
    SUBCASE("phase adds")
    {
        SimClock c(ClockId::Phc, 0, 3'000);
        CHECK(c.read_raw(SimTime::from_seconds(5)).ns == 5'000'003'000);
    }
    SUBCASE("rate integrates")
    {
        SimClock c(ClockId::Phc, 100'000);
        CHECK(c.read_raw(SimTime::from_seconds(10)).ns == 10'001'000'000);
    }
    SUBCASE("extrapolation leaves state alone")
    {
        SimClock c(ClockId::Phc, 7);
        c.advance(123);
        const auto before = c.residual_frac();
        (void)c.read_raw(SimTime{10'000});
        CHECK(c.residual_frac() == before);
        CHECK(c.true_now().ns == 123);
    }
    SUBCASE("past instant rejected")
    {
        SimClock c(ClockId::Phc);
        c.advance(1000);
        CHECK_THROWS_AS(c.read_raw(SimTime{999}), std::invalid_argument);
    }
}

TEST_CASE("negative advance rejected")
{
    SimClock c(ClockId::Phc);
    CHECK_THROWS_AS(c.advance(-1), std::invalid_argument);
}

TEST_CASE("split advances equal one advance")
{
    RngStream rng(42, "clock-split");
    for (int trial = 0; trial < 200; ++trial) {
        const auto rate = static_cast<std::int64_t>(rng.next_u64() % 1'000'001) - 500'000;
        const auto phase = static_cast<std::int64_t>(rng.next_u64() % 2'000'001) - 1'000'000;
        SimClock whole(ClockId::Phc, rate, phase);
        SimClock pieces(ClockId::Phc, rate, phase);
        std::int64_t total = 0;
        const int k = 1 + static_cast<int>(rng.next_u64() % 50);
        for (int i = 0; i < k; ++i) {
            const auto dt = static_cast<std::int64_t>(rng.next_u64() % 3'000'000'000ULL);
            pieces.advance(dt);
            total += dt;
        }
        whole.advance(total);
        REQUIRE(whole.read_raw(whole.true_now()) == pieces.read_raw(pieces.true_now()));
        REQUIRE(whole.residual_frac() == pieces.residual_frac());
        CHECK(whole.read_raw(whole.true_now()).ns == phase + oracle::elapsed_local(total, rate));
    }
}

TEST_CASE("adj_frequency")
{
    SimClock c(ClockId::Phc);
    c.adj_frequency_raw(0);
    CHECK(c.servo_freq_ppb() == 0);
    c.adj_frequency_raw(65'536);
    CHECK(c.servo_freq_ppb() == 1000);
    c.adj_frequency_raw(std::int64_t{1} << 31);
    CHECK(c.servo_freq_ppb() == 500'000);
    c.adj_frequency_raw(-(std::int64_t{1} << 31));
    CHECK(c.servo_freq_ppb() == -500'000);
}

TEST_CASE("frequency change affects later advances only")
{
    SimClock c(ClockId::System);
    c.advance(kNsPerSec);
    c.adj_frequency_raw(ppb_to_scaled_ppm(1000));
    CHECK(c.read_raw(c.true_now()).ns == 1'000'000'000);
    c.advance(kNsPerSec);
    CHECK(c.read_raw(c.true_now()).ns == 2'000'001'000);
}

TEST_CASE("setoffset")
{
    SUBCASE("zero step")
    {
        SimClock c(ClockId::Phc, 0, 77);
        c.adj_setoffset_raw(encode_step(0));
        CHECK(c.phase_offset_ns() == 77);
    }
    SUBCASE("borrowed encoding")
    {
        SimClock c(ClockId::Phc);
        TimexRequest req{TimexRequest::Mode::SetOffset, 0, -2, 500'000'000};
        c.adj_setoffset_raw(req);
        CHECK(c.phase_offset_ns() == -1'500'000'000);
    }
    SUBCASE("step is additive at a fixed instant")
    {
        SimClock c(ClockId::Phc, 12'345, 10);
        c.advance(5 * kNsPerSec);
        const auto before = c.read_raw(c.true_now());
        c.adj_setoffset_raw(encode_step(3000));
        CHECK(c.read_raw(c.true_now()) - before == 3000);
    }
    SUBCASE("unnormalized rejected")
    {
        SimClock c(ClockId::Phc);
        CHECK_THROWS_AS(c.adj_setoffset_raw(TimexRequest{TimexRequest::Mode::SetOffset, 0, 0, -1}), EncodingError);
        CHECK_THROWS_AS(c.adj_setoffset_raw(TimexRequest{TimexRequest::Mode::SetOffset, 0, 0, kNsPerSec}),
                        EncodingError);
        CHECK_THROWS_AS(c.adj_setoffset_raw(TimexRequest::frequency(5)), EncodingError);
    }
}

TEST_CASE("encode_step")
{
    auto pair = [](std::int64_t ns) {
        const auto r = encode_step(ns);
        return std::pair{r.offset_sec, r.offset_ns};
    };
    CHECK(pair(0) == std::pair<std::int64_t, std::int64_t>{0, 0});
    CHECK(pair(-1) == std::pair<std::int64_t, std::int64_t>{-1, 999'999'999});
    CHECK(pair(2'500'000'000) == std::pair<std::int64_t, std::int64_t>{2, 500'000'000});
    CHECK(pair(-1'500'000'000) == std::pair<std::int64_t, std::int64_t>{-2, 500'000'000});
    CHECK(pair(-1'000'000'000) == std::pair<std::int64_t, std::int64_t>{-1, 0});
}

TEST_CASE("encode_step round trip over +/-1e15")
{
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<std::int64_t> dist(-1'000'000'000'000'000, 1'000'000'000'000'000);
    for (int i = 0; i < 100'000; ++i) {
        const std::int64_t x = i < 4 ? std::array<std::int64_t, 4>{-1'000'000'000'000'000, 1'000'000'000'000'000, -1, 1}[i]
                                     : dist(gen);
        const auto r = encode_step(x);
        REQUIRE(r.normalized());
        REQUIRE(r.step_total_ns() == x);
        // Euclidean division oracle
        std::int64_t q = x / kNsPerSec;
        std::int64_t m = x % kNsPerSec;
        if (m < 0) {
            m += kNsPerSec;
            --q;
        }
        REQUIRE(r.offset_sec == q);
        REQUIRE(r.offset_ns == m);
    }
}

TEST_CASE("scaled ppm conversions")
{
    CHECK(scaled_ppm_to_ppb(65'536) == 1000);
    CHECK(scaled_ppm_to_ppb(-65'536) == -1000);
    CHECK(ppb_to_scaled_ppm(50) == 3277);  // 3276.8
    CHECK(scaled_ppm_to_ppb(3277) == 50);
    CHECK(scaled_ppm_to_ppb(32) == 0);      // 0.488
    CHECK(scaled_ppm_to_ppb(33) == 1);      // 0.503
    CHECK(scaled_ppm_to_ppb(-33) == -1);

    std::mt19937_64 gen(11);
    std::uniform_int_distribution<std::int64_t> dist(-100'000'000, 100'000'000);
    for (int i = 0; i < 100'000; ++i) {
        const auto ppb = dist(gen);
        REQUIRE(scaled_ppm_to_ppb(ppb_to_scaled_ppm(ppb)) == ppb);
    }
}

TEST_CASE("clock ids")
{
    CHECK(to_string(ClockId::Phc) == "PHC");
    CHECK(to_string(ClockId::System) == "SYSTEM");
    CHECK(to_string(ClockId::Master) == "MASTER");
    CHECK_THROWS_AS(SimClock(ClockId::Phc, 0, 0, 0), std::invalid_argument);
}
