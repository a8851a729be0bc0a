#include <cmath>

#include "doctest.h"
#include "ptpsim/attacks.hpp"
#include "ptpsim/servo.hpp"

using namespace ptpsim;

TEST_CASE("zero error gives zero slew")
{
    PiServo s;
    const auto a = s.sample(0);
    CHECK(a == ServoAction::slew(0));
    CHECK(s.lock_state() == LockState::Locked);
}

TEST_CASE("first sample above threshold steps")
{
    PiServo s;
    CHECK(s.lock_state() == LockState::Init);
    const auto a = s.sample(50'000);
    CHECK(a.kind == ServoAction::Kind::Step);
    CHECK(a.step_ns == -50'000);
    CHECK(s.lock_state() == LockState::Stepped);
    CHECK(s.integral_ppb() == 0.0);
}

TEST_CASE("hand-evaluated PI update after a step")
{
    PiServo s;
    s.sample(50'000);
    const auto a = s.sample(1000);
    CHECK(a.kind == ServoAction::Kind::Slew);
    CHECK(s.integral_ppb() == doctest::Approx(300.0));
    CHECK(a.freq_ppb == -1000);
    CHECK(a.freq_scaled_ppm == -65'536);
    CHECK(s.lock_state() == LockState::Locked);

    // integral 300 + 0.3*500 = 450, output -(350 + 450)
    const auto b = s.sample(500);
    CHECK(s.integral_ppb() == doctest::Approx(450.0));
    CHECK(b.freq_ppb == -800);
}

TEST_CASE("small first offset skips the step")
{
    PiServo s;
    const auto a = s.sample(20'000);
    CHECK(a.kind == ServoAction::Kind::Slew);
    CHECK(a.freq_ppb == -20'000);
    // after lock an unbounded offset is still slewed
    CHECK(s.sample(10'000'000).kind == ServoAction::Kind::Slew);
}

TEST_CASE("post-lock step threshold")
{
    PiServoConfig cfg;
    cfg.step_threshold_ns = 100'000;
    PiServo s(cfg);
    s.sample(0);
    CHECK(s.sample(100'000).kind == ServoAction::Kind::Slew);
    const auto a = s.sample(-150'000);
    CHECK(a.kind == ServoAction::Kind::Step);
    CHECK(a.step_ns == 150'000);
}

TEST_CASE("integral and output saturate")
{
    PiServoConfig cfg;
    cfg.max_freq_ppb = 1000;
    PiServo s(cfg);
    for (int i = 0; i < 20; ++i) {
        const auto a = s.sample(15'000);
        CHECK(a.freq_ppb == -1000);
    }
    CHECK(s.integral_ppb() == doctest::Approx(1000.0));
}

TEST_CASE("interval scales the error rate")
{
    PiServo s;
    const auto a = s.sample(1000, 2.0);
    // 500 ppb rate: integral 150, out -(350 + 150)
    CHECK(a.freq_ppb == -500);
    CHECK_THROWS_AS(s.sample(1, 0.0), std::invalid_argument);
}

TEST_CASE("invalid gains rejected")
{
    CHECK_THROWS_AS(PiServo(PiServoConfig{0.0, 0.3}), std::invalid_argument);
    CHECK_THROWS_AS(PiServo(PiServoConfig{0.7, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(PiServo(PiServoConfig{0.7, 0.3, 0}), std::invalid_argument);
    PiServoConfig bad;
    bad.step_threshold_ns = -1;
    CHECK_THROWS_AS(PiServo{bad}, std::invalid_argument);
}

TEST_CASE("lock state labels")
{
    CHECK(to_string(LockState::Init) == "INIT");
    CHECK(to_string(LockState::Stepped) == "STEPPED");
    CHECK(to_string(LockState::Locked) == "LOCKED");
}

TEST_CASE("apply_action without payloads")
{
    ClockBoundary bypass;
    SimClock c(ClockId::System, 0, 10'000);
    apply_action(ServoAction::slew(0), c, bypass);
    CHECK(c.servo_freq_ppb() == 0);
    apply_action(ServoAction::slew(-1234), c, bypass);
    CHECK(c.servo_freq_ppb() == -1234);
    apply_action(ServoAction::step(-3000), c, bypass);
    CHECK(c.phase_offset_ns() == 7000);
}

TEST_CASE("tampered step re-injects the bias")
{
    PayloadChain chain;
    chain.install(HookPoint::SetOffsetSys,
                  std::make_unique<ConstantOffsetPayload>(3000, ConstantOffsetPayload::Variant::StepTamper));
    ClockBoundary b(chain);
    SimClock c(ClockId::System, 0, 0);
    apply_action(ServoAction::step(-3000), c, b);
    CHECK(c.phase_offset_ns() == 0);
}

TEST_CASE("closed loop removes a constant frequency error")
{
    // Servo reads the clock's true offset directly, once per second.
    SimClock master(ClockId::Master), c(ClockId::Phc, 10'000, 50'000);
    PiServo s;
    ClockBoundary b;
    std::int64_t offset = 0;
    for (int k = 0; k < 120; ++k) {
        master.advance(kNsPerSec);
        c.advance(kNsPerSec);
        offset = c.read_raw(c.true_now()) - master.read_raw(master.true_now());
        apply_action(s.sample(offset), c, b);
    }
    CHECK(std::llabs(offset) <= 1);
    CHECK(std::llabs(c.servo_freq_ppb() + 10'000) <= 1);
}
