#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "ptpsim/clock.hpp"
#include "ptpsim/interception.hpp"

namespace ptpsim {

enum class LockState { Init, Stepped, Locked };

std::string_view to_string(LockState state);

struct PiServoConfig {
    double kp = 0.7;
    double ki = 0.3;
    std::int64_t first_step_threshold_ns = 20'000;
    std::optional<std::int64_t> step_threshold_ns;  // nullopt: never step after lock
    std::int64_t max_freq_ppb = kDefaultMaxFreqPpb;
};

struct ServoAction {
    enum class Kind { Slew, Step };

    Kind kind = Kind::Slew;
    std::int64_t freq_ppb = 0;         // Slew
    std::int64_t freq_scaled_ppm = 0;  // Slew, as handed to ADJ_FREQUENCY
    std::int64_t step_ns = 0;          // Step

    static ServoAction slew(std::int64_t ppb) { return {Kind::Slew, ppb, ppb_to_scaled_ppm(ppb), 0}; }
    static ServoAction step(std::int64_t ns) { return {Kind::Step, 0, 0, ns}; }

    bool operator==(const ServoAction&) const = default;
};

/// linuxptp-style PI clock servo. Positive offset means the disciplined
/// clock is ahead of its reference; corrections oppose the offset.
class PiServo {
public:
    /// Throws std::invalid_argument unless 0 < kp <= 1, 0 < ki <= 1 and the
    /// thresholds are positive.
    explicit PiServo(PiServoConfig config = {});

    ServoAction sample(std::int64_t offset_ns, double interval_s = 1.0);

    const PiServoConfig& config() const { return config_; }
    LockState lock_state() const { return state_; }
    double integral_ppb() const { return integral_ppb_; }
    std::int64_t last_correction_ppb() const { return last_correction_ppb_; }

private:
    PiServoConfig config_;
    LockState state_ = LockState::Init;
    double integral_ppb_ = 0.0;
    std::int64_t last_correction_ppb_ = 0;
};

/// Issues the action as a clock_adjtime() through `boundary`, so payloads on
/// the adjustment hooks see the request.
void apply_action(const ServoAction& action, SimClock& target, ClockBoundary& boundary);

}  // namespace ptpsim
