#include "ptpsim/servo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptpsim {

std::string_view to_string(LockState state)
{
    switch (state) {
    case LockState::Init: return "INIT";
    case LockState::Stepped: return "STEPPED";
    case LockState::Locked: return "LOCKED";
    }
    return "?";
}

PiServo::PiServo(PiServoConfig config) : config_(config)
{
    if (!(config_.kp > 0.0 && config_.kp <= 1.0))
        throw std::invalid_argument("servo kp must be in (0, 1]");
    if (!(config_.ki > 0.0 && config_.ki <= 1.0))
        throw std::invalid_argument("servo ki must be in (0, 1]");
    if (config_.first_step_threshold_ns <= 0)
        throw std::invalid_argument("servo first_step_threshold_ns must be positive");
    if (config_.step_threshold_ns && *config_.step_threshold_ns <= 0)
        throw std::invalid_argument("servo step_threshold_ns must be positive");
    if (config_.max_freq_ppb <= 0)
        throw std::invalid_argument("servo max_freq_ppb must be positive");
}

ServoAction PiServo::sample(std::int64_t offset_ns, double interval_s)
{
    if (!(interval_s > 0.0))
        throw std::invalid_argument("PiServo::sample: interval must be positive");

    const std::int64_t magnitude = offset_ns < 0 ? -offset_ns : offset_ns;
    if (state_ == LockState::Init && magnitude > config_.first_step_threshold_ns) {
        state_ = LockState::Stepped;
        return ServoAction::step(-offset_ns);
    }
    if (state_ != LockState::Init && config_.step_threshold_ns && magnitude > *config_.step_threshold_ns)
        return ServoAction::step(-offset_ns);

    // ns of error per second of interval is numerically ppb.
    const double offset_rate = static_cast<double>(offset_ns) / interval_s;
    const double limit = static_cast<double>(config_.max_freq_ppb);
    integral_ppb_ = std::clamp(integral_ppb_ + config_.ki * offset_rate, -limit, limit);
    const double out = -(config_.kp * offset_rate + integral_ppb_);
    const auto ppb = static_cast<std::int64_t>(std::llround(std::clamp(out, -limit, limit)));

    state_ = LockState::Locked;
    last_correction_ppb_ = ppb;
    return ServoAction::slew(ppb);
}

void apply_action(const ServoAction& action, SimClock& target, ClockBoundary& boundary)
{
    if (action.kind == ServoAction::Kind::Step)
        boundary.clock_adjtime(target, encode_step(action.step_ns));
    else
        boundary.clock_adjtime(target, TimexRequest::frequency(action.freq_scaled_ppm));
}

}  // namespace ptpsim
