#include "ptpsim/clock.hpp"

#include <algorithm>
#include <string>

namespace ptpsim {

namespace {

__extension__ using i128 = __int128;

// Floor division and matching non-negative remainder.
struct DivMod {
    i128 quot;
    i128 rem;
};

DivMod floor_divmod(i128 num, i128 den)
{
    i128 q = num / den;
    i128 r = num % den;
    if (r < 0) {
        q -= 1;
        r += den;
    }
    return {q, r};
}

// round(num / den) with ties away from zero, den > 0.
std::int64_t round_div(i128 num, i128 den)
{
    const bool neg = num < 0;
    const i128 mag = neg ? -num : num;
    const i128 q = (mag + den / 2) / den;
    return static_cast<std::int64_t>(neg ? -q : q);
}

}  // namespace

std::string_view to_string(ClockId id)
{
    switch (id) {
    case ClockId::Master: return "MASTER";
    case ClockId::Phc: return "PHC";
    case ClockId::System: return "SYSTEM";
    }
    return "?";
}

TimexRequest encode_step(std::int64_t ns_total)
{
    // Same shape as linuxptp's clockadj_step(): split the magnitude, reapply
    // the sign, then borrow a second if the nanosecond part went negative.
    const std::int64_t sign = ns_total < 0 ? -1 : 1;
    const std::int64_t mag = ns_total < 0 ? -ns_total : ns_total;
    TimexRequest req;
    req.mode = TimexRequest::Mode::SetOffset;
    req.offset_sec = sign * (mag / kNsPerSec);
    req.offset_ns = sign * (mag % kNsPerSec);
    if (req.offset_ns < 0) {
        req.offset_sec -= 1;
        req.offset_ns += kNsPerSec;
    }
    return req;
}

std::int64_t scaled_ppm_to_ppb(std::int64_t scaled_ppm)
{
    return round_div(static_cast<i128>(scaled_ppm) * 1000, 65536);
}

std::int64_t ppb_to_scaled_ppm(std::int64_t ppb)
{
    return round_div(static_cast<i128>(ppb) * 65536, 1000);
}

SimClock::SimClock(ClockId id,
                   std::int64_t intrinsic_freq_error_ppb,
                   std::int64_t initial_phase_ns,
                   std::int64_t max_freq_ppb)
    : id_(id)
    , intrinsic_ppb_(intrinsic_freq_error_ppb)
    , max_freq_ppb_(max_freq_ppb)
    , phase_offset_ns_(initial_phase_ns)
{
    if (max_freq_ppb <= 0)
        throw std::invalid_argument("max_freq_ppb must be positive");
    if (intrinsic_freq_error_ppb <= -kNsPerSec)
        throw std::invalid_argument("intrinsic frequency error would stop the clock");
}

void SimClock::advance(std::int64_t true_dt_ns)
{
    if (true_dt_ns < 0)
        throw std::invalid_argument("SimClock::advance: negative interval");
    const i128 num = static_cast<i128>(residual_) +
                     static_cast<i128>(true_dt_ns) * (kNsPerSec + rate_ppb());
    const DivMod dm = floor_divmod(num, kNsPerSec);
    elapsed_local_ns_ += static_cast<std::int64_t>(dm.quot);
    residual_ = static_cast<std::int64_t>(dm.rem);
    true_now_ = true_now_ + true_dt_ns;
}

SimTime SimClock::read_raw(SimTime true_now) const
{
    const std::int64_t dt = true_now - true_now_;
    if (dt < 0)
        throw std::invalid_argument("SimClock::read_raw: instant precedes clock state");
    const i128 num = static_cast<i128>(residual_) + static_cast<i128>(dt) * (kNsPerSec + rate_ppb());
    const std::int64_t extra = static_cast<std::int64_t>(floor_divmod(num, kNsPerSec).quot);
    return SimTime{phase_offset_ns_ + elapsed_local_ns_ + extra};
}

void SimClock::adj_frequency_raw(std::int64_t freq_scaled_ppm)
{
    servo_ppb_ = std::clamp(scaled_ppm_to_ppb(freq_scaled_ppm), -max_freq_ppb_, max_freq_ppb_);
}

void SimClock::adj_setoffset_raw(const TimexRequest& req)
{
    if (req.mode != TimexRequest::Mode::SetOffset)
        throw EncodingError("adj_setoffset_raw: request mode is not ADJ_SETOFFSET");
    if (!req.normalized())
        throw EncodingError("adj_setoffset_raw: offset_ns " + std::to_string(req.offset_ns) +
                            " outside [0, 1e9)");
    phase_offset_ns_ += req.step_total_ns();
}

}  // namespace ptpsim
