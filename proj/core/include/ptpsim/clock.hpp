#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace ptpsim {

inline constexpr std::int64_t kNsPerSec = 1'000'000'000;
inline constexpr std::int64_t kDefaultMaxFreqPpb = 500'000;

/// A point on some clock's timeline, in integer nanoseconds.
struct SimTime {
    std::int64_t ns = 0;

    static constexpr SimTime from_seconds(std::int64_t s) { return SimTime{s * kNsPerSec}; }

    constexpr auto operator<=>(const SimTime&) const = default;
};

constexpr SimTime operator+(SimTime t, std::int64_t delta_ns) { return SimTime{t.ns + delta_ns}; }
constexpr SimTime operator-(SimTime t, std::int64_t delta_ns) { return SimTime{t.ns - delta_ns}; }
constexpr std::int64_t operator-(SimTime a, SimTime b) { return a.ns - b.ns; }

enum class ClockId { Master, Phc, System };

std::string_view to_string(ClockId id);

/// Thrown when a SETOFFSET request violates the 0 <= ns < 1e9 normalization.
class EncodingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The subset of `struct timex` the PTP daemons use with clock_adjtime().
struct TimexRequest {
    enum class Mode { Frequency, SetOffset };

    Mode mode = Mode::Frequency;
    std::int64_t freq_scaled_ppm = 0;  // ADJ_FREQUENCY: ppm * 2^16
    std::int64_t offset_sec = 0;       // ADJ_SETOFFSET | ADJ_NANO
    std::int64_t offset_ns = 0;

    static constexpr TimexRequest frequency(std::int64_t scaled_ppm)
    {
        return TimexRequest{Mode::Frequency, scaled_ppm, 0, 0};
    }

    bool normalized() const { return offset_ns >= 0 && offset_ns < kNsPerSec; }

    /// Signed total step encoded by (offset_sec, offset_ns).
    std::int64_t step_total_ns() const { return offset_sec * kNsPerSec + offset_ns; }

    bool operator==(const TimexRequest&) const = default;
};

/// Split a signed nanosecond step into (sec, ns) with 0 <= ns < 1e9, borrowing
/// one second when the remainder is negative.
TimexRequest encode_step(std::int64_t ns_total);

/// ppb = round(scaled_ppm * 1000 / 65536), ties away from zero.
std::int64_t scaled_ppm_to_ppb(std::int64_t scaled_ppm);
/// scaled_ppm = round(ppb * 65536 / 1000), ties away from zero.
std::int64_t ppb_to_scaled_ppm(std::int64_t ppb);

/**
 * A free-running oscillator with a steppable phase.
 *
 * Local time is the integral over true time of
 * (1 + (intrinsic_ppb + servo_ppb) / 1e9) plus the accumulated phase offset.
 * The integral is kept exactly: whole nanoseconds go to the elapsed counter
 * and the remainder, in units of 1e-9 ns, stays in a residual accumulator.
 */
class SimClock {
public:
    explicit SimClock(ClockId id,
                      std::int64_t intrinsic_freq_error_ppb = 0,
                      std::int64_t initial_phase_ns = 0,
                      std::int64_t max_freq_ppb = kDefaultMaxFreqPpb);

    /// Advance true time by `true_dt_ns` (must be >= 0) at the current rate.
    void advance(std::int64_t true_dt_ns);

    /// Local time at `true_now`, which must not precede the last advance.
    /// Instants after it are extrapolated at the current rate without
    /// touching state.
    SimTime read_raw(SimTime true_now) const;

    /// ADJ_FREQUENCY: sets (not adds) the servo frequency, saturating at
    /// +/- max_freq_ppb. Affects subsequent advances only.
    void adj_frequency_raw(std::int64_t freq_scaled_ppm);

    /// ADJ_SETOFFSET: atomic phase step. Throws EncodingError on an
    /// unnormalized request.
    void adj_setoffset_raw(const TimexRequest& req);

    ClockId id() const { return id_; }
    SimTime true_now() const { return true_now_; }
    std::int64_t phase_offset_ns() const { return phase_offset_ns_; }
    std::int64_t intrinsic_freq_error_ppb() const { return intrinsic_ppb_; }
    std::int64_t servo_freq_ppb() const { return servo_ppb_; }
    std::int64_t max_freq_ppb() const { return max_freq_ppb_; }
    std::int64_t residual_frac() const { return residual_; }

private:
    std::int64_t rate_ppb() const { return intrinsic_ppb_ + servo_ppb_; }

    ClockId id_;
    std::int64_t intrinsic_ppb_;
    std::int64_t servo_ppb_ = 0;
    std::int64_t max_freq_ppb_;
    std::int64_t phase_offset_ns_;
    SimTime true_now_{};
    std::int64_t elapsed_local_ns_ = 0;
    std::int64_t residual_ = 0;  // [0, 1e9), units of 1e-9 ns
};

}  // namespace ptpsim
