#pragma once

#include <cstdint>

#include "ptpsim/clock.hpp"
#include "ptpsim/interception.hpp"
#include "ptpsim/rng.hpp"

namespace ptpsim {

/// One-way network delays for the master/slave path. The network is never
/// tampered with; it only delays messages.
struct PathModel {
    std::int64_t delay_ms_ns = 10'000;  // master -> slave mean
    std::int64_t delay_sm_ns = 10'000;  // slave -> master mean
    std::int64_t jitter_std_ns = 0;
    std::int64_t turnaround_ns = 1'000;  // Sync receipt to Delay_Req send

    static PathModel symmetric(std::int64_t delay_ns, std::int64_t jitter_std_ns = 0)
    {
        return PathModel{delay_ns, delay_ns, jitter_std_ns, 1'000};
    }
};

/// Draw one non-negative one-way delay. Negative Gaussian draws are
/// resampled; `rng` is untouched when jitter is zero.
std::int64_t sample_delay(std::int64_t mean_ns, std::int64_t jitter_std_ns, RngStream& rng);

struct TimestampQuad {
    SimTime t1;  // master send (Sync)
    SimTime t2;  // slave receive
    SimTime t3;  // slave send (Delay_Req)
    SimTime t4;  // master receive

    bool operator==(const TimestampQuad&) const = default;
};

struct OffsetSample {
    std::int64_t offset_ns = 0;  // slave - master
    std::int64_t path_delay_ns = 0;
    SimTime epoch;
};

/// Runs one Sync/Follow_Up + Delay_Req/Delay_Resp exchange starting at
/// `true_now`. Master timestamps are raw reads; slave timestamps are taken
/// through `boundary`.
TimestampQuad run_sync_exchange(const SimClock& master,
                                const SimClock& slave,
                                const PathModel& path,
                                RngStream& path_rng,
                                SimTime true_now,
                                ClockBoundary& boundary);

/// End-to-end offset and mean path delay; integer division truncates.
OffsetSample compute_offset_delay(const TimestampQuad& q);

/// phc2sys offset of the system clock from the PHC: sys - phc - rdelay.
constexpr std::int64_t phc_to_sys_offset(SimTime phc_ts, SimTime sys_ts, std::int64_t rdelay_ns)
{
    return sys_ts.ns - phc_ts.ns - rdelay_ns;
}

}  // namespace ptpsim
