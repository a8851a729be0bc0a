#include "ptpsim/sync.hpp"

#include <cmath>

namespace ptpsim {

std::int64_t sample_delay(std::int64_t mean_ns, std::int64_t jitter_std_ns, RngStream& rng)
{
    if (jitter_std_ns <= 0)
        return mean_ns < 0 ? 0 : mean_ns;
    for (int attempt = 0; attempt < 16; ++attempt) {
        const auto d = static_cast<std::int64_t>(
            std::llround(static_cast<double>(mean_ns) + rng.gaussian() * static_cast<double>(jitter_std_ns)));
        if (d >= 0)
            return d;
    }
    return 0;
}

TimestampQuad run_sync_exchange(const SimClock& master,
                                const SimClock& slave,
                                const PathModel& path,
                                RngStream& path_rng,
                                SimTime true_now,
                                ClockBoundary& boundary)
{
    const std::int64_t d_ms = sample_delay(path.delay_ms_ns, path.jitter_std_ns, path_rng);
    const std::int64_t d_sm = sample_delay(path.delay_sm_ns, path.jitter_std_ns, path_rng);

    const SimTime sync_tx = true_now;
    const SimTime sync_rx = sync_tx + d_ms;
    const SimTime req_tx = sync_rx + path.turnaround_ns;
    const SimTime req_rx = req_tx + d_sm;

    TimestampQuad q;
    q.t1 = master.read_raw(sync_tx);
    q.t2 = boundary.clock_gettime(slave, sync_rx);
    q.t3 = boundary.clock_gettime(slave, req_tx);
    q.t4 = master.read_raw(req_rx);
    return q;
}

OffsetSample compute_offset_delay(const TimestampQuad& q)
{
    const std::int64_t ms = q.t2 - q.t1;
    const std::int64_t sm = q.t4 - q.t3;
    return OffsetSample{(ms - sm) / 2, (ms + sm) / 2, q.t2};
}

}  // namespace ptpsim
