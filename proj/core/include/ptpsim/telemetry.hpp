#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptpsim/clock.hpp"
#include "ptpsim/servo.hpp"

namespace ptpsim {

/// One 1 Hz row of the monitor log.
struct LogRecord {
    std::int64_t t_s = 0;
    SimTime t_server;
    SimTime t_client;
    std::int64_t measured_offset_ns = 0;  // what the observed servo was fed
    std::optional<std::int64_t> correction_ppb;
    std::optional<std::int64_t> step_ns;
    std::int64_t actual_offset_ns = 0;  // raw client - raw server
    LockState servo_state = LockState::Init;

    bool operator==(const LogRecord&) const = default;
};

struct TraceMeta {
    std::string name;
    std::uint64_t seed = 0;
    std::string payloads;
};

/// Records at exactly 1 Hz with no gaps.
class Trace {
public:
    Trace() = default;
    explicit Trace(TraceMeta meta) : meta_(std::move(meta)) {}

    /// Throws std::invalid_argument unless record.t_s is the previous
    /// record's t_s + 1.
    void append(const LogRecord& record);

    const TraceMeta& meta() const { return meta_; }
    TraceMeta& meta() { return meta_; }
    const std::vector<LogRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

private:
    TraceMeta meta_;
    std::vector<LogRecord> records_;
};

/// Raised when a metric is asked of too little data.
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inclusive range of t_s values.
struct Window {
    std::int64_t start_s = 0;
    std::int64_t end_s = std::numeric_limits<std::int64_t>::max();
};

/// Mean actual offset over records with t_s >= window_start_s.
double residual_offset(const Trace& trace, std::int64_t window_start_s);

/// Mean of |measured offset| over records with t_s >= window_start_s.
double mean_abs_measured_offset(const Trace& trace, std::int64_t window_start_s);

/// Ordinary least-squares slope of actual offset against t (ns/s, which is
/// ppb). Needs at least 10 samples.
double drift_slope(const Trace& trace, Window window);

/// Sample standard deviation of the actual offset after removing its OLS
/// line. Needs at least 10 samples.
double jitter_std(const Trace& trace, Window window);

struct TieResult {
    std::vector<std::int64_t> tie;  // x(t + tau) - x(t)
    std::int64_t mtie = 0;
};

/// TIE series and MTIE over every window spanning tau seconds (tau + 1
/// samples). Requires 1 <= tau < trace length.
TieResult tie_mtie(const Trace& trace, std::int64_t tau_s);

/// Same computations on a bare phase series.
TieResult tie_mtie(const std::vector<std::int64_t>& x, std::int64_t tau);

struct StealthFlags {
    std::size_t interval_violations = 0;
    std::vector<std::int64_t> violation_times_s;
    double fitted_drift_ppb = 0.0;
    bool drift_exceeded = false;

    bool interval_flag() const { return interval_violations > 0; }
    bool any() const { return interval_flag() || drift_exceeded; }
};

/// Would a per-interval outlier filter (|measured change| > threshold) or a
/// drift specification (|fitted actual slope| > drift_spec_ppb) notice this
/// trace? Only records with t_s >= from_s are audited.
StealthFlags stealth_check(const Trace& trace, std::int64_t filter_threshold_ns,
                           std::int64_t drift_spec_ppb, std::int64_t from_s = 0);

inline constexpr std::string_view kCsvHeader =
    "t_s,t_server_ns,t_client_ns,measured_offset_ns,correction_ppb,step_ns,actual_offset_ns,servo_state";

std::string to_csv(const Trace& trace);
void write_csv(const Trace& trace, const std::string& path);
/// Throws std::runtime_error with the offending line number on bad input.
Trace parse_csv(std::istream& in, TraceMeta meta = {});
Trace read_csv(const std::string& path);

}  // namespace ptpsim
