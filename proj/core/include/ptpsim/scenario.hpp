#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptpsim/attacks.hpp"
#include "ptpsim/clock.hpp"
#include "ptpsim/interception.hpp"
#include "ptpsim/servo.hpp"
#include "ptpsim/sync.hpp"
#include "ptpsim/telemetry.hpp"

namespace ptpsim {

struct ClockParams {
    std::int64_t intrinsic_ppb = 0;
    std::int64_t initial_offset_ns = 0;
    std::int64_t max_freq_ppb = kDefaultMaxFreqPpb;
};

struct PayloadSpec {
    enum class Type { Constant, Skew, Jitter };

    Type type = Type::Constant;
    HookPoint hook = HookPoint::ReadSys;
    Activation activation = Activation::on_lock();

    // constant
    std::int64_t delta_ns = 0;
    ConstantOffsetPayload::Variant constant_variant = ConstantOffsetPayload::Variant::ReadShift;
    // skew
    std::int64_t kappa_ppb = 0;
    ProgressiveSkewPayload::Variant skew_variant = ProgressiveSkewPayload::Variant::FreqBiasAdd;
    double factor = 1.0;
    // jitter
    std::int64_t sigma_ns = 0;
    std::int64_t period_n = 2;
    NoiseDistribution distribution = NoiseDistribution::Gaussian;

    /// StepTamper and FreqBiasAdd only: also hide the injected error from
    /// the victim's reads of the attacked clock.
    bool conceal = false;
};

std::string_view to_string(PayloadSpec::Type type);

/// Windows and thresholds used to build a RunSummary. Window starts are
/// inclusive t_s values.
struct AnalysisParams {
    std::int64_t steady_start_s = 61;
    std::int64_t slope_start_s = 1;
    std::int64_t stealth_start_s = 1;
    std::int64_t filter_threshold_ns = 1'000;
    std::int64_t drift_spec_ppb = 1'000;
};

struct ScenarioConfig {
    std::string name = "custom";
    std::int64_t duration_s = 100;
    /// Unlogged seconds simulated before t = 0.
    std::int64_t warmup_s = 0;
    std::uint64_t seed = 1;

    ClockParams master{};
    ClockParams phc{10'000, 50'000};
    ClockParams sys{10'000, 50'000};
    PathModel path{};
    PiServoConfig ptp4l{};
    PiServoConfig phc2sys{};
    std::int64_t rdelay_ns = 0;
    /// Which disciplined clock the trace follows (PHC: ptp4l loop, SYSTEM:
    /// phc2sys loop).
    ClockId observed = ClockId::System;

    std::vector<PayloadSpec> payloads;
    /// Route clock access around the interception layer entirely.
    bool bypass_interception = false;

    AnalysisParams analysis{};
    std::optional<std::string> output_dir;
};

/// Carries one message per offending field, e.g. "payloads[0].hook: ...".
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> messages);
    const std::vector<std::string>& messages() const { return messages_; }

private:
    std::vector<std::string> messages_;
};

/// Empty when the config is runnable.
std::vector<std::string> validate(const ScenarioConfig& config);

std::vector<std::string> builtin_names();
/// Throws ConfigError for an unknown name.
ScenarioConfig builtin_scenario(std::string_view name);
/// The scenarios behind `suite --figures paper`.
std::vector<ScenarioConfig> figure_suite();

struct MtieAt {
    std::int64_t tau_s = 0;
    std::optional<std::int64_t> mtie_ns;
};

struct RunSummary {
    std::optional<double> residual_ns;
    std::optional<double> mean_abs_measured_ns;
    std::optional<double> slope_ppb;
    std::optional<double> jitter_std_ns;
    std::vector<MtieAt> mtie;  // tau in {1, 10, 100}
    std::optional<StealthFlags> stealth;
    /// "metric: reason" for every metric the trace could not support.
    std::vector<std::string> degenerate;
};

/// Every field is recomputed from the trace alone.
RunSummary summarize(const Trace& trace, const AnalysisParams& params);

/**
 * Simulation state for one scenario: master, PHC and system clocks, the
 * ptp4l and phc2sys servos, and the payload chain between the daemons and
 * the clocks.
 */
class World {
public:
    /// Throws ConfigError if `config` is invalid.
    explicit World(const ScenarioConfig& config);
    World(const World&) = delete;
    World& operator=(const World&) = delete;

    /// One second: advance clocks, ptp4l exchange and servo, phc2sys
    /// measurement and servo, then log a record once t >= 1.
    void tick();

    /// Seconds since logging start; negative during warm-up.
    std::int64_t log_time_s() const { return ticks_ - config_.warmup_s; }
    SimTime true_now() const { return true_now_; }

    const ScenarioConfig& config() const { return config_; }
    const SimClock& master() const { return master_; }
    const SimClock& phc() const { return phc_; }
    const SimClock& sys() const { return sys_; }
    const PiServo& ptp4l() const { return ptp4l_; }
    const PiServo& phc2sys() const { return phc2sys_; }
    const PayloadChain& chain() const { return chain_; }
    const Trace& trace() const { return trace_; }
    /// Exchanges of logged ticks, in order.
    const std::vector<TimestampQuad>& exchanges() const { return exchanges_; }

    Trace take_trace() { return std::move(trace_); }

private:
    void install_payloads();

    ScenarioConfig config_;
    SimClock master_;
    SimClock phc_;
    SimClock sys_;
    PiServo ptp4l_;
    PiServo phc2sys_;
    PayloadChain chain_;
    ClockBoundary boundary_;
    RngStream path_rng_;
    SimTime true_now_{};
    std::int64_t ticks_ = 0;
    Trace trace_;
    std::vector<TimestampQuad> exchanges_;
};

struct RunResult {
    Trace trace;
    RunSummary summary;
    std::vector<TimestampQuad> exchanges;
};

/// Runs warmup_s + duration_s ticks. Writes <output_dir>/<name>.csv when output_dir is
/// set. Throws ConfigError on an invalid config.
RunResult run_scenario(const ScenarioConfig& config);

struct SuiteResult {
    std::vector<RunResult> results;  // input order; failed runs omitted
    std::vector<std::string> errors;  // "<name>: <what>"
    std::string overlay_csv;          // scenario,t_s,actual_offset_ns
    std::string report;

    bool ok() const { return errors.empty(); }
};

/// Runs each scenario on its own thread. Result order and content do not
/// depend on scheduling. With `output_dir`, also writes suite.csv and
/// report.txt there.
SuiteResult run_suite(const std::vector<ScenarioConfig>& configs,
                      const std::optional<std::string>& output_dir = std::nullopt);

/// Fixed-width summary table, one line per result.
std::string format_report(const std::vector<RunResult>& results);

}  // namespace ptpsim
