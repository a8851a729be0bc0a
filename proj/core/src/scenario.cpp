#include "ptpsim/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace ptpsim {

namespace {

std::string join_messages(const std::vector<std::string>& messages)
{
    std::string out = "invalid scenario config";
    for (const auto& m : messages) {
        out += "\n  ";
        out += m;
    }
    return out;
}

void check_clock(std::vector<std::string>& errs, const std::string& field, const ClockParams& c)
{
    if (c.intrinsic_ppb < -1'000'000 || c.intrinsic_ppb > 1'000'000)
        errs.push_back(field + ".intrinsic_ppb: must be within +/-1000000 ppb");
    if (c.max_freq_ppb <= 0)
        errs.push_back(field + ".max_freq_ppb: must be positive");
}

void check_servo(std::vector<std::string>& errs, const std::string& field, const PiServoConfig& s)
{
    if (!(s.kp > 0.0 && s.kp <= 1.0))
        errs.push_back(field + ".kp: must be in (0, 1]");
    if (!(s.ki > 0.0 && s.ki <= 1.0))
        errs.push_back(field + ".ki: must be in (0, 1]");
    if (s.first_step_threshold_ns <= 0)
        errs.push_back(field + ".first_step_threshold_ns: must be positive");
    if (s.step_threshold_ns && *s.step_threshold_ns <= 0)
        errs.push_back(field + ".step_threshold_ns: must be positive or null");
    if (s.max_freq_ppb <= 0)
        errs.push_back(field + ".max_freq_ppb: must be positive");
}

void check_payload(std::vector<std::string>& errs, const std::string& field, const PayloadSpec& p)
{
    const std::string hook(to_string(p.hook));
    switch (p.type) {
    case PayloadSpec::Type::Constant:
        if (p.constant_variant == ConstantOffsetPayload::Variant::ReadShift && !is_read_hook(p.hook))
            errs.push_back(field + ".hook: READ_SHIFT needs READ_PHC or READ_SYS, got " + hook);
        if (p.constant_variant == ConstantOffsetPayload::Variant::StepTamper && !is_setoffset_hook(p.hook))
            errs.push_back(field + ".hook: STEP_TAMPER needs SET_OFFSET_PHC or SET_OFFSET_SYS, got " + hook);
        if (p.conceal && p.constant_variant != ConstantOffsetPayload::Variant::StepTamper)
            errs.push_back(field + ".conceal: only STEP_TAMPER constants can conceal");
        break;
    case PayloadSpec::Type::Skew:
        if (!is_freq_hook(p.hook))
            errs.push_back(field + ".hook: skew needs ADJ_FREQ_PHC or ADJ_FREQ_SYS, got " + hook);
        if (!std::isfinite(p.factor))
            errs.push_back(field + ".factor: must be finite");
        if (p.conceal && p.skew_variant != ProgressiveSkewPayload::Variant::FreqBiasAdd)
            errs.push_back(field + ".conceal: only FREQ_BIAS_ADD skews can conceal");
        break;
    case PayloadSpec::Type::Jitter:
        if (!is_read_hook(p.hook) && !is_freq_hook(p.hook))
            errs.push_back(field + ".hook: jitter needs a READ_* or ADJ_FREQ_* hook, got " + hook);
        if (p.sigma_ns < 0)
            errs.push_back(field + ".sigma_ns: must be non-negative");
        if (p.period_n < 1)
            errs.push_back(field + ".period_n: must be >= 1");
        if (p.conceal)
            errs.push_back(field + ".conceal: not supported for jitter");
        break;
    }
    if (p.activation.kind == Activation::Kind::AtTime && p.activation.at_ns < 0)
        errs.push_back(field + ".activation.at_ns: must be non-negative");
}

bool safe_name(const std::string& name)
{
    if (name.empty())
        return false;
    for (unsigned char c : name) {
        if (!(std::isalnum(c) || c == '-' || c == '_' || c == '.'))
            return false;
    }
    return name != "." && name != "..";
}

ScenarioConfig host_base(std::string name)
{
    ScenarioConfig c;
    c.name = std::move(name);
    c.duration_s = 100;
    c.path = PathModel::symmetric(10'000);
    return c;
}

// Attack runs start logging from an already-disciplined host.
ScenarioConfig attack_base(std::string name)
{
    ScenarioConfig c = host_base(std::move(name));
    c.warmup_s = 60;
    return c;
}

ScenarioConfig skew_scenario(std::int64_t kappa_ppb)
{
    ScenarioConfig c = attack_base("skew-" + std::to_string(kappa_ppb) + "ppb");
    c.duration_s = 250;
    PayloadSpec p;
    p.type = PayloadSpec::Type::Skew;
    p.hook = HookPoint::AdjFreqSys;
    p.kappa_ppb = kappa_ppb;
    p.conceal = true;
    c.payloads.push_back(p);
    return c;
}

std::string fmt_opt(const std::optional<double>& v)
{
    if (!v)
        return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *v);
    return buf;
}

std::string fmt_opt(const std::optional<std::int64_t>& v)
{
    return v ? std::to_string(*v) : std::string("-");
}

}  // namespace

std::string_view to_string(PayloadSpec::Type type)
{
    switch (type) {
    case PayloadSpec::Type::Constant: return "constant";
    case PayloadSpec::Type::Skew: return "skew";
    case PayloadSpec::Type::Jitter: return "jitter";
    }
    return "?";
}

ConfigError::ConfigError(std::vector<std::string> messages)
    : std::runtime_error(join_messages(messages)), messages_(std::move(messages))
{
}

std::vector<std::string> validate(const ScenarioConfig& c)
{
    std::vector<std::string> errs;
    if (!safe_name(c.name))
        errs.push_back("name: must be non-empty and use only [A-Za-z0-9._-]");
    if (c.duration_s < 0)
        errs.push_back("duration_s: must be non-negative");
    if (c.warmup_s < 0)
        errs.push_back("warmup_s: must be non-negative");
    check_clock(errs, "clocks.master", c.master);
    check_clock(errs, "clocks.phc", c.phc);
    check_clock(errs, "clocks.sys", c.sys);
    if (c.path.delay_ms_ns < 0)
        errs.push_back("path.delay_ms_ns: must be non-negative");
    if (c.path.delay_sm_ns < 0)
        errs.push_back("path.delay_sm_ns: must be non-negative");
    if (c.path.jitter_std_ns < 0)
        errs.push_back("path.jitter_std_ns: must be non-negative");
    if (c.path.turnaround_ns < 1)
        errs.push_back("path.turnaround_ns: must be >= 1");
    check_servo(errs, "servo.ptp4l", c.ptp4l);
    check_servo(errs, "servo.phc2sys", c.phc2sys);
    if (c.observed == ClockId::Master)
        errs.push_back("observe: must be PHC or SYSTEM");
    for (std::size_t i = 0; i < c.payloads.size(); ++i)
        check_payload(errs, "payloads[" + std::to_string(i) + "]", c.payloads[i]);
    if (c.bypass_interception && !c.payloads.empty())
        errs.push_back("bypass_interception: payloads cannot be installed when the boundary is bypassed");
    if (c.analysis.filter_threshold_ns <= 0)
        errs.push_back("analysis.filter_threshold_ns: must be positive");
    if (c.analysis.drift_spec_ppb <= 0)
        errs.push_back("analysis.drift_spec_ppb: must be positive");
    return errs;
}

std::vector<std::string> builtin_names()
{
    return {"baseline", "constant-3us", "skew-10ppb", "skew-50ppb", "skew-100ppb", "jitter-500ns",
            "step-tamper-3us"};
}

ScenarioConfig builtin_scenario(std::string_view name)
{
    if (name == "baseline") {
        // Logging starts before lock here, so only audit the settled part.
        ScenarioConfig c = host_base("baseline");
        c.analysis.stealth_start_s = c.analysis.steady_start_s;
        return c;
    }

    if (name == "constant-3us") {
        ScenarioConfig c = attack_base("constant-3us");
        PayloadSpec p;
        p.type = PayloadSpec::Type::Constant;
        p.hook = HookPoint::ReadSys;
        p.delta_ns = 3'000;
        p.activation = Activation::at(10 * kNsPerSec);
        c.payloads.push_back(p);
        return c;
    }

    if (name == "skew-10ppb")
        return skew_scenario(10);
    if (name == "skew-50ppb")
        return skew_scenario(50);
    if (name == "skew-100ppb")
        return skew_scenario(100);

    if (name == "jitter-500ns") {
        ScenarioConfig c = attack_base("jitter-500ns");
        c.analysis.steady_start_s = 51;
        PayloadSpec p;
        p.type = PayloadSpec::Type::Jitter;
        p.hook = HookPoint::ReadSys;
        p.sigma_ns = 500;
        p.period_n = 2;
        c.payloads.push_back(p);
        return c;
    }

    if (name == "step-tamper-3us") {
        // Cold start so ptp4l issues its initial ADJ_SETOFFSET while the
        // payload is live.
        ScenarioConfig c = host_base("step-tamper-3us");
        c.observed = ClockId::Phc;
        PayloadSpec p;
        p.type = PayloadSpec::Type::Constant;
        p.constant_variant = ConstantOffsetPayload::Variant::StepTamper;
        p.hook = HookPoint::SetOffsetPhc;
        p.delta_ns = 3'000;
        p.activation = Activation::at(0);
        p.conceal = true;
        c.payloads.push_back(p);
        return c;
    }

    throw ConfigError({"scenario: unknown builtin '" + std::string(name) + "'"});
}

std::vector<ScenarioConfig> figure_suite()
{
    std::vector<ScenarioConfig> out;
    for (const char* n : {"baseline", "constant-3us", "skew-50ppb", "jitter-500ns", "skew-10ppb", "skew-100ppb"})
        out.push_back(builtin_scenario(n));
    return out;
}

RunSummary summarize(const Trace& trace, const AnalysisParams& params)
{
    RunSummary s;
    auto guard = [&](const char* metric, auto&& fn) {
        try {
            fn();
        } catch (const AnalysisError& e) {
            s.degenerate.push_back(std::string(metric) + ": " + e.what());
        }
    };

    guard("residual", [&] { s.residual_ns = residual_offset(trace, params.steady_start_s); });
    guard("mean_abs_measured",
          [&] { s.mean_abs_measured_ns = mean_abs_measured_offset(trace, params.steady_start_s); });
    guard("slope", [&] { s.slope_ppb = drift_slope(trace, Window{params.slope_start_s}); });
    guard("jitter_std", [&] { s.jitter_std_ns = jitter_std(trace, Window{params.steady_start_s}); });
    for (std::int64_t tau : {1, 10, 100}) {
        MtieAt m{tau, std::nullopt};
        guard("mtie", [&] { m.mtie_ns = tie_mtie(trace, tau).mtie; });
        s.mtie.push_back(m);
    }
    if (trace.empty())
        s.degenerate.emplace_back("stealth: empty trace");
    else
        s.stealth = stealth_check(trace, params.filter_threshold_ns, params.drift_spec_ppb, params.stealth_start_s);
    return s;
}

std::string format_report(const std::vector<RunResult>& results)
{
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-18s %6s %11s %10s %10s %10s %8s %8s %8s %s\n", "scenario", "n",
                  "residual", "|meas|", "slope", "jitter", "mtie1", "mtie10", "mtie100", "stealth");
    out += line;
    for (const auto& r : results) {
        const RunSummary& s = r.summary;
        std::string stealth = "-";
        if (s.stealth) {
            stealth = "interval=" + std::to_string(s.stealth->interval_violations) +
                      (s.stealth->drift_exceeded ? " drift=EXCEEDED" : " drift=ok");
        }
        auto mt = [&](std::size_t i) { return i < s.mtie.size() ? fmt_opt(s.mtie[i].mtie_ns) : std::string("-"); };
        std::snprintf(line, sizeof line, "%-18s %6zu %11s %10s %10s %10s %8s %8s %8s %s\n",
                      r.trace.meta().name.c_str(), r.trace.size(), fmt_opt(s.residual_ns).c_str(),
                      fmt_opt(s.mean_abs_measured_ns).c_str(), fmt_opt(s.slope_ppb).c_str(),
                      fmt_opt(s.jitter_std_ns).c_str(), mt(0).c_str(), mt(1).c_str(), mt(2).c_str(),
                      stealth.c_str());
        out += line;
    }
    out += "units: residual/|meas|/jitter/mtie in ns, slope in ns/s (ppb)\n";
    return out;
}

}  // namespace ptpsim
