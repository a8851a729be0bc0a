#include "ptpsim/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace ptpsim {

namespace {

constexpr std::size_t kMinFitSamples = 10;

struct Series {
    std::vector<double> t;
    std::vector<double> x;
};

Series window_series(const Trace& trace, Window window)
{
    Series s;
    for (const auto& r : trace.records()) {
        if (r.t_s < window.start_s || r.t_s > window.end_s)
            continue;
        s.t.push_back(static_cast<double>(r.t_s));
        s.x.push_back(static_cast<double>(r.actual_offset_ns));
    }
    return s;
}

struct LineFit {
    double slope;
    double intercept;
};

LineFit ols(const Series& s)
{
    const auto n = static_cast<double>(s.t.size());
    double mt = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        mt += s.t[i];
        mx += s.x[i];
    }
    mt /= n;
    mx /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        sxy += (s.t[i] - mt) * (s.x[i] - mx);
        sxx += (s.t[i] - mt) * (s.t[i] - mt);
    }
    if (sxx == 0.0)
        throw AnalysisError("degenerate window: all samples at one instant");
    const double slope = sxy / sxx;
    return {slope, mx - slope * mt};
}

Series require_fit_window(const Trace& trace, Window window, const char* what)
{
    Series s = window_series(trace, window);
    if (s.t.size() < kMinFitSamples) {
        throw AnalysisError(std::string(what) + ": window has " + std::to_string(s.t.size()) +
                            " samples, need at least " + std::to_string(kMinFitSamples));
    }
    return s;
}

std::string opt_field(const std::optional<std::int64_t>& v)
{
    return v ? std::to_string(*v) : std::string();
}

std::int64_t parse_int(const std::string& field, std::size_t line, const char* column)
{
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != field.size()) {
        throw std::runtime_error("line " + std::to_string(line) + ": bad integer in column " + column +
                                 ": '" + field + "'");
    }
    return v;
}

std::optional<std::int64_t> parse_opt_int(const std::string& field, std::size_t line, const char* column)
{
    if (field.empty())
        return std::nullopt;
    return parse_int(field, line, column);
}

LockState parse_state(const std::string& field, std::size_t line)
{
    for (auto s : {LockState::Init, LockState::Stepped, LockState::Locked}) {
        if (to_string(s) == field)
            return s;
    }
    throw std::runtime_error("line " + std::to_string(line) + ": unknown servo_state '" + field + "'");
}

}  // namespace

void Trace::append(const LogRecord& record)
{
    if (!records_.empty() && record.t_s != records_.back().t_s + 1) {
        throw std::invalid_argument("Trace::append: t_s " + std::to_string(record.t_s) + " does not follow " +
                                    std::to_string(records_.back().t_s));
    }
    records_.push_back(record);
}

double residual_offset(const Trace& trace, std::int64_t window_start_s)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : trace.records()) {
        if (r.t_s >= window_start_s) {
            sum += static_cast<double>(r.actual_offset_ns);
            ++n;
        }
    }
    if (n == 0)
        throw AnalysisError("residual_offset: empty window");
    return sum / static_cast<double>(n);
}

double mean_abs_measured_offset(const Trace& trace, std::int64_t window_start_s)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : trace.records()) {
        if (r.t_s >= window_start_s) {
            sum += std::abs(static_cast<double>(r.measured_offset_ns));
            ++n;
        }
    }
    if (n == 0)
        throw AnalysisError("mean_abs_measured_offset: empty window");
    return sum / static_cast<double>(n);
}

double drift_slope(const Trace& trace, Window window)
{
    return ols(require_fit_window(trace, window, "drift_slope")).slope;
}

double jitter_std(const Trace& trace, Window window)
{
    const Series s = require_fit_window(trace, window, "jitter_std");
    const LineFit fit = ols(s);
    double ss = 0.0;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        const double r = s.x[i] - (fit.intercept + fit.slope * s.t[i]);
        ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(s.t.size() - 1));
}

TieResult tie_mtie(const std::vector<std::int64_t>& x, std::int64_t tau)
{
    if (tau < 1)
        throw AnalysisError("tie_mtie: tau must be >= 1");
    if (static_cast<std::int64_t>(x.size()) <= tau) {
        throw AnalysisError("tie_mtie: tau " + std::to_string(tau) + " too large for " +
                            std::to_string(x.size()) + " samples");
    }
    const auto span = static_cast<std::size_t>(tau);
    TieResult out;
    out.tie.reserve(x.size() - span);
    for (std::size_t i = 0; i + span < x.size(); ++i) {
        out.tie.push_back(x[i + span] - x[i]);
        const auto [lo, hi] = std::minmax_element(x.begin() + static_cast<std::ptrdiff_t>(i),
                                                  x.begin() + static_cast<std::ptrdiff_t>(i + span + 1));
        out.mtie = std::max(out.mtie, *hi - *lo);
    }
    return out;
}

TieResult tie_mtie(const Trace& trace, std::int64_t tau_s)
{
    std::vector<std::int64_t> x;
    x.reserve(trace.size());
    for (const auto& r : trace.records())
        x.push_back(r.actual_offset_ns);
    return tie_mtie(x, tau_s);
}

StealthFlags stealth_check(const Trace& trace, std::int64_t filter_threshold_ns,
                           std::int64_t drift_spec_ppb, std::int64_t from_s)
{
    if (filter_threshold_ns <= 0 || drift_spec_ppb <= 0)
        throw std::invalid_argument("stealth_check: thresholds must be positive");

    StealthFlags flags;
    const LogRecord* prev = nullptr;
    for (const auto& r : trace.records()) {
        if (r.t_s < from_s)
            continue;
        if (prev && std::abs(r.measured_offset_ns - prev->measured_offset_ns) > filter_threshold_ns) {
            ++flags.interval_violations;
            flags.violation_times_s.push_back(r.t_s);
        }
        prev = &r;
    }

    const Series s = window_series(trace, Window{from_s});
    if (s.t.size() >= kMinFitSamples) {
        flags.fitted_drift_ppb = ols(s).slope;
        flags.drift_exceeded = std::abs(flags.fitted_drift_ppb) > static_cast<double>(drift_spec_ppb);
    }
    return flags;
}

std::string to_csv(const Trace& trace)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : trace.records()) {
        out += std::to_string(r.t_s);
        out += ',';
        out += std::to_string(r.t_server.ns);
        out += ',';
        out += std::to_string(r.t_client.ns);
        out += ',';
        out += std::to_string(r.measured_offset_ns);
        out += ',';
        out += opt_field(r.correction_ppb);
        out += ',';
        out += opt_field(r.step_ns);
        out += ',';
        out += std::to_string(r.actual_offset_ns);
        out += ',';
        out += to_string(r.servo_state);
        out += '\n';
    }
    return out;
}

void write_csv(const Trace& trace, const std::string& path)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    const std::string csv = to_csv(trace);
    f.write(csv.data(), static_cast<std::streamsize>(csv.size()));
    if (!f)
        throw std::runtime_error("write to '" + path + "' failed");
}

Trace parse_csv(std::istream& in, TraceMeta meta)
{
    Trace trace(std::move(meta));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (lineno == 1) {
            if (line != kCsvHeader)
                throw std::runtime_error("line 1: unexpected header '" + line + "'");
            continue;
        }
        if (line.empty())
            continue;

        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(cell);
        if (!line.empty() && line.back() == ',')
            f.emplace_back();
        if (f.size() != 8) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected 8 fields, got " +
                                     std::to_string(f.size()));
        }

        LogRecord r;
        r.t_s = parse_int(f[0], lineno, "t_s");
        r.t_server = SimTime{parse_int(f[1], lineno, "t_server_ns")};
        r.t_client = SimTime{parse_int(f[2], lineno, "t_client_ns")};
        r.measured_offset_ns = parse_int(f[3], lineno, "measured_offset_ns");
        r.correction_ppb = parse_opt_int(f[4], lineno, "correction_ppb");
        r.step_ns = parse_opt_int(f[5], lineno, "step_ns");
        r.actual_offset_ns = parse_int(f[6], lineno, "actual_offset_ns");
        r.servo_state = parse_state(f[7], lineno);
        try {
            trace.append(r);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (lineno == 0)
        throw std::runtime_error("empty CSV");
    return trace;
}

Trace read_csv(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "'");
    TraceMeta meta;
    meta.name = path;
    return parse_csv(f, std::move(meta));
}

}  // namespace ptpsim
