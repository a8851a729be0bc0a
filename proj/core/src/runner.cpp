#include <filesystem>
#include <fstream>
#include <future>
#include <set>

#include "ptpsim/scenario.hpp"

namespace ptpsim {

namespace {

const ScenarioConfig& checked(const ScenarioConfig& config)
{
    auto errs = validate(config);
    if (!errs.empty())
        throw ConfigError(std::move(errs));
    return config;
}

std::string describe_payloads(const PayloadChain& chain)
{
    std::string out;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (!out.empty())
            out += "; ";
        out += chain.payload(i).describe();
        out += '@';
        out += to_string(chain.hook_of(i));
    }
    return out;
}

ClockId clock_of(HookPoint hook)
{
    switch (hook) {
    case HookPoint::ReadPhc:
    case HookPoint::AdjFreqPhc:
    case HookPoint::SetOffsetPhc: return ClockId::Phc;
    default: return ClockId::System;
    }
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f)
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

World::World(const ScenarioConfig& config)
    : config_(checked(config))
    , master_(ClockId::Master, config.master.intrinsic_ppb, config.master.initial_offset_ns, config.master.max_freq_ppb)
    , phc_(ClockId::Phc, config.phc.intrinsic_ppb, config.phc.initial_offset_ns, config.phc.max_freq_ppb)
    , sys_(ClockId::System, config.sys.intrinsic_ppb, config.sys.initial_offset_ns, config.sys.max_freq_ppb)
    , ptp4l_(config.ptp4l)
    , phc2sys_(config.phc2sys)
    , path_rng_(config.seed, "path")
    , trace_(TraceMeta{config.name, config.seed, {}})
{
    install_payloads();
    if (!config_.bypass_interception)
        boundary_ = ClockBoundary(chain_);
    trace_.meta().payloads = describe_payloads(chain_);
}

void World::install_payloads()
{
    for (std::size_t i = 0; i < config_.payloads.size(); ++i) {
        const PayloadSpec& p = config_.payloads[i];
        const auto read_hook = *read_hook_for(clock_of(p.hook));
        switch (p.type) {
        case PayloadSpec::Type::Constant: {
            std::shared_ptr<ConstantOffsetPayload::Ledger> ledger;
            if (p.conceal)
                ledger = std::make_shared<ConstantOffsetPayload::Ledger>();
            chain_.install(p.hook, std::make_unique<ConstantOffsetPayload>(p.delta_ns, p.constant_variant, ledger),
                           p.activation);
            if (ledger)
                chain_.install(read_hook, std::make_unique<StepConcealPayload>(ledger), p.activation);
            break;
        }
        case PayloadSpec::Type::Skew:
            chain_.install(p.hook, std::make_unique<ProgressiveSkewPayload>(p.kappa_ppb, p.skew_variant, p.factor),
                           p.activation);
            if (p.conceal)
                chain_.install(read_hook, std::make_unique<SkewConcealPayload>(p.kappa_ppb), p.activation);
            break;
        case PayloadSpec::Type::Jitter:
            chain_.install(p.hook,
                           std::make_unique<RandomJitterPayload>(p.sigma_ns, p.period_n, p.distribution,
                                                                 RngStream(config_.seed, "payload:" + std::to_string(i))),
                           p.activation);
            break;
        }
    }
}

void World::tick()
{
    ++ticks_;
    true_now_ = true_now_ + kNsPerSec;
    master_.advance(kNsPerSec);
    phc_.advance(kNsPerSec);
    sys_.advance(kNsPerSec);

    const std::int64_t t_s = log_time_s();
    if (t_s >= 1) {
        chain_.update_activation(t_s * kNsPerSec, ptp4l_.lock_state() == LockState::Locked &&
                                                      phc2sys_.lock_state() == LockState::Locked);
    }

    // ptp4l: master -> PHC
    const TimestampQuad quad = run_sync_exchange(master_, phc_, config_.path, path_rng_, true_now_, boundary_);
    const OffsetSample sample = compute_offset_delay(quad);
    const ServoAction phc_action = ptp4l_.sample(sample.offset_ns, 1.0);
    apply_action(phc_action, phc_, boundary_);

    // phc2sys: PHC -> system clock, PHC read first as in phc2sys
    const SimTime phc_ts = boundary_.clock_gettime(phc_, true_now_);
    const SimTime sys_ts = boundary_.clock_gettime(sys_, true_now_);
    const std::int64_t sys_offset = phc_to_sys_offset(phc_ts, sys_ts, config_.rdelay_ns);
    const ServoAction sys_action = phc2sys_.sample(sys_offset, 1.0);
    apply_action(sys_action, sys_, boundary_);

    if (t_s < 1)
        return;

    const bool watch_sys = config_.observed == ClockId::System;
    const SimClock& client = watch_sys ? sys_ : phc_;
    const ServoAction& action = watch_sys ? sys_action : phc_action;
    const PiServo& servo = watch_sys ? phc2sys_ : ptp4l_;

    LogRecord rec;
    rec.t_s = t_s;
    rec.t_server = master_.read_raw(true_now_);
    rec.t_client = client.read_raw(true_now_);
    rec.measured_offset_ns = watch_sys ? sys_offset : sample.offset_ns;
    if (action.kind == ServoAction::Kind::Slew)
        rec.correction_ppb = action.freq_ppb;
    else
        rec.step_ns = action.step_ns;
    rec.actual_offset_ns = rec.t_client - rec.t_server;
    rec.servo_state = servo.lock_state();
    trace_.append(rec);
    exchanges_.push_back(quad);
}

RunResult run_scenario(const ScenarioConfig& config)
{
    World world(config);
    for (std::int64_t i = 0; i < config.warmup_s + config.duration_s; ++i)
        world.tick();

    RunResult result;
    result.exchanges = world.exchanges();
    result.trace = world.take_trace();
    result.summary = summarize(result.trace, config.analysis);

    if (config.output_dir) {
        std::filesystem::create_directories(*config.output_dir);
        write_csv(result.trace, (std::filesystem::path(*config.output_dir) / (config.name + ".csv")).string());
    }
    return result;
}

SuiteResult run_suite(const std::vector<ScenarioConfig>& configs, const std::optional<std::string>& output_dir)
{
    SuiteResult suite;
    if (configs.empty()) {
        suite.errors.emplace_back("suite: no scenarios given");
        return suite;
    }

    // Names key the per-scenario CSVs and the overlay, so they must be unique.
    std::set<std::string> seen;
    std::vector<std::optional<std::future<RunResult>>> pending(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        if (!seen.insert(configs[i].name).second)
            continue;
        const ScenarioConfig& c = configs[i];
        pending[i] = std::async(std::launch::async, [&c] { return run_scenario(c); });
    }

    for (std::size_t i = 0; i < pending.size(); ++i) {
        if (!pending[i]) {
            suite.errors.push_back(configs[i].name + ": duplicate scenario name");
            continue;
        }
        try {
            suite.results.push_back(pending[i]->get());
        } catch (const std::exception& e) {
            suite.errors.push_back(configs[i].name + ": " + e.what());
        }
    }

    suite.overlay_csv = "scenario,t_s,actual_offset_ns\n";
    for (const auto& r : suite.results) {
        for (const auto& rec : r.trace.records()) {
            suite.overlay_csv += r.trace.meta().name;
            suite.overlay_csv += ',';
            suite.overlay_csv += std::to_string(rec.t_s);
            suite.overlay_csv += ',';
            suite.overlay_csv += std::to_string(rec.actual_offset_ns);
            suite.overlay_csv += '\n';
        }
    }
    suite.report = format_report(suite.results);
    for (const auto& e : suite.errors)
        suite.report += "error: " + e + "\n";

    if (output_dir) {
        std::filesystem::create_directories(*output_dir);
        const std::filesystem::path dir(*output_dir);
        write_text(dir / "suite.csv", suite.overlay_csv);
        write_text(dir / "report.txt", suite.report);
    }
    return suite;
}

}  // namespace ptpsim
