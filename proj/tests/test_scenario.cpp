#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ptpsim/plot.hpp"
#include "ptpsim/scenario.hpp"

using namespace ptpsim;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("ptpsim_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

bool contains(const std::vector<std::string>& v, const std::string& needle)
{
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos)
            return true;
    return false;
}

}  // namespace

TEST_CASE("all-zero world, one tick")
{
    ScenarioConfig c;
    c.phc = {};
    c.sys = {};
    World w(c);
    w.tick();
    CHECK(w.master().read_raw(w.true_now()).ns == kNsPerSec);
    CHECK(w.phc().read_raw(w.true_now()).ns == kNsPerSec);
    CHECK(w.sys().read_raw(w.true_now()).ns == kNsPerSec);
    REQUIRE(w.trace().size() == 1);
    const auto& r = w.trace().records()[0];
    CHECK(r.t_s == 1);
    CHECK(r.measured_offset_ns == 0);
    CHECK(r.actual_offset_ns == 0);
    CHECK(r.correction_ppb == 0);
}

TEST_CASE("baseline cold start steps first")
{
    World w(builtin_scenario("baseline"));
    w.tick();
    CHECK(w.ptp4l().lock_state() == LockState::Stepped);
    CHECK(w.phc2sys().lock_state() == LockState::Stepped);
    const auto& r = w.trace().records().at(0);
    CHECK(r.step_ns.has_value());
    CHECK_FALSE(r.correction_ppb.has_value());
    CHECK(r.servo_state == LockState::Stepped);
    w.tick();
    CHECK(w.trace().records().at(1).servo_state == LockState::Locked);
}

TEST_CASE("warm-up ticks are not logged")
{
    World w(builtin_scenario("constant-3us"));
    for (int i = 0; i < 60; ++i)
        w.tick();
    CHECK(w.trace().empty());
    CHECK(w.log_time_s() == 0);
    CHECK_FALSE(w.chain().is_active(0));
    w.tick();
    CHECK(w.trace().size() == 1);
    CHECK(w.trace().records()[0].t_s == 1);
}

TEST_CASE("actual offset is the raw client minus raw server")
{
    for (const auto& name : builtin_names()) {
        const auto r = run_scenario(builtin_scenario(name));
        for (const auto& rec : r.trace.records())
            REQUIRE(rec.actual_offset_ns == rec.t_client - rec.t_server);
        CHECK(r.exchanges.size() == r.trace.size());
    }
}

TEST_CASE("duration 0 gives an empty, degenerate run")
{
    ScenarioConfig c = builtin_scenario("baseline");
    c.duration_s = 0;
    const auto r = run_scenario(c);
    CHECK(r.trace.empty());
    CHECK_FALSE(r.summary.residual_ns);
    CHECK_FALSE(r.summary.stealth);
    CHECK(contains(r.summary.degenerate, "residual"));
    CHECK(contains(r.summary.degenerate, "stealth"));
}

TEST_CASE("read shift on the system clock")
{
    const auto r = run_scenario(builtin_scenario("constant-3us"));
    // phc2sys sees the system clock 3 us ahead and slows it down until the
    // shifted reading agrees with the PHC, leaving the real clock 3 us behind.
    CHECK(*r.summary.residual_ns == doctest::Approx(-3000.0).epsilon(0.01));
    CHECK(*r.summary.mean_abs_measured_ns < 100.0);

    ScenarioConfig neg = builtin_scenario("constant-3us");
    neg.payloads[0].delta_ns = -3000;
    CHECK(*run_scenario(neg).summary.residual_ns == doctest::Approx(3000.0).epsilon(0.01));
}

TEST_CASE("concealed step tamper holds +delta")
{
    const auto r = run_scenario(builtin_scenario("step-tamper-3us"));
    CHECK(*r.summary.residual_ns == doctest::Approx(3000.0).epsilon(0.01));
    CHECK(*r.summary.mean_abs_measured_ns < 100.0);
}

TEST_CASE("skew scenario drifts at kappa")
{
    const auto r = run_scenario(builtin_scenario("skew-50ppb"));
    CHECK(*r.summary.slope_ppb == doctest::Approx(50.0).epsilon(0.1));
    CHECK(r.trace.records().at(199).t_s == 200);
    CHECK(r.trace.records().at(199).actual_offset_ns == doctest::Approx(10'000).epsilon(0.2));
    REQUIRE(r.summary.stealth);
    CHECK(r.summary.stealth->interval_violations == 0);
}

TEST_CASE("jitter raises the floor and mtie")
{
    const auto base = run_scenario(builtin_scenario("baseline"));
    const auto jit = run_scenario(builtin_scenario("jitter-500ns"));
    CHECK(*jit.summary.jitter_std_ns > *base.summary.jitter_std_ns);
    // compare settled windows: the baseline log includes its cold start
    auto settled = [](const Trace& t) {
        std::vector<std::int64_t> x;
        for (const auto& r : t.records())
            if (r.t_s >= 61)
                x.push_back(r.actual_offset_ns);
        return x;
    };
    CHECK(tie_mtie(settled(jit.trace), 10).mtie > tie_mtie(settled(base.trace), 10).mtie);
}

TEST_CASE("golden baseline floor")
{
    // Frozen from the reference run; any change to clock, servo or tick
    // order shows up here first.
    const auto r = run_scenario(builtin_scenario("baseline"));
    CHECK(*r.summary.jitter_std_ns == doctest::Approx(0.50589444206355938).epsilon(1e-9));
}

TEST_CASE("determinism: same config and seed, same bytes")
{
    for (const auto& name : builtin_names()) {
        ScenarioConfig c = builtin_scenario(name);
        c.path.jitter_std_ns = 200;
        c.seed = 77;
        CHECK(to_csv(run_scenario(c).trace) == to_csv(run_scenario(c).trace));
    }
    ScenarioConfig a = builtin_scenario("jitter-500ns"), b = a;
    b.seed = a.seed + 1;
    CHECK(to_csv(run_scenario(a).trace) != to_csv(run_scenario(b).trace));
}

TEST_CASE("empty chain equals bypassed interception")
{
    for (std::int64_t jitter : {0, 300}) {
        ScenarioConfig c = builtin_scenario("baseline");
        c.path.jitter_std_ns = jitter;
        ScenarioConfig bypass = c;
        bypass.bypass_interception = true;
        CHECK(to_csv(run_scenario(c).trace) == to_csv(run_scenario(bypass).trace));
    }
    // a payload that never activates is equally invisible
    ScenarioConfig idle = builtin_scenario("baseline");
    PayloadSpec p;
    p.type = PayloadSpec::Type::Jitter;
    p.sigma_ns = 500;
    p.activation = Activation::at(1'000 * kNsPerSec);
    idle.payloads.push_back(p);
    CHECK(to_csv(run_scenario(idle).trace) == to_csv(run_scenario(builtin_scenario("baseline")).trace));
}

TEST_CASE("payload streams do not perturb path jitter")
{
    ScenarioConfig plain = builtin_scenario("baseline");
    plain.path.jitter_std_ns = 500;
    ScenarioConfig attacked = plain;
    PayloadSpec p;
    p.type = PayloadSpec::Type::Jitter;
    p.hook = HookPoint::ReadSys;
    p.sigma_ns = 500;
    p.activation = Activation::immediate();
    attacked.payloads.push_back(p);
    const auto a = run_scenario(plain);
    const auto b = run_scenario(attacked);
    // The master's timestamps only depend on the true path delays.
    REQUIRE(a.exchanges.size() == b.exchanges.size());
    for (std::size_t i = 0; i < a.exchanges.size(); ++i) {
        REQUIRE(a.exchanges[i].t1 == b.exchanges[i].t1);
        REQUIRE(a.exchanges[i].t4 - a.exchanges[i].t1 == b.exchanges[i].t4 - b.exchanges[i].t1);
    }
}

TEST_CASE("builtins encode the evaluation parameters")
{
    const auto names = builtin_names();
    CHECK(names.size() == 7);
    const auto constant = builtin_scenario("constant-3us");
    CHECK(constant.payloads.at(0).delta_ns == 3000);
    CHECK(constant.payloads.at(0).hook == HookPoint::ReadSys);
    CHECK(constant.duration_s >= 100);
    for (std::int64_t k : {10, 50, 100}) {
        const auto s = builtin_scenario("skew-" + std::to_string(k) + "ppb");
        CHECK(s.payloads.at(0).kappa_ppb == k);
        CHECK(s.duration_s >= 200);
    }
    const auto j = builtin_scenario("jitter-500ns");
    CHECK(j.payloads.at(0).sigma_ns == 500);
    CHECK(j.payloads.at(0).period_n == 2);
    CHECK(builtin_scenario("baseline").payloads.empty());
    CHECK(builtin_scenario("baseline").duration_s >= 100);
    CHECK_THROWS_AS(builtin_scenario("nope"), ConfigError);
    for (const auto& n : names)
        CHECK(validate(builtin_scenario(n)).empty());
}

TEST_CASE("validation reports every bad field")
{
    ScenarioConfig c;
    c.name = "bad/name";
    c.duration_s = -1;
    PayloadSpec p;
    p.type = PayloadSpec::Type::Constant;
    p.hook = HookPoint::AdjFreqSys;
    c.payloads.push_back(p);
    PayloadSpec q;
    q.type = PayloadSpec::Type::Jitter;
    q.period_n = 0;
    q.sigma_ns = -5;
    c.payloads.push_back(q);
    c.ptp4l.kp = 2.0;
    const auto errs = validate(c);
    CHECK(contains(errs, "name"));
    CHECK(contains(errs, "duration_s"));
    CHECK(contains(errs, "payloads[0].hook"));
    CHECK(contains(errs, "payloads[1].period_n"));
    CHECK(contains(errs, "payloads[1].sigma_ns"));
    CHECK(contains(errs, "ptp4l"));
    CHECK_THROWS_AS(World{c}, ConfigError);

    ScenarioConfig b = builtin_scenario("constant-3us");
    b.bypass_interception = true;
    CHECK(contains(validate(b), "bypass_interception"));
}

TEST_CASE("suite of one matches run_scenario")
{
    const auto c = builtin_scenario("skew-10ppb");
    const auto s = run_suite({c});
    REQUIRE(s.ok());
    REQUIRE(s.results.size() == 1);
    CHECK(s.results[0].trace.records() == run_scenario(c).trace.records());
}

TEST_CASE("three-rate suite scales with kappa")
{
    const auto s = run_suite({builtin_scenario("skew-10ppb"), builtin_scenario("skew-50ppb"),
                              builtin_scenario("skew-100ppb")});
    REQUIRE(s.results.size() == 3);
    const double k10 = *s.results[0].summary.slope_ppb;
    const double k50 = *s.results[1].summary.slope_ppb;
    const double k100 = *s.results[2].summary.slope_ppb;
    CHECK(k50 / k10 == doctest::Approx(5.0).epsilon(0.1));
    CHECK(k100 / k10 == doctest::Approx(10.0).epsilon(0.1));
    CHECK(s.overlay_csv.rfind("scenario,t_s,actual_offset_ns\n", 0) == 0);
    CHECK(s.report.find("skew-50ppb") != std::string::npos);
}

TEST_CASE("suite aggregates errors")
{
    auto bad = builtin_scenario("baseline");
    bad.name = "broken";
    bad.duration_s = -3;
    const auto s = run_suite({builtin_scenario("baseline"), bad, builtin_scenario("baseline")});
    CHECK_FALSE(s.ok());
    CHECK(s.results.size() == 1);
    CHECK(contains(s.errors, "broken: "));
    CHECK(contains(s.errors, "baseline: duplicate"));
    CHECK(run_suite({}).errors.size() == 1);
}

TEST_CASE("suite is independent of scheduling")
{
    const auto configs = figure_suite();
    const auto a = run_suite(configs);
    const auto b = run_suite(configs);
    CHECK(a.overlay_csv == b.overlay_csv);
    CHECK(a.report == b.report);
}

TEST_CASE("suite writes its artifacts")
{
    const auto dir = scratch("suite");
    auto configs = figure_suite();
    for (auto& c : configs)
        c.output_dir = dir.string();
    const auto s = run_suite(configs, dir.string());
    REQUIRE(s.ok());
    for (const auto& c : configs)
        CHECK(std::filesystem::exists(dir / (c.name + ".csv")));
    CHECK(slurp(dir / "suite.csv") == s.overlay_csv);
    CHECK(slurp(dir / "report.txt") == s.report);
    CHECK(slurp(dir / "constant-3us.csv") == to_csv(s.results[1].trace));
    std::filesystem::remove_all(dir);
}

TEST_CASE("plot data")
{
    const auto r = run_scenario(builtin_scenario("constant-3us"));
    const auto dir = scratch("plot");
    const auto files = emit_plot_data(r.trace, dir.string(), PlotFormat::Both);
    REQUIRE(files.size() == 2);
    const auto data = slurp(files[0]);
    CHECK(data.rfind("t_s,actual_offset_ns\n1,", 0) == 0);
    std::size_t lines = 0;
    for (char ch : data)
        lines += ch == '\n';
    CHECK(lines == r.trace.size() + 1);

    const auto svg = slurp(files[1]);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    emit_plot_data(r.trace, dir.string(), PlotFormat::Svg);
    CHECK(slurp(files[1]) == svg);
    CHECK(render_svg({offset_series(r.trace)}, "x") == render_svg({offset_series(r.trace)}, "x"));

    CHECK_THROWS_AS(emit_plot_data(r.trace, dir.string(), PlotFormat::Data, Window{500, 600}), AnalysisError);
    CHECK_THROWS_AS(emit_plot_data(Trace{}, dir.string(), PlotFormat::Data), AnalysisError);

    const auto skew = run_scenario(builtin_scenario("skew-10ppb"));
    const auto overlay = emit_overlay({&skew.trace, &r.trace}, dir.string(), "overlay", "t & <x>");
    CHECK(slurp(overlay[1]).find("t &amp; &lt;x&gt;") != std::string::npos);
    std::filesystem::remove_all(dir);
}
