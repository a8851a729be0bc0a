#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ptpsim/config_io.hpp"
#include "ptpsim/plot.hpp"
#include "ptpsim/scenario.hpp"

namespace {

using namespace ptpsim;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 1;

// Builtin name first, then a JSON file on disk.
ScenarioConfig resolve_scenario(const std::string& spec)
{
    for (const auto& n : builtin_names())
        if (n == spec)
            return builtin_scenario(spec);
    if (std::filesystem::exists(spec))
        return load_config(spec);
    throw ConfigError({"scenario: '" + spec + "' is neither a builtin nor a readable file"});
}

std::optional<std::string> output_dir(const std::string& flag)
{
    if (!flag.empty())
        return flag;
    if (const char* env = std::getenv("PTPSIM_OUT_DIR"); env && *env)
        return std::string(env);
    return std::nullopt;
}

void print_degenerate(const RunResult& r)
{
    for (const auto& d : r.summary.degenerate)
        std::cout << "note: " << r.trace.meta().name << ": " << d << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Deterministic PTP client-host simulator with kernel-boundary attack payloads"};
    app.require_subcommand(1);

    std::string scenario, out_flag;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> duration;
    bool svg = false;
    auto* run = app.add_subcommand("run", "Run one scenario and print its summary");
    run->add_option("--scenario", scenario, "Builtin scenario name or JSON config file")->required();
    run->add_option("--seed", seed, "Override the RNG seed");
    run->add_option("--duration", duration, "Override the logged duration in seconds");
    run->add_option("--out", out_flag, "Output directory (default: $PTPSIM_OUT_DIR)");
    run->add_flag("--svg", svg, "Also render an SVG chart of the actual offset");

    std::string figures;
    auto* suite = app.add_subcommand("suite", "Run a scenario suite and write the overlay CSV and report");
    suite->add_option("--figures", figures, "Suite to run")->required()->check(CLI::IsMember({"paper"}));
    suite->add_option("--out", out_flag, "Output directory (default: $PTPSIM_OUT_DIR)");

    std::vector<std::string> csv_files;
    AnalysisParams params;
    auto* report = app.add_subcommand("report", "Recompute summary metrics from trace CSV files");
    report->add_option("traces", csv_files, "Trace CSV files")->required()->check(CLI::ExistingFile);
    report->add_option("--steady-start", params.steady_start_s, "First t_s of the residual window");
    report->add_option("--slope-start", params.slope_start_s, "First t_s of the slope/jitter window");
    report->add_option("--stealth-start", params.stealth_start_s, "First t_s audited by the stealth check");
    report->add_option("--filter-threshold", params.filter_threshold_ns, "Per-interval filter threshold (ns)");
    report->add_option("--drift-spec", params.drift_spec_ppb, "Drift specification (ppb)");

    app.add_subcommand("list", "List builtin scenarios");

    auto* show = app.add_subcommand("show-config", "Print the effective JSON config of a scenario");
    show->add_option("--scenario", scenario, "Builtin scenario name or JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            ScenarioConfig cfg = resolve_scenario(scenario);
            if (seed)
                cfg.seed = *seed;
            if (duration)
                cfg.duration_s = *duration;
            cfg.output_dir = output_dir(out_flag);
            const RunResult r = run_scenario(cfg);
            if (cfg.output_dir)
                emit_plot_data(r.trace, *cfg.output_dir, svg ? PlotFormat::Both : PlotFormat::Data);
            std::cout << format_report({r});
            print_degenerate(r);
            return 0;
        }

        if (*suite) {
            const auto dir = output_dir(out_flag);
            auto configs = figure_suite();
            for (auto& c : configs)
                c.output_dir = dir;
            const SuiteResult s = run_suite(configs, dir);
            if (dir) {
                std::vector<const Trace*> skews;
                for (const auto& r : s.results) {
                    emit_plot_data(r.trace, *dir, PlotFormat::Both);
                    if (r.trace.meta().name.rfind("skew-", 0) == 0)
                        skews.push_back(&r.trace);
                }
                if (!skews.empty())
                    emit_overlay(skews, *dir, "skew_overlay", "progressive skew: actual offset");
            }
            std::cout << s.report;
            for (const auto& r : s.results)
                print_degenerate(r);
            return s.ok() ? 0 : kExitRuntime;
        }

        if (*report) {
            std::vector<RunResult> results;
            for (const auto& path : csv_files) {
                RunResult r;
                r.trace = read_csv(path);
                r.trace.meta().name = std::filesystem::path(path).stem().string();
                r.summary = summarize(r.trace, params);
                results.push_back(std::move(r));
            }
            std::cout << format_report(results);
            for (const auto& r : results)
                print_degenerate(r);
            return 0;
        }

        if (app.got_subcommand("list")) {
            for (const auto& n : builtin_names())
                std::cout << n << "\n";
            return 0;
        }

        if (*show) {
            std::cout << to_json(resolve_scenario(scenario));
            return 0;
        }
    } catch (const ConfigError& e) {
        for (const auto& m : e.messages())
            std::cerr << "config error: " << m << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
