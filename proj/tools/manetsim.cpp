// Command-line front end: run one protocol, compare both, validate a scenario
// file, or emit the built-in default scenario.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "manet/runner.hpp"
#include "manet/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitScenario = 2;
constexpr int kExitIo = 3;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open " + path.string());
    out << content;
    if (!out) throw std::ios_base::failure("failed writing " + path.string());
}

manet::Scenario resolve_scenario(const std::string& scenario_path,
                                 std::optional<std::string> protocol,
                                 std::optional<std::uint64_t> seed,
                                 std::optional<double> horizon) {
    manet::Scenario s = scenario_path.empty() ? manet::paper_default()
                                              : manet::load_scenario(scenario_path);
    if (protocol) {
        s.protocol = *protocol == "essdsr" ? manet::Protocol::essdsr
                                           : manet::Protocol::dsr;
    }
    if (seed) s.seed = *seed;
    if (horizon) s.horizon_s = *horizon;
    s.validate();
    return s;
}

void write_run_artifacts(const fs::path& dir, const std::string& prefix,
                         const manet::RunArtifacts& a) {
    write_file(dir / (prefix + "report.json"), a.report_json);
    write_file(dir / (prefix + "trace.txt"), a.trace_text);
    write_file(dir / (prefix + "energy.csv"), a.energy_csv);
    write_file(dir / (prefix + "deaths.csv"), a.deaths_csv);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Packet-level DSR / ESSDSR simulator for static wireless ad hoc networks"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::string protocol_arg;
    std::optional<std::uint64_t> seed_arg;
    std::optional<double> horizon_arg;

    auto add_common = [&](CLI::App* cmd, bool with_protocol) {
        cmd->add_option("--scenario", scenario_path,
                        "Scenario file (defaults to the built-in paper-default)");
        cmd->add_option("--out", out_dir, "Output directory");
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { seed_arg = v; }, "Override the seed");
        cmd->add_option_function<double>(
            "--horizon", [&](double v) { horizon_arg = v; },
            "Override the horizon in seconds");
        if (with_protocol) {
            cmd->add_option("--protocol", protocol_arg, "dsr or essdsr")
                ->check(CLI::IsMember({"dsr", "essdsr"}));
        }
    };

    CLI::App* run_cmd = app.add_subcommand("run", "Run one protocol and write traces");
    add_common(run_cmd, true);
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Run both protocols with the same seed");
    add_common(compare_cmd, false);
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Check a scenario file and exit");
    validate_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    CLI::App* emit_cmd = app.add_subcommand("emit-default-scenario",
                                            "Write the built-in scenario as JSON");
    std::string emit_path;
    emit_cmd->add_option("--out", emit_path, "Target file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(validate_cmd)) {
            manet::Scenario s = manet::load_scenario(scenario_path);
            std::printf("ok: %s (%zu nodes, %zu flows, %.3f s horizon)\n",
                        s.name.c_str(), s.nodes.size(), s.flows.size(), s.horizon_s);
            return kExitOk;
        }
        if (app.got_subcommand(emit_cmd)) {
            const std::string text = manet::serialize_scenario(manet::paper_default());
            if (emit_path.empty()) {
                std::fputs(text.c_str(), stdout);
            } else {
                write_file(emit_path, text);
                std::printf("wrote %s\n", emit_path.c_str());
            }
            return kExitOk;
        }
        if (app.got_subcommand(run_cmd)) {
            std::optional<std::string> proto;
            if (!protocol_arg.empty()) proto = protocol_arg;
            manet::Scenario s =
                resolve_scenario(scenario_path, proto, seed_arg, horizon_arg);
            manet::RunArtifacts a = manet::run_scenario(s);
            fs::create_directories(out_dir);
            write_run_artifacts(out_dir, "", a);
            std::printf(
                "%s %s seed=%llu: lifetime=%.3f s (%s), delivered=%lld/%lld, "
                "deaths=%zu\n",
                s.name.c_str(), manet::protocol_name(s.protocol),
                static_cast<unsigned long long>(s.seed), a.report.network_lifetime_s,
                a.report.lifetime_cause.c_str(),
                static_cast<long long>(a.report.delivered),
                static_cast<long long>(a.report.injected),
                a.report.death_time_s.size());
            return kExitOk;
        }
        // compare
        manet::Scenario s =
            resolve_scenario(scenario_path, std::nullopt, seed_arg, horizon_arg);
        manet::CompareArtifacts c = manet::compare_scenario(s);
        fs::create_directories(out_dir);
        write_run_artifacts(out_dir, "dsr_", c.dsr);
        write_run_artifacts(out_dir, "essdsr_", c.essdsr);
        write_file(fs::path(out_dir) / "comparison.json", c.comparison_json);
        std::printf("%s seed=%llu: dsr=%.3f s (%s), essdsr=%.3f s (%s), improvement=%.2f%%\n",
                    s.name.c_str(), static_cast<unsigned long long>(s.seed),
                    c.comparison.dsr.network_lifetime_s,
                    c.comparison.dsr.lifetime_cause.c_str(),
                    c.comparison.essdsr.network_lifetime_s,
                    c.comparison.essdsr.lifetime_cause.c_str(),
                    c.comparison.improvement_percent);
        return kExitOk;
    } catch (const manet::ScenarioError& e) {
        std::fprintf(stderr, "scenario error: %s\n", e.what());
        return kExitScenario;
    } catch (const std::ios_base::failure& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
}
