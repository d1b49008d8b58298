#pragma once

#include <string>

#include "manet/report.hpp"
#include "manet/scenario.hpp"
#include "manet/simulator.hpp"

namespace manet {

struct RunArtifacts {
    RunReport report;
    std::string report_json;
    std::string trace_text;
    std::string energy_csv;
    std::string deaths_csv;
};

/// Runs one scenario end to end and serializes everything a caller might
/// persist.
RunArtifacts run_scenario(const Scenario& scenario);

RunReport build_report(const Simulator& sim);

struct CompareArtifacts {
    ComparisonReport comparison;
    std::string comparison_json;
    RunArtifacts dsr;
    RunArtifacts essdsr;
};

/// Runs both protocols on the same scenario and seed. The two simulations are
/// independent instances and execute concurrently.
CompareArtifacts compare_scenario(const Scenario& scenario);

}  // namespace manet
