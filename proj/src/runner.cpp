#include "manet/runner.hpp"

#include <future>

namespace manet {

RunReport build_report(const Simulator& sim) {
    const Scenario& scn = sim.scenario();
    RunReport r;
    r.scenario_name = scn.name;
    r.scenario_digest = scenario_digest(scn);
    r.protocol = scn.protocol;
    r.seed = scn.seed;
    r.horizon_s = scn.horizon_s;
    const NetworkLifetime life = sim.network_lifetime();
    r.network_lifetime_s = life.value_s;
    r.lifetime_cause = cause_name(life.cause);
    for (const FlowRuntime& f : sim.flows()) {
        r.injected += f.injected;
        r.delivered += f.delivered;
        if (f.stalled_at_s && (!r.first_stall_s || *f.stalled_at_s < *r.first_stall_s)) {
            r.first_stall_s = f.stalled_at_s;
        }
    }
    for (const NodeState& n : sim.nodes()) {
        r.final_residual_j.push_back({n.id, n.energy.residual_j()});
    }
    for (const DeathRecord& d : sim.log().deaths) {
        r.death_time_s.push_back({d.node, d.t});
    }
    for (const auto& [kind, counters] : sim.log().counters) {
        r.packet_counters[kind_name(kind)] = counters;
    }
    return r;
}

RunArtifacts run_scenario(const Scenario& scenario) {
    Simulator sim(scenario);
    sim.run();
    RunArtifacts out;
    out.report = build_report(sim);
    out.report_json = serialize_report(out.report);
    out.trace_text = trace_text(sim.log());
    out.energy_csv = energy_csv(sim.log());
    out.deaths_csv = deaths_csv(sim.log());
    return out;
}

CompareArtifacts compare_scenario(const Scenario& scenario) {
    Scenario dsr_scn = scenario;
    dsr_scn.protocol = Protocol::dsr;
    Scenario ess_scn = scenario;
    ess_scn.protocol = Protocol::essdsr;

    auto dsr_future =
        std::async(std::launch::async, [&dsr_scn] { return run_scenario(dsr_scn); });
    RunArtifacts ess = run_scenario(ess_scn);
    RunArtifacts dsr = dsr_future.get();

    CompareArtifacts out;
    out.comparison.scenario_name = scenario.name;
    out.comparison.scenario_digest = scenario_digest(scenario);
    out.comparison.seed = scenario.seed;
    out.comparison.dsr = dsr.report;
    out.comparison.essdsr = ess.report;
    out.comparison.improvement_percent = improvement_percent(
        dsr.report.network_lifetime_s, ess.report.network_lifetime_s);
    for (std::size_t i = 0; i < dsr.report.final_residual_j.size(); ++i) {
        ResidualDelta d;
        d.node = dsr.report.final_residual_j[i].first;
        d.dsr_j = dsr.report.final_residual_j[i].second;
        d.essdsr_j = ess.report.final_residual_j[i].second;
        d.delta_j = d.essdsr_j - d.dsr_j;
        out.comparison.residuals.push_back(d);
    }
    out.comparison_json = serialize_comparison(out.comparison);
    out.dsr = std::move(dsr);
    out.essdsr = std::move(ess);
    return out;
}

}  // namespace manet
