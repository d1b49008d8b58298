#include "manet/report.hpp"

#include <stdexcept>

#include "json.hpp"

namespace manet {

using nlohmann::json;

double improvement_percent(double lifetime_dsr_s, double lifetime_essdsr_s) {
    if (!(lifetime_dsr_s > 0.0)) {
        throw std::invalid_argument("improvement_percent: baseline lifetime must be > 0");
    }
    return 100.0 * (lifetime_essdsr_s - lifetime_dsr_s) / lifetime_dsr_s;
}

namespace {

json report_to_json(const RunReport& r) {
    json j;
    j["scenario_name"] = r.scenario_name;
    j["scenario_digest"] = r.scenario_digest;
    j["protocol"] = protocol_name(r.protocol);
    j["seed"] = r.seed;
    j["horizon_s"] = r.horizon_s;
    j["network_lifetime_s"] = r.network_lifetime_s;
    j["lifetime_cause"] = r.lifetime_cause;
    if (r.first_stall_s) {
        j["first_stall_s"] = *r.first_stall_s;
    } else {
        j["first_stall_s"] = nullptr;
    }
    j["injected"] = r.injected;
    j["delivered"] = r.delivered;
    json residuals = json::array();
    for (const auto& [id, joules] : r.final_residual_j) {
        residuals.push_back({{"node", id}, {"residual_j", joules}});
    }
    j["final_residual_j"] = residuals;
    json deaths = json::array();
    for (const auto& [id, t] : r.death_time_s) {
        deaths.push_back({{"node", id}, {"death_time_s", t}});
    }
    j["death_time_s"] = deaths;
    json counters;
    for (const auto& [kind, c] : r.packet_counters) {
        counters[kind] = {{"sent", c.sent}, {"received", c.received},
                          {"dropped", c.dropped}};
    }
    j["packet_counters"] = counters;
    return j;
}

RunReport report_from_json(const json& j) {
    RunReport r;
    r.scenario_name = j.at("scenario_name").get<std::string>();
    r.scenario_digest = j.at("scenario_digest").get<std::string>();
    r.protocol = j.at("protocol").get<std::string>() == "essdsr" ? Protocol::essdsr
                                                                 : Protocol::dsr;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.horizon_s = j.at("horizon_s").get<double>();
    r.network_lifetime_s = j.at("network_lifetime_s").get<double>();
    r.lifetime_cause = j.at("lifetime_cause").get<std::string>();
    if (!j.at("first_stall_s").is_null()) {
        r.first_stall_s = j.at("first_stall_s").get<double>();
    }
    r.injected = j.at("injected").get<std::int64_t>();
    r.delivered = j.at("delivered").get<std::int64_t>();
    for (const json& e : j.at("final_residual_j")) {
        r.final_residual_j.push_back(
            {e.at("node").get<NodeId>(), e.at("residual_j").get<double>()});
    }
    for (const json& e : j.at("death_time_s")) {
        r.death_time_s.push_back(
            {e.at("node").get<NodeId>(), e.at("death_time_s").get<double>()});
    }
    for (auto it = j.at("packet_counters").begin(); it != j.at("packet_counters").end();
         ++it) {
        KindCounters c;
        c.sent = it.value().at("sent").get<std::int64_t>();
        c.received = it.value().at("received").get<std::int64_t>();
        c.dropped = it.value().at("dropped").get<std::int64_t>();
        r.packet_counters[it.key()] = c;
    }
    return r;
}

}  // namespace

std::string serialize_report(const RunReport& r) {
    return report_to_json(r).dump(2) + "\n";
}

RunReport parse_report(const std::string& text) {
    return report_from_json(json::parse(text));
}

std::string serialize_comparison(const ComparisonReport& c) {
    json j;
    j["scenario_name"] = c.scenario_name;
    j["scenario_digest"] = c.scenario_digest;
    j["seed"] = c.seed;
    j["dsr"] = report_to_json(c.dsr);
    j["essdsr"] = report_to_json(c.essdsr);
    j["improvement_percent"] = c.improvement_percent;
    json residuals = json::array();
    for (const ResidualDelta& d : c.residuals) {
        residuals.push_back({{"node", d.node},
                             {"dsr_j", d.dsr_j},
                             {"essdsr_j", d.essdsr_j},
                             {"delta_j", d.delta_j}});
    }
    j["residual_delta_j"] = residuals;
    return j.dump(2) + "\n";
}

}  // namespace manet
