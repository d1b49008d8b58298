#include "manet/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace manet {

using nlohmann::json;

void Scenario::validate() const {
    if (name.empty()) throw ScenarioError("name: must not be empty");
    if (!(area.width > 0.0)) throw ScenarioError("area.width: must be > 0");
    if (!(area.height > 0.0)) throw ScenarioError("area.height: must be > 0");
    if (!(radio.tx_power_w > 0.0)) throw ScenarioError("radio.tx_power_w: must be > 0");
    if (!(radio.rx_power_w > 0.0)) throw ScenarioError("radio.rx_power_w: must be > 0");
    if (!(radio.sleep_power_w > 0.0)) throw ScenarioError("radio.sleep_power_w: must be > 0");
    if (!(radio.range_m > 0.0)) throw ScenarioError("radio.range_m: must be > 0");
    if (!(radio.bandwidth_bps > 0.0)) throw ScenarioError("radio.bandwidth_bps: must be > 0");
    if (!(threshold.fraction > 0.0) || !(threshold.fraction < 1.0)) {
        throw ScenarioError("essdsr_threshold_fraction: must be in (0,1)");
    }
    if (!jitter.consistent()) {
        throw ScenarioError(
            "essdsr_jitter: 1/(scale*min_energy) must equal max_delay and all "
            "values must be > 0");
    }
    if (!(dsr_jitter_max_s > 0.0)) throw ScenarioError("dsr_jitter_max_s: must be > 0");
    if (nodes.empty()) throw ScenarioError("nodes: at least one node required");
    std::set<NodeId> ids;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const NodeSpec& n = nodes[i];
        if (!ids.insert(n.id).second) {
            throw ScenarioError("nodes: duplicate id " + std::to_string(n.id));
        }
        const std::string prefix = "nodes[" + std::to_string(n.id) + "]";
        if (!(n.initial_j > 0.0)) throw ScenarioError(prefix + ".initial_j: must be > 0");
        if (!std::isfinite(n.pos.x) || n.pos.x < 0.0 || n.pos.x > area.width) {
            throw ScenarioError(prefix + ".x: outside declared area");
        }
        if (!std::isfinite(n.pos.y) || n.pos.y < 0.0 || n.pos.y > area.height) {
            throw ScenarioError(prefix + ".y: outside declared area");
        }
    }
    if (flows.empty()) throw ScenarioError("flows: at least one flow required");
    std::set<std::pair<NodeId, NodeId>> flow_pairs;
    for (std::size_t i = 0; i < flows.size(); ++i) {
        const FlowSpec& f = flows[i];
        const std::string prefix = "flows[" + std::to_string(i) + "]";
        if (!ids.count(f.source)) throw ScenarioError(prefix + ".source: unknown node id");
        if (!ids.count(f.destination)) {
            throw ScenarioError(prefix + ".destination: unknown node id");
        }
        if (f.source == f.destination) {
            throw ScenarioError(prefix + ": source equals destination");
        }
        if (!flow_pairs.insert({f.source, f.destination}).second) {
            throw ScenarioError(prefix + ": duplicate source/destination pair");
        }
        if (f.data_bytes <= 0) throw ScenarioError(prefix + ".data_bytes: must be > 0");
        if (f.ack_bytes <= 0) throw ScenarioError(prefix + ".ack_bytes: must be > 0");
        if (!(f.send_interval_s > 0.0)) {
            throw ScenarioError(prefix + ".send_interval_s: must be > 0");
        }
    }
    if (!(horizon_s > 0.0)) throw ScenarioError("horizon_s: must be > 0");
    if (retransmit.max_attempts < 1) {
        throw ScenarioError("retransmit.max_attempts: must be >= 1");
    }
    if (!(retransmit.timeout_s > 0.0)) throw ScenarioError("retransmit.timeout_s: must be > 0");
    if (discovery.max_attempts < 1) {
        throw ScenarioError("discovery.max_attempts: must be >= 1");
    }
    if (!(discovery.retry_timeout_s > 0.0)) {
        throw ScenarioError("discovery.retry_timeout_s: must be > 0");
    }
    if (control_packet_bytes <= 0) throw ScenarioError("control_packet_bytes: must be > 0");
    if (!(snapshot_interval_s > 0.0)) throw ScenarioError("snapshot_interval_s: must be > 0");
}

std::vector<Site> Scenario::topology() const {
    std::vector<Site> out;
    out.reserve(nodes.size());
    for (const NodeSpec& n : nodes) out.push_back(Site{n.id, n.pos, true});
    return out;
}

std::vector<NodeId> Scenario::node_ids() const {
    std::vector<NodeId> out;
    out.reserve(nodes.size());
    for (const NodeSpec& n : nodes) out.push_back(n.id);
    return out;
}

Scenario paper_default() {
    Scenario s;
    s.name = "paper-default";
    s.area = Area{300.0, 200.0};
    s.radio = RadioParams{};           // 1.43 / 0.925 / 0.045 W, 250 m
    s.radio.bandwidth_bps = 1.6e6;     // shared low-rate channel; see README
    s.protocol = Protocol::dsr;
    s.toggles.promiscuous_rx = true;   // in-range nodes overhear unicast traffic
    s.horizon_s = 60.0;
    s.seed = 1;
    // Left column talks to the right column only through the two mid-field
    // relays 5 and 9; node 0 and node 11 sit 300 m apart, beyond radio range.
    const double xs[12] = {0, 0, 0, 300, 0, 150, 300, 300, 0, 150, 300, 300};
    const double ys[12] = {100, 0, 200, 0, 40, 30, 160, 200, 160, 170, 40, 100};
    for (NodeId id = 0; id < 12; ++id) {
        NodeSpec n;
        n.id = id;
        n.pos = Position{xs[id], ys[id]};
        n.initial_j = (id % 2 == 0) ? 20.0 : 10.0;
        s.nodes.push_back(n);
    }
    FlowSpec f;
    f.source = 0;
    f.destination = 11;
    f.data_bytes = 1080;
    f.ack_bytes = 40;
    f.send_interval_s = 0.05;
    s.flows.push_back(f);
    return s;
}

namespace {

double get_num(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ScenarioError(key + ": expected a number");
    return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) throw ScenarioError(key + ": expected an integer");
    return j.at(key).get<int>();
}

bool get_bool(const json& j, const std::string& key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) throw ScenarioError(key + ": expected a boolean");
    return j.at(key).get<bool>();
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["area"] = {{"width", s.area.width}, {"height", s.area.height}};
    j["radio"] = {{"tx_power_w", s.radio.tx_power_w},
                  {"rx_power_w", s.radio.rx_power_w},
                  {"sleep_power_w", s.radio.sleep_power_w},
                  {"range_m", s.radio.range_m},
                  {"bandwidth_bps", s.radio.bandwidth_bps}};
    j["protocol"] = protocol_name(s.protocol);
    j["essdsr_threshold_fraction"] = s.threshold.fraction;
    j["essdsr_jitter"] = {{"scale_per_joule_s", s.jitter.scale_per_joule_s},
                          {"max_delay_s", s.jitter.max_delay_s},
                          {"min_energy_j", s.jitter.min_energy_j}};
    j["dsr_jitter_max_s"] = s.dsr_jitter_max_s;
    j["toggles"] = {{"intermediate_cache_reply", s.toggles.intermediate_cache_reply},
                    {"rrep_energy_jitter", s.toggles.rrep_energy_jitter},
                    {"promiscuous_rx", s.toggles.promiscuous_rx},
                    {"zero_jitter", s.toggles.zero_jitter},
                    {"freeze_energy", s.toggles.freeze_energy}};
    json nodes = json::array();
    for (const NodeSpec& n : s.nodes) {
        nodes.push_back({{"id", n.id}, {"x", n.pos.x}, {"y", n.pos.y},
                         {"initial_j", n.initial_j}});
    }
    j["nodes"] = nodes;
    json flows = json::array();
    for (const FlowSpec& f : s.flows) {
        flows.push_back({{"source", f.source},
                         {"destination", f.destination},
                         {"data_bytes", f.data_bytes},
                         {"ack_bytes", f.ack_bytes},
                         {"send_interval_s", f.send_interval_s}});
    }
    j["flows"] = flows;
    j["horizon_s"] = s.horizon_s;
    j["seed"] = s.seed;
    j["retransmit"] = {{"max_attempts", s.retransmit.max_attempts},
                       {"timeout_s", s.retransmit.timeout_s}};
    j["discovery"] = {{"max_attempts", s.discovery.max_attempts},
                      {"retry_timeout_s", s.discovery.retry_timeout_s}};
    j["control_packet_bytes"] = s.control_packet_bytes;
    j["snapshot_interval_s"] = s.snapshot_interval_s;
    return j.dump(2) + "\n";
}

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ScenarioError("scenario: expected a JSON object");

    Scenario s;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) throw ScenarioError("name: expected a string");
        s.name = j.at("name").get<std::string>();
    }
    if (j.contains("area")) {
        const json& a = j.at("area");
        s.area.width = get_num(a, "width", s.area.width);
        s.area.height = get_num(a, "height", s.area.height);
    }
    if (j.contains("radio")) {
        const json& r = j.at("radio");
        s.radio.tx_power_w = get_num(r, "tx_power_w", s.radio.tx_power_w);
        s.radio.rx_power_w = get_num(r, "rx_power_w", s.radio.rx_power_w);
        s.radio.sleep_power_w = get_num(r, "sleep_power_w", s.radio.sleep_power_w);
        s.radio.range_m = get_num(r, "range_m", s.radio.range_m);
        s.radio.bandwidth_bps = get_num(r, "bandwidth_bps", s.radio.bandwidth_bps);
    }
    if (j.contains("protocol")) {
        const std::string p = j.at("protocol").is_string()
                                  ? j.at("protocol").get<std::string>()
                                  : throw ScenarioError("protocol: expected a string");
        if (p == "dsr") {
            s.protocol = Protocol::dsr;
        } else if (p == "essdsr") {
            s.protocol = Protocol::essdsr;
        } else {
            throw ScenarioError("protocol: expected \"dsr\" or \"essdsr\"");
        }
    }
    s.threshold.fraction =
        get_num(j, "essdsr_threshold_fraction", s.threshold.fraction);
    if (j.contains("essdsr_jitter")) {
        const json& e = j.at("essdsr_jitter");
        s.jitter.scale_per_joule_s =
            get_num(e, "scale_per_joule_s", s.jitter.scale_per_joule_s);
        s.jitter.max_delay_s = get_num(e, "max_delay_s", s.jitter.max_delay_s);
        s.jitter.min_energy_j = get_num(e, "min_energy_j", s.jitter.min_energy_j);
    }
    s.dsr_jitter_max_s = get_num(j, "dsr_jitter_max_s", s.dsr_jitter_max_s);
    if (j.contains("toggles")) {
        const json& t = j.at("toggles");
        s.toggles.intermediate_cache_reply =
            get_bool(t, "intermediate_cache_reply", s.toggles.intermediate_cache_reply);
        s.toggles.rrep_energy_jitter =
            get_bool(t, "rrep_energy_jitter", s.toggles.rrep_energy_jitter);
        s.toggles.promiscuous_rx = get_bool(t, "promiscuous_rx", s.toggles.promiscuous_rx);
        s.toggles.zero_jitter = get_bool(t, "zero_jitter", s.toggles.zero_jitter);
        s.toggles.freeze_energy = get_bool(t, "freeze_energy", s.toggles.freeze_energy);
    }
    if (!j.contains("nodes") || !j.at("nodes").is_array()) {
        throw ScenarioError("nodes: expected an array");
    }
    for (const json& nj : j.at("nodes")) {
        NodeSpec n;
        if (!nj.contains("id")) throw ScenarioError("nodes[].id: required");
        n.id = get_int(nj, "id", 0);
        n.pos.x = get_num(nj, "x", 0.0);
        n.pos.y = get_num(nj, "y", 0.0);
        n.initial_j = get_num(nj, "initial_j", 10.0);
        s.nodes.push_back(n);
    }
    if (!j.contains("flows") || !j.at("flows").is_array()) {
        throw ScenarioError("flows: expected an array");
    }
    for (const json& fj : j.at("flows")) {
        FlowSpec f;
        if (!fj.contains("source")) throw ScenarioError("flows[].source: required");
        if (!fj.contains("destination")) throw ScenarioError("flows[].destination: required");
        f.source = get_int(fj, "source", 0);
        f.destination = get_int(fj, "destination", 0);
        f.data_bytes = get_int(fj, "data_bytes", f.data_bytes);
        f.ack_bytes = get_int(fj, "ack_bytes", f.ack_bytes);
        f.send_interval_s = get_num(fj, "send_interval_s", f.send_interval_s);
        s.flows.push_back(f);
    }
    s.horizon_s = get_num(j, "horizon_s", s.horizon_s);
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer() && !j.at("seed").is_number_unsigned()) {
            throw ScenarioError("seed: expected an integer");
        }
        s.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("retransmit")) {
        const json& r = j.at("retransmit");
        s.retransmit.max_attempts = get_int(r, "max_attempts", s.retransmit.max_attempts);
        s.retransmit.timeout_s = get_num(r, "timeout_s", s.retransmit.timeout_s);
    }
    if (j.contains("discovery")) {
        const json& d = j.at("discovery");
        s.discovery.max_attempts = get_int(d, "max_attempts", s.discovery.max_attempts);
        s.discovery.retry_timeout_s =
            get_num(d, "retry_timeout_s", s.discovery.retry_timeout_s);
    }
    s.control_packet_bytes = get_int(j, "control_packet_bytes", s.control_packet_bytes);
    s.snapshot_interval_s = get_num(j, "snapshot_interval_s", s.snapshot_interval_s);

    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot write scenario file: " + path);
    out << serialize_scenario(s);
    if (!out) throw std::ios_base::failure("failed writing scenario file: " + path);
}

std::string scenario_digest(const Scenario& s) {
    const std::string text = serialize_scenario(s);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace manet
