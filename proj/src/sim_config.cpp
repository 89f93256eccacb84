#include "handy/sim_config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace handy {
namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

uint64_t parseU64(const std::string& key, const std::string& v) {
    if (v.empty() || v[0] == '-') throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    char* end = nullptr;
    errno = 0;
    uint64_t out = std::strtoull(v.c_str(), &end, 10);
    if (errno != 0 || end != v.c_str() + v.size())
        throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    return out;
}

uint32_t parseU32(const std::string& key, const std::string& v) {
    uint64_t out = parseU64(key, v);
    if (out > 0xffffffffull) throw ConfigError(key, "value '" + v + "' is too large");
    return static_cast<uint32_t>(out);
}

double parseDouble(const std::string& key, const std::string& v) {
    if (v.empty()) throw ConfigError(key, "expected a number");
    char* end = nullptr;
    errno = 0;
    double out = std::strtod(v.c_str(), &end);
    if (errno != 0 || end != v.c_str() + v.size())
        throw ConfigError(key, "expected a number, got '" + v + "'");
    return out;
}

bool parseBool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw ConfigError(key, "expected true/false, got '" + v + "'");
}

[[noreturn]] void badChoice(const std::string& key, const std::string& v,
                            const char* allowed) {
    throw ConfigError(key, "unknown value '" + v + "' (allowed: " + allowed + ")");
}

void assignKey(SimConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "node_count") cfg.node_count = parseU32(key, value);
    else if (key == "sim_time") cfg.sim_time = parseDouble(key, value);
    else if (key == "seed") cfg.seed = parseU64(key, value);
    else if (key == "area_width") cfg.area_width = parseDouble(key, value);
    else if (key == "area_height") cfg.area_height = parseDouble(key, value);
    else if (key == "mobility") {
        if (value == "static") cfg.mobility = MobilityKind::Static;
        else if (value == "random_waypoint") cfg.mobility = MobilityKind::RandomWaypoint;
        else if (value == "street") cfg.mobility = MobilityKind::Street;
        else badChoice(key, value, "static, random_waypoint, street");
    }
    else if (key == "speed_min") cfg.speed_min = parseDouble(key, value);
    else if (key == "speed_max") cfg.speed_max = parseDouble(key, value);
    else if (key == "street_grid") cfg.street_grid = parseU32(key, value);
    else if (key == "radio_range") cfg.radio_range = parseDouble(key, value);
    else if (key == "bitrate") cfg.bitrate = parseDouble(key, value);
    else if (key == "protocol") {
        if (value == "aodv") cfg.protocol = RoutingProtocol::Aodv;
        else if (value == "dsr") cfg.protocol = RoutingProtocol::Dsr;
        else badChoice(key, value, "aodv, dsr");
    }
    else if (key == "ttl") cfg.ttl = parseU32(key, value);
    else if (key == "route_lifetime") cfg.route_lifetime = parseDouble(key, value);
    else if (key == "dedup_cache") cfg.dedup_cache = parseU32(key, value);
    else if (key == "cache_size") cfg.cache_size = parseU32(key, value);
    else if (key == "epsilon") cfg.epsilon = parseDouble(key, value);
    else if (key == "eta") cfg.eta = parseDouble(key, value);
    else if (key == "zeta") cfg.zeta = parseDouble(key, value);
    else if (key == "advertise") {
        if (value == "off") cfg.advertise = AdvertiseMode::Off;
        else if (value == "random") cfg.advertise = AdvertiseMode::Random;
        else if (value == "correlated") cfg.advertise = AdvertiseMode::Correlated;
        else badChoice(key, value, "off, random, correlated");
    }
    else if (key == "adv_period") cfg.adv_period = parseDouble(key, value);
    else if (key == "adv_length") cfg.adv_length = parseU32(key, value);
    else if (key == "piggyback") cfg.piggyback = parseBool(key, value);
    else if (key == "request_timeout") cfg.request_timeout = parseDouble(key, value);
    else if (key == "request_retries") cfg.request_retries = parseU32(key, value);
    else if (key == "workload") {
        if (value == "random") cfg.workload = WorkloadKind::Random;
        else if (value == "correlated") cfg.workload = WorkloadKind::Correlated;
        else if (value == "youtube") cfg.workload = WorkloadKind::YouTube;
        else badChoice(key, value, "random, correlated, youtube");
    }
    else if (key == "service_count") cfg.service_count = parseU32(key, value);
    else if (key == "session_len_min") cfg.session_len_min = parseU32(key, value);
    else if (key == "session_len_max") cfg.session_len_max = parseU32(key, value);
    else if (key == "min_support") cfg.min_support = parseU32(key, value);
    else if (key == "log_capacity") cfg.log_capacity = parseU32(key, value);
    else if (key == "semantic") {
        if (value == "off") cfg.semantic = SemanticMode::Off;
        else if (value == "multilevel") cfg.semantic = SemanticMode::Multilevel;
        else if (value == "unified") cfg.semantic = SemanticMode::Unified;
        else badChoice(key, value, "off, multilevel, unified");
    }
    else if (key == "semantic_delay_per_concept") cfg.semantic_delay_per_concept = parseDouble(key, value);
    else if (key == "power_tx") cfg.power.transmit = parseDouble(key, value);
    else if (key == "power_rx") cfg.power.receive = parseDouble(key, value);
    else if (key == "power_idle") cfg.power.idle = parseDouble(key, value);
    else if (key == "power_sleep") cfg.power.sleep = parseDouble(key, value);
    else if (key == "power_sense") cfg.power.sense = parseDouble(key, value);
    else if (key == "metrics_sample_interval") cfg.metrics_sample_interval = parseDouble(key, value);
    else throw ConfigError(key, "unknown key");
}

}  // namespace

SimConfig parseConfigText(const std::string& text, const std::string& origin) {
    SimConfig cfg;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no),
                              "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no), "empty key");
        assignKey(cfg, key, value);
    }
    return cfg;
}

SimConfig parseConfigFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream text;
    text << in.rdbuf();
    return parseConfigText(text.str(), path);
}

void applyOverride(SimConfig& cfg, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError(assignment, "override must look like key=value");
    std::string key = trim(assignment.substr(0, eq));
    std::string value = trim(assignment.substr(eq + 1));
    if (key.empty()) throw ConfigError(assignment, "override must look like key=value");
    assignKey(cfg, key, value);
}

void validateConfig(const SimConfig& cfg) {
    auto demand = [](bool ok, const char* field, const char* why) {
        if (!ok) throw ConfigError(field, why);
    };
    demand(cfg.node_count >= 1, "node_count", "need at least one node");
    demand(cfg.sim_time > 0.0, "sim_time", "must be positive");
    demand(cfg.area_width > 0.0, "area_width", "must be positive");
    demand(cfg.area_height > 0.0, "area_height", "must be positive");
    demand(cfg.speed_min > 0.0, "speed_min", "must be positive");
    demand(cfg.speed_max >= cfg.speed_min, "speed_max", "must be at least speed_min");
    demand(cfg.street_grid >= 2, "street_grid", "need at least 2 intersections per side");
    demand(cfg.radio_range > 0.0, "radio_range", "must be positive");
    demand(cfg.bitrate > 0.0, "bitrate", "must be positive");
    demand(cfg.ttl >= 1, "ttl", "must be at least 1");
    demand(cfg.route_lifetime > 0.0, "route_lifetime", "must be positive");
    demand(cfg.dedup_cache >= 1, "dedup_cache", "must be at least 1");
    demand(cfg.cache_size >= 1, "cache_size", "must be at least 1");
    demand(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0, "epsilon", "must lie in [0, 1]");
    demand(cfg.eta >= 0.0 && cfg.eta <= 1.0, "eta", "must lie in [0, 1]");
    demand(cfg.zeta > 0.0, "zeta", "must be positive");
    demand(cfg.adv_period > 0.0, "adv_period", "must be positive");
    demand(cfg.adv_length >= 1, "adv_length", "must be at least 1");
    demand(cfg.request_timeout > 0.0, "request_timeout", "must be positive");
    demand(cfg.service_count >= 1, "service_count", "need at least one service");
    demand(cfg.session_len_min >= 1, "session_len_min", "must be at least 1");
    demand(cfg.session_len_max >= cfg.session_len_min, "session_len_max",
           "must be at least session_len_min");
    demand(cfg.min_support >= 1, "min_support", "must be at least 1");
    demand(cfg.log_capacity >= 1, "log_capacity", "must be at least 1");
    demand(cfg.semantic_delay_per_concept >= 0.0, "semantic_delay_per_concept",
           "must be non-negative");
    demand(cfg.metrics_sample_interval > 0.0, "metrics_sample_interval",
           "must be positive");
    demand(cfg.power.transmit >= 0.0, "power_tx", "must be non-negative");
    demand(cfg.power.receive >= 0.0, "power_rx", "must be non-negative");
    demand(cfg.power.idle >= 0.0, "power_idle", "must be non-negative");
    demand(cfg.power.sleep >= 0.0, "power_sleep", "must be non-negative");
    demand(cfg.power.sense >= 0.0, "power_sense", "must be non-negative");
    if (cfg.workload == WorkloadKind::YouTube && cfg.service_count != 25)
        throw ConfigError("service_count",
                          "the youtube workload is defined over exactly 25 services");
}

const char* toString(MobilityKind k) {
    switch (k) {
        case MobilityKind::Static: return "static";
        case MobilityKind::RandomWaypoint: return "random_waypoint";
        case MobilityKind::Street: return "street";
    }
    return "?";
}

const char* toString(RoutingProtocol p) {
    switch (p) {
        case RoutingProtocol::Aodv: return "aodv";
        case RoutingProtocol::Dsr: return "dsr";
    }
    return "?";
}

const char* toString(AdvertiseMode m) {
    switch (m) {
        case AdvertiseMode::Off: return "off";
        case AdvertiseMode::Random: return "random";
        case AdvertiseMode::Correlated: return "correlated";
    }
    return "?";
}

const char* toString(WorkloadKind k) {
    switch (k) {
        case WorkloadKind::Random: return "random";
        case WorkloadKind::Correlated: return "correlated";
        case WorkloadKind::YouTube: return "youtube";
    }
    return "?";
}

const char* toString(SemanticMode m) {
    switch (m) {
        case SemanticMode::Off: return "off";
        case SemanticMode::Multilevel: return "multilevel";
        case SemanticMode::Unified: return "unified";
    }
    return "?";
}

}  // namespace handy
