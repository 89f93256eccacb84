// Simulation parameters, file parsing and validation.
//
// Config files are flat `key = value` lines; '#' starts a comment. Every
// key has a default, so an empty file is a valid 50-node run.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "handy/energy.hpp"

namespace handy {

class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& field, const std::string& why)
        : std::runtime_error(field + ": " + why), field_(field) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

enum class MobilityKind { Static, RandomWaypoint, Street };
enum class RoutingProtocol { Aodv, Dsr };
enum class AdvertiseMode { Off, Random, Correlated };
enum class WorkloadKind { Random, Correlated, YouTube };
enum class SemanticMode { Off, Multilevel, Unified };

struct SimConfig {
    uint32_t node_count = 50;
    double sim_time = 5000.0;  // seconds
    uint64_t seed = 1;

    double area_width = 500.0;  // meters
    double area_height = 500.0;
    MobilityKind mobility = MobilityKind::RandomWaypoint;
    double speed_min = 1.0;  // m/s
    double speed_max = 20.0;
    uint32_t street_grid = 5;  // intersections per side

    double radio_range = 100.0;  // meters
    double bitrate = 2e6;        // bits per second

    RoutingProtocol protocol = RoutingProtocol::Aodv;
    uint32_t ttl = 8;
    double route_lifetime = 300.0;
    uint32_t dedup_cache = 128;

    uint32_t cache_size = 8;  // remote service entries per node

    double epsilon = 0.5;  // correlation threshold
    double eta = 0.5;      // random matrix density
    double zeta = 30.0;    // session gap, seconds

    AdvertiseMode advertise = AdvertiseMode::Off;
    double adv_period = 60.0;
    uint32_t adv_length = 4;  // services per advertisement
    bool piggyback = false;

    double request_timeout = 60.0;
    uint32_t request_retries = 1;

    WorkloadKind workload = WorkloadKind::Random;
    uint32_t service_count = 25;
    uint32_t session_len_min = 2;
    uint32_t session_len_max = 8;

    uint32_t min_support = 2;
    uint32_t log_capacity = 64;

    SemanticMode semantic = SemanticMode::Off;
    double semantic_delay_per_concept = 0.01;  // seconds per loaded tuple

    PowerProfile power;

    double metrics_sample_interval = 50.0;
};

// Throws ConfigError naming the offending key.
SimConfig parseConfigText(const std::string& text, const std::string& origin);
SimConfig parseConfigFile(const std::string& path);

// Applies one `key=value` override in place.
void applyOverride(SimConfig& cfg, const std::string& assignment);

// Range and consistency checks; throws ConfigError.
void validateConfig(const SimConfig& cfg);

const char* toString(MobilityKind);
const char* toString(RoutingProtocol);
const char* toString(AdvertiseMode);
const char* toString(WorkloadKind);
const char* toString(SemanticMode);

}  // namespace handy
