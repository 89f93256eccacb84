// Per-run results and CSV helpers.
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace handy {

struct SamplePoint {
    double time = 0.0;
    uint64_t requests_issued = 0;
    uint64_t requests_satisfied = 0;
    double mean_loaded_tuples = 0.0;  // taxonomy tuples per node
};

struct RunMetrics {
    uint64_t requests_issued = 0;
    uint64_t requests_satisfied = 0;
    uint64_t requests_failed = 0;
    uint64_t local_hits = 0;
    uint64_t remote_hits = 0;
    double hit_ratio = 0.0;      // local hits over issued requests
    double success_ratio = 0.0;  // satisfied over issued, local or remote
    bool no_requests = false;    // flags a zero denominator behind the ratios
    double mean_latency = 0.0;   // over satisfied requests, seconds

    uint64_t transmissions = 0;
    uint64_t bytes_sent = 0;
    uint64_t sadv_sent = 0;
    uint64_t sreq_sent = 0;
    uint64_t srep_sent = 0;
    uint64_t piggyback_entries_sent = 0;
    uint64_t piggyback_entries_stored = 0;

    double energy_total = 0.0;
    double energy_transmit = 0.0;
    double energy_receive = 0.0;
    double energy_idle = 0.0;
    double energy_sleep = 0.0;
    double energy_sense = 0.0;
    double max_duration_error = 0.0;  // worst node's time-accounting residue

    uint64_t ontology_fetches = 0;
    double mean_ext_tuples_final = 0.0;
    uint64_t total_ext_tuples = 0;

    std::vector<SamplePoint> samples;
};

// %.10g rendering shared by every CSV writer.
std::string formatDouble(double v);

// Metric columns in a fixed order, as (name, rendered value).
std::vector<std::pair<std::string, std::string>> metricsColumns(const RunMetrics& m);

// One CSV with caller-supplied label columns in front of the metrics.
void writeCsv(std::ostream& out, const std::vector<std::string>& label_names,
              const std::vector<std::pair<std::vector<std::string>, RunMetrics>>& rows);

void writeSamplesCsv(std::ostream& out, const std::vector<std::string>& label_names,
                     const std::vector<std::pair<std::vector<std::string>, RunMetrics>>& rows);

}  // namespace handy
