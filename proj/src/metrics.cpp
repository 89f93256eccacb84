#include "handy/metrics.hpp"

#include <cstdio>
#include <stdexcept>

namespace handy {

std::string formatDouble(double v) {
    char buf[64];
    int n = std::snprintf(buf, sizeof buf, "%.10g", v);
    if (n < 0 || n >= static_cast<int>(sizeof buf))
        throw std::runtime_error("number formatting failed");
    return std::string(buf, static_cast<size_t>(n));
}

std::vector<std::pair<std::string, std::string>> metricsColumns(const RunMetrics& m) {
    std::vector<std::pair<std::string, std::string>> cols;
    auto u = [&cols](const char* name, uint64_t v) {
        cols.emplace_back(name, std::to_string(v));
    };
    auto d = [&cols](const char* name, double v) {
        cols.emplace_back(name, formatDouble(v));
    };
    u("requests_issued", m.requests_issued);
    u("requests_satisfied", m.requests_satisfied);
    u("requests_failed", m.requests_failed);
    u("local_hits", m.local_hits);
    u("remote_hits", m.remote_hits);
    d("hit_ratio", m.hit_ratio);
    d("success_ratio", m.success_ratio);
    u("no_requests", m.no_requests ? 1 : 0);
    d("mean_latency", m.mean_latency);
    u("transmissions", m.transmissions);
    u("bytes_sent", m.bytes_sent);
    u("sadv_sent", m.sadv_sent);
    u("sreq_sent", m.sreq_sent);
    u("srep_sent", m.srep_sent);
    u("piggyback_entries_sent", m.piggyback_entries_sent);
    u("piggyback_entries_stored", m.piggyback_entries_stored);
    d("energy_total", m.energy_total);
    d("energy_transmit", m.energy_transmit);
    d("energy_receive", m.energy_receive);
    d("energy_idle", m.energy_idle);
    d("energy_sleep", m.energy_sleep);
    d("energy_sense", m.energy_sense);
    d("max_duration_error", m.max_duration_error);
    u("ontology_fetches", m.ontology_fetches);
    d("mean_ext_tuples_final", m.mean_ext_tuples_final);
    u("total_ext_tuples", m.total_ext_tuples);
    return cols;
}

void writeCsv(std::ostream& out, const std::vector<std::string>& label_names,
              const std::vector<std::pair<std::vector<std::string>, RunMetrics>>& rows) {
    for (const auto& name : label_names) out << name << ',';
    auto header = metricsColumns(RunMetrics{});
    for (size_t i = 0; i < header.size(); ++i)
        out << header[i].first << (i + 1 < header.size() ? "," : "\n");
    for (const auto& [labels, metrics] : rows) {
        if (labels.size() != label_names.size())
            throw std::invalid_argument("label arity mismatch");
        for (const auto& v : labels) out << v << ',';
        auto cols = metricsColumns(metrics);
        for (size_t i = 0; i < cols.size(); ++i)
            out << cols[i].second << (i + 1 < cols.size() ? "," : "\n");
    }
}

void writeSamplesCsv(std::ostream& out, const std::vector<std::string>& label_names,
                     const std::vector<std::pair<std::vector<std::string>, RunMetrics>>& rows) {
    for (const auto& name : label_names) out << name << ',';
    out << "time,requests_issued,requests_satisfied,mean_loaded_tuples\n";
    for (const auto& [labels, metrics] : rows) {
        if (labels.size() != label_names.size())
            throw std::invalid_argument("label arity mismatch");
        for (const auto& s : metrics.samples) {
            for (const auto& v : labels) out << v << ',';
            out << formatDouble(s.time) << ',' << s.requests_issued << ','
                << s.requests_satisfied << ',' << formatDouble(s.mean_loaded_tuples)
                << '\n';
        }
    }
}

}  // namespace handy
