// Subcommand entry points for the command line front end.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace handy::cli {

struct RunOptions {
    std::string config_path;         // empty: built-in defaults
    std::vector<std::string> sets;   // key=value overrides, applied in order
    std::string seeds;               // "7", "1,3,9" or "1..10"; empty: config seed
    std::vector<std::string> sweeps; // key=v1,v2,... expanded as a grid
    std::string out_path;            // metrics CSV; empty: standard output
    std::string trace_path;          // event trace text; empty: no trace
    std::string samples_path;        // time series CSV; empty: skip
};

struct ValidateMiningOptions {
    std::string dataset_path;  // empty: generate a correlated walk log
    uint64_t sessions = 1000;
    uint64_t seed = 1;
    uint32_t min_support = 2;
    std::string service_counts = "5,10,15,20,25";
    uint32_t session_len_min = 2;
    uint32_t session_len_max = 8;
    std::string out_path;  // empty: standard output
};

struct PaperFigsOptions {
    std::string out_dir;
    std::string seeds = "1..10";
    uint32_t nodes = 50;
    double sim_time = 2000.0;
};

int cmdRun(const RunOptions& opt);
int cmdValidateMining(const ValidateMiningOptions& opt);
int cmdPaperFigs(const PaperFigsOptions& opt);

}  // namespace handy::cli
