// Command line front end: single runs and sweeps, the dataset mining
// comparison, and the canned figure matrix.
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"hybrid service discovery simulator"};
    app.require_subcommand(1);

    handy::cli::RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "simulate and emit one metrics CSV");
    run->add_option("--config", run_opt.config_path, "config file (key = value lines)");
    run->add_option("--set", run_opt.sets, "override, key=value (repeatable)");
    run->add_option("--seed", run_opt.seeds, "single seed");
    run->add_option("--seeds", run_opt.seeds, "seed list: N, a,b,c or a..b")
        ->excludes(run->get_option("--seed"));
    run->add_option("--sweep", run_opt.sweeps,
                    "grid axis, key=v1,v2,... (repeatable)");
    run->add_option("--out", run_opt.out_path, "metrics CSV path (default stdout)");
    run->add_option("--trace", run_opt.trace_path, "write the event trace here");
    run->add_option("--samples", run_opt.samples_path, "write time series CSV here");

    handy::cli::ValidateMiningOptions vm_opt;
    CLI::App* vm = app.add_subcommand(
        "validate-mining", "mine a session log against a size-matched random one");
    vm->add_option("--dataset", vm_opt.dataset_path,
                   "session file, one session of service ids per line");
    vm->add_option("--sessions", vm_opt.sessions,
                   "sessions to generate when no dataset is given");
    vm->add_option("--seed", vm_opt.seed, "generator seed");
    vm->add_option("--min-support", vm_opt.min_support, "support threshold");
    vm->add_option("--service-counts", vm_opt.service_counts,
                   "truncation points, comma separated");
    vm->add_option("--session-len-min", vm_opt.session_len_min, "shortest session");
    vm->add_option("--session-len-max", vm_opt.session_len_max, "longest session");
    vm->add_option("--out", vm_opt.out_path, "table CSV path (default stdout)");

    handy::cli::PaperFigsOptions pf_opt;
    CLI::App* pf = app.add_subcommand("paper-figs",
                                      "run the canned scenario matrix to CSV files");
    pf->add_option("--out", pf_opt.out_dir, "output directory")->required();
    pf->add_option("--seeds", pf_opt.seeds, "seed list (default 1..10)");
    pf->add_option("--nodes", pf_opt.nodes, "node count (default 50)");
    pf->add_option("--sim-time", pf_opt.sim_time, "simulated seconds (default 2000)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return handy::cli::cmdRun(run_opt);
    if (vm->parsed()) return handy::cli::cmdValidateMining(vm_opt);
    return handy::cli::cmdPaperFigs(pf_opt);
}
