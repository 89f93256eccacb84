#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "handy/engine.hpp"
#include "handy/metrics.hpp"
#include "handy/mining.hpp"
#include "handy/session_log.hpp"
#include "handy/sim_config.hpp"
#include "handy/workload.hpp"

namespace handy::cli {
namespace {

std::vector<std::string> splitList(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        size_t a = item.find_first_not_of(" \t");
        size_t b = item.find_last_not_of(" \t");
        if (a == std::string::npos) continue;
        out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

uint64_t parseU64(const std::string& s, const std::string& what) {
    size_t pos = 0;
    uint64_t v;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(what + ": not a number: '" + s + "'");
    }
    if (pos != s.size())
        throw std::runtime_error(what + ": trailing characters in '" + s + "'");
    return v;
}

// "7", "1,3,9" or "1..10" (inclusive).
std::vector<uint64_t> parseSeedList(const std::string& text) {
    std::vector<uint64_t> seeds;
    size_t dots = text.find("..");
    if (dots != std::string::npos) {
        uint64_t lo = parseU64(text.substr(0, dots), "seeds");
        uint64_t hi = parseU64(text.substr(dots + 2), "seeds");
        if (hi < lo) throw std::runtime_error("seeds: range is backwards: " + text);
        for (uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    for (const auto& part : splitList(text, ','))
        seeds.push_back(parseU64(part, "seeds"));
    if (seeds.empty()) throw std::runtime_error("seeds: empty list");
    return seeds;
}

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

SweepAxis parseSweep(const std::string& text) {
    size_t eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::runtime_error("sweep: expected key=v1,v2,...: '" + text + "'");
    SweepAxis axis;
    axis.key = text.substr(0, eq);
    axis.values = splitList(text.substr(eq + 1), ',');
    if (axis.values.empty())
        throw std::runtime_error("sweep: no values for '" + axis.key + "'");
    return axis;
}

std::ostream& openOrStdout(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
}

RunMetrics runOnce(const SimConfig& cfg, TraceSink* sink) {
    Simulation sim(cfg);
    if (sink) sim.setTraceSink(sink);
    return sim.run();
}

int guarded(const char* verb, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << verb << ": config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << verb << ": " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int cmdRun(const RunOptions& opt) {
    return guarded("run", [&] {
        SimConfig base = opt.config_path.empty() ? SimConfig{}
                                                 : parseConfigFile(opt.config_path);
        for (const auto& s : opt.sets) applyOverride(base, s);

        std::vector<uint64_t> seeds =
            opt.seeds.empty() ? std::vector<uint64_t>{base.seed}
                              : parseSeedList(opt.seeds);

        std::vector<SweepAxis> axes;
        for (const auto& s : opt.sweeps) axes.push_back(parseSweep(s));

        // Expand the sweep grid, first axis outermost.
        std::vector<std::vector<std::string>> grid{{}};
        for (const auto& axis : axes) {
            std::vector<std::vector<std::string>> next;
            for (const auto& row : grid)
                for (const auto& v : axis.values) {
                    auto r = row;
                    r.push_back(v);
                    next.push_back(std::move(r));
                }
            grid.swap(next);
        }

        std::ofstream trace_file;
        std::unique_ptr<TextTraceSink> trace;
        if (!opt.trace_path.empty()) {
            trace_file.open(opt.trace_path, std::ios::binary);
            if (!trace_file) throw std::runtime_error("cannot write " + opt.trace_path);
            trace = std::make_unique<TextTraceSink>(trace_file);
        }

        std::vector<std::string> label_names;
        for (const auto& axis : axes) label_names.push_back(axis.key);
        label_names.push_back("seed");

        std::vector<std::pair<std::vector<std::string>, RunMetrics>> rows;
        for (const auto& point : grid) {
            SimConfig armed = base;
            for (size_t i = 0; i < axes.size(); ++i)
                applyOverride(armed, axes[i].key + "=" + point[i]);
            for (uint64_t seed : seeds) {
                SimConfig cfg = armed;
                cfg.seed = seed;
                validateConfig(cfg);
                if (trace) {
                    trace_file << "# run";
                    for (size_t i = 0; i < axes.size(); ++i)
                        trace_file << ' ' << axes[i].key << '=' << point[i];
                    trace_file << " seed=" << seed << "\n";
                }
                RunMetrics m = runOnce(cfg, trace.get());
                auto labels = point;
                labels.push_back(std::to_string(seed));
                rows.emplace_back(std::move(labels), std::move(m));
            }
        }

        std::ofstream out_file;
        writeCsv(openOrStdout(out_file, opt.out_path), label_names, rows);
        if (!opt.samples_path.empty()) {
            std::ofstream samples(opt.samples_path, std::ios::binary);
            if (!samples) throw std::runtime_error("cannot write " + opt.samples_path);
            writeSamplesCsv(samples, label_names, rows);
        }
    });
}

namespace {

std::vector<std::vector<ServiceId>> truncateLog(
    const std::vector<std::vector<ServiceId>>& sessions, ServiceId max_id) {
    std::vector<std::vector<ServiceId>> out;
    for (const auto& s : sessions) {
        std::vector<ServiceId> kept;
        for (ServiceId id : s)
            if (id >= 1 && id <= max_id) kept.push_back(id);
        if (!kept.empty()) out.push_back(std::move(kept));
    }
    return out;
}

struct ItemsetCounts {
    size_t one = 0, two = 0, three = 0, four_plus = 0, total = 0;
};

ItemsetCounts countBySize(const MiningResults& r) {
    ItemsetCounts c;
    for (const auto& [itemset, support] : r.frequent_itemsets) {
        (void)support;
        switch (itemset.size()) {
            case 1: c.one++; break;
            case 2: c.two++; break;
            case 3: c.three++; break;
            default: c.four_plus++; break;
        }
        c.total++;
    }
    return c;
}

}  // namespace

int cmdValidateMining(const ValidateMiningOptions& opt) {
    return guarded("validate-mining", [&] {
        if (opt.min_support < 1)
            throw std::runtime_error("min-support must be at least 1");
        if (opt.session_len_min < 1 || opt.session_len_max < opt.session_len_min)
            throw std::runtime_error("bad session length range");

        CorrelationMatrix fixture = CorrelationMatrix::videoSharingFixture();
        const uint32_t universe = static_cast<uint32_t>(fixture.serviceCount());

        std::vector<std::vector<ServiceId>> dataset;
        if (!opt.dataset_path.empty()) {
            dataset = loadSessionFile(opt.dataset_path);
        } else {
            Rng rng = Rng::forStream(opt.seed, "walk-log");
            dataset = generateSessions(opt.sessions, opt.session_len_min,
                                       opt.session_len_max, universe, &fixture, rng);
        }

        // The comparison log matches the dataset session for session in
        // length, but every item is an independent uniform draw.
        Rng rng = Rng::forStream(opt.seed, "random-log");
        std::vector<std::vector<ServiceId>> random_log;
        random_log.reserve(dataset.size());
        for (const auto& s : dataset) {
            size_t len = std::min<size_t>(s.size(), universe);
            random_log.push_back(uniformSession(len, universe, rng));
        }

        std::vector<uint64_t> counts;
        for (const auto& part : splitList(opt.service_counts, ','))
            counts.push_back(parseU64(part, "service-counts"));
        if (counts.empty()) throw std::runtime_error("service-counts: empty list");

        std::ofstream out_file;
        std::ostream& out = openOrStdout(out_file, opt.out_path);
        out << "services,dataset_1,dataset_2,dataset_3,dataset_4plus,dataset_total,"
               "random_1,random_2,random_3,random_4plus,random_total\n";
        for (uint64_t c : counts) {
            if (c < 1) throw std::runtime_error("service-counts: must be positive");
            ServiceId cap = static_cast<ServiceId>(c);
            ItemsetCounts d = countBySize(
                mineFpGrowth(truncateLog(dataset, cap), opt.min_support, 0.5));
            ItemsetCounts r = countBySize(
                mineFpGrowth(truncateLog(random_log, cap), opt.min_support, 0.5));
            out << c << ',' << d.one << ',' << d.two << ',' << d.three << ','
                << d.four_plus << ',' << d.total << ',' << r.one << ',' << r.two
                << ',' << r.three << ',' << r.four_plus << ',' << r.total << "\n";
        }
    });
}

namespace {

struct Arm {
    std::string name;
    std::vector<std::string> sets;
};

struct ArmOutcome {
    std::vector<std::pair<std::vector<std::string>, RunMetrics>> rows;
    std::vector<std::string> failures;
};

ArmOutcome runArms(const SimConfig& base, const std::vector<Arm>& arms,
                   const std::vector<uint64_t>& seeds) {
    ArmOutcome out;
    for (const auto& arm : arms) {
        for (uint64_t seed : seeds) {
            try {
                SimConfig cfg = base;
                for (const auto& s : arm.sets) applyOverride(cfg, s);
                cfg.seed = seed;
                validateConfig(cfg);
                RunMetrics m = runOnce(cfg, nullptr);
                out.rows.emplace_back(
                    std::vector<std::string>{arm.name, std::to_string(seed)},
                    std::move(m));
            } catch (const std::exception& e) {
                out.failures.push_back(arm.name + " seed " + std::to_string(seed) +
                                       ": " + e.what());
            }
        }
    }
    return out;
}

void writeFigure(const std::filesystem::path& dir, const std::string& file,
                 const std::string& label, const ArmOutcome& outcome) {
    std::ofstream out(dir / file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / file).string());
    writeCsv(out, {label, "seed"}, outcome.rows);
}

// Per-arm means of the headline metrics, one row per arm.
void writeSummary(std::ostream& out, const ArmOutcome& outcome) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const RunMetrics*>> grouped;
    for (const auto& [labels, m] : outcome.rows) {
        if (!grouped.count(labels[0])) order.push_back(labels[0]);
        grouped[labels[0]].push_back(&m);
    }
    out << "arm,runs,hit_ratio,success_ratio,mean_latency,transmissions,"
           "bytes_sent,energy_total\n";
    for (const auto& name : order) {
        const auto& runs = grouped[name];
        double n = static_cast<double>(runs.size());
        double hit = 0, succ = 0, lat = 0, tx = 0, bytes = 0, energy = 0;
        for (const RunMetrics* m : runs) {
            hit += m->hit_ratio;
            succ += m->success_ratio;
            lat += m->mean_latency;
            tx += static_cast<double>(m->transmissions);
            bytes += static_cast<double>(m->bytes_sent);
            energy += m->energy_total;
        }
        out << name << ',' << runs.size() << ',' << formatDouble(hit / n) << ','
            << formatDouble(succ / n) << ',' << formatDouble(lat / n) << ','
            << formatDouble(tx / n) << ',' << formatDouble(bytes / n) << ','
            << formatDouble(energy / n) << "\n";
    }
}

}  // namespace

int cmdPaperFigs(const PaperFigsOptions& opt) {
    return guarded("paper-figs", [&] {
        if (opt.out_dir.empty()) throw std::runtime_error("--out directory required");
        std::filesystem::path dir(opt.out_dir);
        std::filesystem::create_directories(dir);

        std::vector<uint64_t> seeds = parseSeedList(opt.seeds);

        SimConfig base;
        applyOverride(base, "workload=youtube");
        base.node_count = opt.nodes;
        base.sim_time = opt.sim_time;
        validateConfig(base);

        const std::vector<Arm> discovery = {
            {"reactive", {"advertise=off", "piggyback=off"}},
            {"random_adv", {"advertise=random", "piggyback=off"}},
            {"assoc_adv", {"advertise=correlated", "piggyback=off"}},
            {"assoc_piggyback", {"advertise=correlated", "piggyback=on"}},
        };
        const std::vector<Arm> cache = {
            {"2", {"advertise=correlated", "piggyback=on", "cache_size=2"}},
            {"4", {"advertise=correlated", "piggyback=on", "cache_size=4"}},
            {"8", {"advertise=correlated", "piggyback=on", "cache_size=8"}},
            {"16", {"advertise=correlated", "piggyback=on", "cache_size=16"}},
        };
        const std::vector<Arm> speed = {
            {"5", {"advertise=correlated", "piggyback=on", "speed_max=5"}},
            {"10", {"advertise=correlated", "piggyback=on", "speed_max=10"}},
            {"20", {"advertise=correlated", "piggyback=on", "speed_max=20"}},
        };
        const std::vector<Arm> semantic = {
            {"semantic_off", {"advertise=correlated", "piggyback=on", "semantic=off"}},
            {"multilevel",
             {"advertise=correlated", "piggyback=on", "semantic=multilevel"}},
            {"unified", {"advertise=correlated", "piggyback=on", "semantic=unified"}},
        };

        std::vector<std::string> failures;
        auto collect = [&](const ArmOutcome& o) {
            failures.insert(failures.end(), o.failures.begin(), o.failures.end());
        };

        ArmOutcome fig_discovery = runArms(base, discovery, seeds);
        collect(fig_discovery);
        writeFigure(dir, "figure_discovery.csv", "arm", fig_discovery);

        ArmOutcome fig_cache = runArms(base, cache, seeds);
        collect(fig_cache);
        writeFigure(dir, "figure_cache.csv", "cache_size", fig_cache);

        ArmOutcome fig_speed = runArms(base, speed, seeds);
        collect(fig_speed);
        writeFigure(dir, "figure_speed.csv", "speed_max", fig_speed);

        ArmOutcome fig_semantic = runArms(base, semantic, seeds);
        collect(fig_semantic);
        writeFigure(dir, "figure_semantic.csv", "semantic", fig_semantic);

        // Taxonomy growth over time, from the multilevel arm.
        {
            std::vector<std::pair<std::vector<std::string>, RunMetrics>> growth;
            for (const auto& [labels, m] : fig_semantic.rows)
                if (labels[0] == "multilevel") growth.emplace_back(labels, m);
            std::ofstream out(dir / "ontology_growth.csv", std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot write " +
                                         (dir / "ontology_growth.csv").string());
            writeSamplesCsv(out, {"semantic", "seed"}, growth);
        }

        {
            std::ofstream out(dir / "summary.csv", std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot write " + (dir / "summary.csv").string());
            ArmOutcome all;
            all.rows = fig_discovery.rows;
            all.rows.insert(all.rows.end(), fig_semantic.rows.begin(),
                            fig_semantic.rows.end());
            writeSummary(out, all);
        }

        if (!failures.empty()) {
            std::ofstream out(dir / "failures.txt", std::ios::binary);
            for (const auto& f : failures) {
                out << f << "\n";
                std::cerr << "paper-figs: " << f << "\n";
            }
            throw std::runtime_error(std::to_string(failures.size()) +
                                     " arm run(s) failed; see failures.txt");
        }
    });
}

}  // namespace handy::cli
