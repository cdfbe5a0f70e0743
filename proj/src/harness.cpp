#include "gse/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gse/benchmarks.hpp"
#include "gse/sysmodel.hpp"

namespace gse {

namespace {

constexpr const char* kFormatVersion = "1";

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long r = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

ReductionMethod parse_reduction(const std::string& v) {
    if (v == "pca") return ReductionMethod::PCA;
    if (v == "girard") return ReductionMethod::Girard;
    throw config_error("config: reduction must be 'pca' or 'girard', got '" + v + "'");
}

std::string sanitize(const std::string& name) {
    std::string out = name;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return out;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + tmp);
        f << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string fmt(double v, const char* spec = "%.9g") {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    bool seeds_set = false;
    std::string section;  // empty = global
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config line " + std::to_string(lineno) +
                                   ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!method_from_name(section))
                throw config_error("config line " + std::to_string(lineno) +
                                   ": unknown method section '" + section + "'");
            cfg.overrides.emplace(section, MethodOverride{});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!section.empty()) {
            MethodOverride& ov = cfg.overrides[section];
            if (key == "max_order") ov.maxOrder = parse_real(key, value);
            else if (key == "max_constraints") ov.maxConstraints = int(parse_int(key, value));
            else if (key == "partitions") ov.partitions = int(parse_int(key, value));
            else if (key == "reduction") ov.reduction = parse_reduction(value);
            else
                throw config_error("config line " + std::to_string(lineno) +
                                   ": unknown per-method key '" + key + "'");
            continue;
        }
        if (key == "benchmark") cfg.benchmark = value;
        else if (key == "methods") cfg.methods = split_list(value);
        else if (key == "seeds") {
            cfg.seeds.clear();
            for (const auto& s : split_list(value))
                cfg.seeds.push_back(std::uint64_t(parse_int(key, s)));
            seeds_set = true;
        } else if (key == "steps") cfg.steps = int(parse_int(key, value));
        else if (key == "cutoff") cfg.cutoff = int(parse_int(key, value));
        else if (key == "out") cfg.outDir = value;
        else if (key == "direction_seed") cfg.directionSeed = std::uint64_t(parse_int(key, value));
        else if (key == "jobs") cfg.jobs = int(parse_int(key, value));
        else if (key == "step_timeout_s") cfg.stepTimeoutS = parse_real(key, value);
        else
            throw config_error("config line " + std::to_string(lineno) + ": unknown key '" +
                               key + "'");
    }
    if (cfg.methods.size() == 1 && cfg.methods[0] == "all") {
        cfg.methods.clear();
        for (auto m : all_methods()) cfg.methods.push_back(method_name(m));
    }
    if (!seeds_set && cfg.seeds.empty()) cfg.seeds = {1, 2, 3, 4, 5};
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw config_error("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

void validate_config(const RunConfig& cfg) {
    if (cfg.benchmark.empty()) throw config_error("config: 'benchmark' is required");
    try {
        (void)make_benchmark(cfg.benchmark);
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    if (cfg.methods.empty()) throw config_error("config: 'methods' must list at least one method");
    for (const auto& name : cfg.methods) {
        if (method_from_name(name)) continue;
        std::string msg = "config: unknown method '" + name + "'; available:";
        for (auto m : all_methods()) msg += " " + method_name(m);
        throw config_error(msg);
    }
    if (cfg.seeds.empty()) throw config_error("config: 'seeds' must list at least one seed");
    if (cfg.steps < 1) throw config_error("config: 'steps' must be >= 1");
    if (cfg.cutoff < 0 || cfg.cutoff > cfg.steps)
        throw config_error("config: 'cutoff' must lie in [0, steps]");
    if (cfg.jobs < 1) throw config_error("config: 'jobs' must be >= 1");
    if (!(cfg.stepTimeoutS > 0.0)) throw config_error("config: 'step_timeout_s' must be > 0");
    for (const auto& [name, ov] : cfg.overrides) {
        if (ov.maxOrder && !(*ov.maxOrder >= 1.0))
            throw config_error("config: [" + name + "] max_order must be >= 1");
        if (ov.maxConstraints && *ov.maxConstraints < 0)
            throw config_error("config: [" + name + "] max_constraints must be >= 0");
        if (ov.partitions && *ov.partitions < 1)
            throw config_error("config: [" + name + "] partitions must be >= 1");
    }
}

ObserverConfig resolve_observer_config(ObserverMethod m, const BenchmarkSpec& bench,
                                       const RunConfig& cfg) {
    ObserverConfig oc = default_config(m, bench);
    const auto it = cfg.overrides.find(method_name(m));
    if (it != cfg.overrides.end()) {
        const MethodOverride& ov = it->second;
        if (ov.maxOrder) oc.maxOrder = *ov.maxOrder;
        if (ov.maxConstraints) oc.maxConstraints = *ov.maxConstraints;
        if (ov.partitions) oc.partitions = *ov.partitions;
        if (ov.reduction) oc.reduction = *ov.reduction;
    }
    return oc;
}

namespace {

struct CellRun {
    CellResult result;
    std::vector<IntervalVector> hulls;  // recorded until divergence
    double vTildeFull = std::numeric_limits<double>::infinity();
    double wTildeFull = std::numeric_limits<double>::infinity();
    double vTildeCut = std::numeric_limits<double>::infinity();
    double wTildeCut = std::numeric_limits<double>::infinity();
};

CellRun run_cell(const RunConfig& cfg, const BenchmarkSpec& bench, ObserverMethod m,
                 const Trajectory& traj, const std::vector<Eigen::VectorXd>& directions) {
    CellRun cell;
    cell.result.method = method_name(m);
    cell.result.seed = traj.seed;
    const ObserverConfig oc = resolve_observer_config(m, bench, cfg);

    std::vector<SetValue> estimates;
    ObserverState st = observer_init(oc, bench.system, bench.R0, traj.measurements[0]);
    if (!st.diverged) estimates.push_back(reported_estimate(oc, st));
    double total_ms = 0.0;
    int stepped = 0;
    while (!st.diverged && st.step < cfg.steps) {
        const auto t0 = std::chrono::steady_clock::now();
        st = observer_step(oc, st, bench.system, traj.inputs[std::size_t(st.step)],
                           traj.measurements[std::size_t(st.step) + 1]);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        total_ms += ms;
        ++stepped;
        if (!st.diverged && ms > cfg.stepTimeoutS * 1000.0) {
            st.diverged = true;
            st.reason = "step exceeded the " + fmt(cfg.stepTimeoutS, "%g") + " s timeout";
        }
        if (!st.diverged) estimates.push_back(reported_estimate(oc, st));
    }
    if (st.diverged) {
        cell.result.divergenceStep = st.step;
        cell.result.divergenceReason = st.reason;
    }

    MetricReport& rep = cell.result.report;
    rep.completedSteps = int(estimates.empty() ? 0 : estimates.size() - 1);
    rep.diverged = st.diverged;
    rep.avgStepTimeMs = stepped > 0 ? total_ms / stepped : 0.0;
    const Eigen::Index n = bench.system.n();
    if (!st.diverged) {
        cell.vTildeFull = interval_volume_measure(estimates, n);
        cell.wTildeFull = mean_width_measure(estimates, directions);
    }
    if (cfg.cutoff > 0 && rep.completedSteps >= cfg.cutoff) {
        cell.vTildeCut = interval_volume_measure(estimates, n, std::size_t(cfg.cutoff) + 1);
        cell.wTildeCut = mean_width_measure(estimates, directions, std::size_t(cfg.cutoff) + 1);
    }
    rep.vTilde = cell.vTildeFull;
    rep.wTilde = cell.wTildeFull;

    cell.hulls.reserve(estimates.size());
    for (const auto& e : estimates) cell.hulls.push_back(interval_hull(e));
    return cell;
}

std::string hull_csv(const Trajectory& traj, const std::vector<IntervalVector>& hulls) {
    std::string out = "k";
    const Eigen::Index n = hulls.empty() ? 0 : hulls[0].dim();
    for (Eigen::Index i = 0; i < n; ++i) {
        out += ",lo" + std::to_string(i + 1);
        out += ",hi" + std::to_string(i + 1);
    }
    out += "\n";
    for (std::size_t k = 0; k < hulls.size(); ++k) {
        out += std::to_string(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            out += "," + fmt(hulls[k].lo[i], "%.17g");
            out += "," + fmt(hulls[k].hi[i], "%.17g");
        }
        out += "\n";
    }
    (void)traj;
    return out;
}

/// Mean of per-seed values; any infinity dominates (a diverged seed makes the
/// method's table entry infinite, matching the "assigned infinity" rule).
double seed_mean(const std::vector<double>& vals) {
    double acc = 0.0;
    for (double v : vals) {
        if (std::isinf(v)) return v;
        acc += v;
    }
    return vals.empty() ? std::numeric_limits<double>::infinity() : acc / double(vals.size());
}

std::string summary_table(const std::vector<std::string>& methods,
                          const std::map<std::string, std::vector<const CellRun*>>& by_method,
                          bool cut) {
    // aggregate per method, then normalize across methods
    std::vector<double> vt, wt, tm;
    for (const auto& name : methods) {
        std::vector<double> v, w, t;
        for (const CellRun* c : by_method.at(name)) {
            v.push_back(cut ? c->vTildeCut : c->vTildeFull);
            w.push_back(cut ? c->wTildeCut : c->wTildeFull);
            t.push_back(c->result.report.avgStepTimeMs);
        }
        vt.push_back(seed_mean(v));
        wt.push_back(seed_mean(w));
        tm.push_back(seed_mean(t));
    }
    std::vector<double> vhat, what;
    bool any_finite = false;
    for (double v : vt)
        if (std::isfinite(v)) any_finite = true;
    if (any_finite) {
        vhat = normalize(vt);
        what = normalize(wt);
    } else {
        vhat = vt;
        what = wt;
    }
    // rows grouped by method category
    std::vector<std::pair<std::string, MetricReport>> rows;
    for (int cat = 0; cat < 3; ++cat) {
        for (std::size_t i = 0; i < methods.size(); ++i) {
            const auto m = *method_from_name(methods[i]);
            if (int(method_category(m)) != cat) continue;
            MetricReport r;
            r.avgStepTimeMs = tm[i];
            r.vHat = vhat[i];
            r.wHat = what[i];
            rows.emplace_back(methods[i], r);
        }
    }
    return metric_table_csv(rows);
}

}  // namespace

RunOutcome run_comparison(const RunConfig& cfg) {
    validate_config(cfg);
    BenchmarkSpec bench = make_benchmark(cfg.benchmark);
    bench.steps = cfg.steps;
    bench.input_profile.resize(std::size_t(cfg.steps),
                               bench.input_profile.empty()
                                   ? Eigen::VectorXd(Eigen::VectorXd::Zero(bench.system.m()))
                                   : bench.input_profile.back());

    const bool verbose = [] {
        const char* lvl = std::getenv("GE_LOG");
        return lvl && std::string(lvl) != "quiet" && std::string(lvl) != "";
    }();

    // shared protocol per seed: one trajectory, one direction set
    std::vector<Trajectory> trajectories;
    for (auto seed : cfg.seeds)
        trajectories.push_back(
            simulate(bench.system, bench.R0, bench.input_profile, cfg.steps, seed));
    const auto directions = sample_directions(bench.system.n(), cfg.directionSeed);

    struct Job {
        std::size_t seed_idx;
        ObserverMethod method;
    };
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s)
        for (const auto& name : cfg.methods) jobs.push_back({s, *method_from_name(name)});

    std::vector<CellRun> cells(jobs.size());
    std::atomic<std::size_t> next{0};
    const int workers = std::max(1, std::min<int>(cfg.jobs, int(jobs.size())));
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            cells[i] = run_cell(cfg, bench, jobs[i].method, trajectories[jobs[i].seed_idx],
                                directions);
            if (verbose)
                std::fprintf(stderr, "[gse] %s seed %llu: %s\n",
                             cells[i].result.method.c_str(),
                             static_cast<unsigned long long>(cells[i].result.seed),
                             cells[i].result.report.diverged
                                 ? cells[i].result.divergenceReason.c_str()
                                 : "ok");
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::filesystem::create_directories(cfg.outDir);
    RunOutcome out;
    const std::string base = sanitize(cfg.benchmark);
    const auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = cfg.outDir + "/" + name;
        write_atomic(path, content);
        out.files.push_back(path);
    };

    std::map<std::string, std::vector<const CellRun*>> by_method;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        by_method[cells[i].result.method].push_back(&cells[i]);
        out.cells.push_back(cells[i].result);
        if (!cells[i].result.report.diverged) out.anyFinite = true;
        emit(base + "_" + sanitize(cells[i].result.method) + "_seed" +
                 std::to_string(cfg.seeds[jobs[i].seed_idx]) + "_steps.csv",
             hull_csv(trajectories[jobs[i].seed_idx], cells[i].hulls));
    }

    emit(base + "_summary.csv", summary_table(cfg.methods, by_method, false));
    if (cfg.cutoff > 0)
        emit(base + "_summary_cutoff" + std::to_string(cfg.cutoff) + ".csv",
             summary_table(cfg.methods, by_method, true));

    // raw per-seed rows
    {
        std::string raw =
            "method,seed,time_ms,v_tilde,w_tilde,completed_steps,diverged,reason\n";
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const CellResult& r = cells[i].result;
            raw += r.method + "," + std::to_string(r.seed) + "," +
                   fmt(r.report.avgStepTimeMs) + "," + fmt(r.report.vTilde) + "," +
                   fmt(r.report.wTilde) + "," + std::to_string(r.report.completedSteps) + "," +
                   (r.report.diverged ? "1" : "0") + "," + r.divergenceReason + "\n";
        }
        emit(base + "_per_seed.csv", raw);
    }

    // manifest with content hashes pins the protocol
    {
        nlohmann::json man;
        man["format_version"] = kFormatVersion;
        man["benchmark"] = cfg.benchmark;
        man["methods"] = cfg.methods;
        man["seeds"] = cfg.seeds;
        man["steps"] = cfg.steps;
        man["cutoff"] = cfg.cutoff;
        man["direction_seed"] = cfg.directionSeed;
        char hex[32];
        nlohmann::json files = nlohmann::json::object();
        for (const auto& path : out.files) {
            std::ifstream f(path, std::ios::binary);
            std::stringstream ss;
            ss << f.rdbuf();
            std::snprintf(hex, sizeof(hex), "%016llx",
                          static_cast<unsigned long long>(fnv1a64(ss.str())));
            files[std::filesystem::path(path).filename().string()] = hex;
        }
        man["files"] = files;
        // trajectory + direction hashes assert protocol fairness across methods
        nlohmann::json proto = nlohmann::json::object();
        for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
            std::string blob;
            for (const auto& x : trajectories[s].measurements)
                for (Eigen::Index i = 0; i < x.size(); ++i) {
                    char b[32];
                    std::snprintf(b, sizeof(b), "%.17g,", x[i]);
                    blob += b;
                }
            std::snprintf(hex, sizeof(hex), "%016llx",
                          static_cast<unsigned long long>(fnv1a64(blob)));
            proto["seed_" + std::to_string(cfg.seeds[s])] = hex;
        }
        {
            std::string blob;
            for (const auto& d : directions)
                for (Eigen::Index i = 0; i < d.size(); ++i) {
                    char b[32];
                    std::snprintf(b, sizeof(b), "%.17g,", d[i]);
                    blob += b;
                }
            std::snprintf(hex, sizeof(hex), "%016llx",
                          static_cast<unsigned long long>(fnv1a64(blob)));
            proto["directions"] = hex;
        }
        man["protocol"] = proto;
        emit(base + "_manifest.json", man.dump(2) + "\n");
    }
    return out;
}

}  // namespace gse
