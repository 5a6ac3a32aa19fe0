#include "medoidlp/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "medoidlp/certificates.hpp"
#include "medoidlp/kmedoids.hpp"
#include "medoidlp/rng.hpp"
#include "medoidlp/svg.hpp"

namespace medoidlp {

ExperimentConfig ExperimentConfig::paper_full() {
    ExperimentConfig cfg;
    cfg.ns = {5, 10, 15, 20, 25, 30};
    cfg.ks = {2, 3};
    cfg.Rs.clear();
    for (int t = 0; t <= 15; ++t) cfg.Rs.push_back(2.0 + 0.2 * t);
    cfg.ds = {2, 3, 4, 10};
    cfg.cases = {RadialLaw::uniform_ball, RadialLaw::quadratic_cdf};
    cfg.trials = 1000;
    return cfg;
}

int ExperimentConfig::cell_count() const {
    return static_cast<int>(cases.size() * ds.size() * ks.size() * ns.size() * Rs.size());
}

void ExperimentConfig::validate() const {
    if (ns.empty() || ks.empty() || Rs.empty() || ds.empty() || cases.empty())
        throw std::invalid_argument("experiment grid must be non-empty");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    for (int n : ns)
        if (n < 1) throw std::invalid_argument("n must be positive");
    for (int k : ks)
        if (k < 1) throw std::invalid_argument("k must be positive");
    for (int d : ds)
        if (d < 2) throw std::invalid_argument("d must be at least 2");
    for (double R : Rs)
        if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
    for (int n : ns)
        for (int k : ks)
            if (n * k > 90)
                throw std::invalid_argument("cell too large: N = n*k must stay <= 90");
}

int resolve_thread_count(int requested) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    int threads = requested > 0 ? requested : hw;
    if (const char* env = std::getenv("MEDOID_LP_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) threads = std::min(threads, cap);
    }
    return std::max(1, threads);
}

namespace {

struct Cell {
    int case_id, d, k, n;
    double R;
    int index;
};

struct TrialOutcome {
    Recovery label = Recovery::fractional;
    bool failed = false;
    bool cor3 = false, cor4 = false, prop1 = false;
};

TrialOutcome run_trial(const ExperimentConfig& cfg, const Cell& cell, int trial) {
    TrialOutcome out;
    std::uint64_t cell_seed = mix_seed(cfg.base_seed, static_cast<std::uint64_t>(cell.index));
    std::uint64_t trial_seed = mix_seed(cell_seed, static_cast<std::uint64_t>(trial));
    try {
        RadialLaw law = cell.case_id == 1 ? RadialLaw::uniform_ball : RadialLaw::quadratic_cdf;
        PointSet ps = sample_separated_balls(cell.k, cell.d, cell.R, cell.n, law, cfg.layout,
                                             trial_seed);
        DissimilarityMatrix w = dissimilarities(ps, cfg.metric);
        RelaxationResult rr = solve_linkmed(w, cell.k);
        out.label = classify_recovery(rr, ps.ball_of).label;
        if (cfg.run_certificates) {
            Clustering truth = ground_truth_clustering(w, ps.ball_of);
            out.cor3 = check_threshold_certificate(w, truth).holds;
            if (cell.k >= 2) out.cor4 = check_max_u_certificate(w, truth).holds;
            out.prop1 = check_dual_certificate(w, truth).holds;
        }
    } catch (const NumericalFailure&) {
        out.failed = true;
    } catch (const std::exception&) {
        // a worker thread must not leak exceptions; count the trial as failed
        out.failed = true;
    }
    return out;
}

} // namespace

std::vector<CellResult> run_experiment(const ExperimentConfig& cfg, ProgressFn progress) {
    cfg.validate();

    std::vector<Cell> cells;
    int idx = 0;
    for (const RadialLaw law : cfg.cases)
        for (int d : cfg.ds)
            for (int k : cfg.ks)
                for (int n : cfg.ns)
                    for (double R : cfg.Rs) {
                        Cell c;
                        c.case_id = law == RadialLaw::uniform_ball ? 1 : 2;
                        c.d = d;
                        c.k = k;
                        c.n = n;
                        c.R = R;
                        c.index = idx++;
                        cells.push_back(c);
                    }

    int total_jobs = static_cast<int>(cells.size()) * cfg.trials;
    std::vector<TrialOutcome> outcomes(total_jobs);
    std::vector<double> job_wall(total_jobs, 0.0);

    std::atomic<int> next_job{0};
    std::atomic<int> done_cells{0};
    int threads = resolve_thread_count(cfg.threads);
    auto worker = [&]() {
        for (;;) {
            int job = next_job.fetch_add(1);
            if (job >= total_jobs) return;
            int cell_idx = job / cfg.trials;
            int trial = job % cfg.trials;
            auto t0 = std::chrono::steady_clock::now();
            outcomes[job] = run_trial(cfg, cells[cell_idx], trial);
            auto t1 = std::chrono::steady_clock::now();
            job_wall[job] = std::chrono::duration<double>(t1 - t0).count();
            if (trial == cfg.trials - 1 && progress)
                progress(done_cells.fetch_add(1) + 1, static_cast<int>(cells.size()));
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Reduce in deterministic cell order.
    std::vector<CellResult> results;
    results.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        CellResult r;
        r.case_id = cells[c].case_id;
        r.d = cells[c].d;
        r.k = cells[c].k;
        r.n = cells[c].n;
        r.R = cells[c].R;
        r.trials = cfg.trials;
        r.certificates_run = cfg.run_certificates;
        for (int t = 0; t < cfg.trials; ++t) {
            r.wall_seconds += job_wall[c * cfg.trials + t];
            const TrialOutcome& o = outcomes[c * cfg.trials + t];
            if (o.failed) {
                r.solver_failures++;
                continue;
            }
            switch (o.label) {
                case Recovery::fractional: r.fractional++; break;
                case Recovery::cluster_recovery: r.cluster_only++; break;
                case Recovery::ball_recovery: r.ball++; break;
            }
            if (o.cor3) r.cor3_holds++;
            if (o.cor4) r.cor4_holds++;
            if (o.prop1) r.prop1_holds++;
        }
        results.push_back(r);
    }
    return results;
}

std::string cells_to_csv(const std::vector<CellResult>& cells) {
    std::string out =
        "case,d,k,n,R,trials,fractional,cluster_only,ball_recovery,solver_failures,cor3,cor4,prop1\n";
    for (const auto& c : cells) {
        out += std::to_string(c.case_id) + ',' + std::to_string(c.d) + ',' + std::to_string(c.k) +
               ',' + std::to_string(c.n) + ',' + format_double(c.R) + ',' +
               std::to_string(c.trials) + ',' + std::to_string(c.fractional) + ',' +
               std::to_string(c.cluster_only) + ',' + std::to_string(c.ball) + ',' +
               std::to_string(c.solver_failures) + ',';
        if (c.certificates_run)
            out += std::to_string(c.cor3_holds) + ',' + std::to_string(c.cor4_holds) + ',' +
                   std::to_string(c.prop1_holds);
        else
            out += ",,";
        out += '\n';
    }
    return out;
}

std::string cells_to_json(const std::vector<CellResult>& cells, bool include_timings) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : cells) {
        nlohmann::ordered_json j;
        j["case"] = c.case_id;
        j["d"] = c.d;
        j["k"] = c.k;
        j["n"] = c.n;
        j["R"] = c.R;
        j["trials"] = c.trials;
        j["fractional"] = c.fractional;
        j["cluster_only"] = c.cluster_only;
        j["ball_recovery"] = c.ball;
        j["solver_failures"] = c.solver_failures;
        if (c.certificates_run) {
            j["cor3"] = c.cor3_holds;
            j["cor4"] = c.cor4_holds;
            j["prop1"] = c.prop1_holds;
        }
        if (include_timings) j["wall_seconds"] = c.wall_seconds;
        arr.push_back(j);
    }
    return arr.dump(2);
}

std::vector<std::string> emit_report(const std::vector<CellResult>& cells,
                                     const std::vector<std::string>& formats,
                                     const std::string& out_dir) {
    if (cells.empty()) throw std::invalid_argument("refusing to report an empty result grid");
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;

    auto write_file = [&](const std::string& name, const std::string& body) {
        std::string path = out_dir + "/" + name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << body;
        written.push_back(path);
    };

    for (const std::string& fmt : formats) {
        if (fmt == "csv") {
            write_file("cells.csv", cells_to_csv(cells));
        } else if (fmt == "json") {
            write_file("cells.json", cells_to_json(cells));
        } else if (fmt == "svg") {
            // One panel per (case, d, k): failed ball recoveries vs R, one
            // polyline per n.
            std::vector<std::tuple<int, int, int>> combos;
            for (const auto& c : cells) {
                auto key = std::make_tuple(c.case_id, c.d, c.k);
                bool seen = false;
                for (auto& e : combos) seen = seen || e == key;
                if (!seen) combos.push_back(key);
            }
            for (auto [case_id, d, k] : combos) {
                LineChart chart;
                chart.title = "failed ball recoveries, case " + std::to_string(case_id) + ", d=" +
                              std::to_string(d) + ", k=" + std::to_string(k);
                chart.x_label = "separation R";
                chart.y_label = "failed ball recoveries";
                std::vector<int> ns;
                for (const auto& c : cells)
                    if (c.case_id == case_id && c.d == d && c.k == k) {
                        bool seen = false;
                        for (int v : ns) seen = seen || v == c.n;
                        if (!seen) ns.push_back(c.n);
                    }
                for (int n : ns) {
                    ChartSeries s;
                    s.label = "n=" + std::to_string(n);
                    for (const auto& c : cells)
                        if (c.case_id == case_id && c.d == d && c.k == k && c.n == n) {
                            s.x.push_back(c.R);
                            s.y.push_back(c.trials - c.ball);
                        }
                    chart.series.push_back(std::move(s));
                }
                write_file("ball_failures_case" + std::to_string(case_id) + "_d" +
                               std::to_string(d) + "_k" + std::to_string(k) + ".svg",
                           chart.render());
            }
        } else {
            throw std::invalid_argument("unknown report format: " + fmt);
        }
    }
    return written;
}

ExperimentConfig parse_experiment_config(const std::string& text, ExperimentConfig base) {
    ExperimentConfig cfg = std::move(base);
    bool saw_n = false, saw_k = false, saw_R = false, saw_d = false, saw_case = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        if (line[a] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        auto trim = [](std::string s) {
            std::size_t x = s.find_first_not_of(" \t\r");
            std::size_t y = s.find_last_not_of(" \t\r");
            return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key or value");
        auto as_int = [&](const std::string& s) { return std::stoi(s); };
        auto as_double = [&](const std::string& s) { return std::stod(s); };
        if (key == "n") {
            if (!saw_n) cfg.ns.clear();
            saw_n = true;
            cfg.ns.push_back(as_int(val));
        } else if (key == "k") {
            if (!saw_k) cfg.ks.clear();
            saw_k = true;
            cfg.ks.push_back(as_int(val));
        } else if (key == "R") {
            if (!saw_R) cfg.Rs.clear();
            saw_R = true;
            cfg.Rs.push_back(as_double(val));
        } else if (key == "d") {
            if (!saw_d) cfg.ds.clear();
            saw_d = true;
            cfg.ds.push_back(as_int(val));
        } else if (key == "case") {
            if (!saw_case) cfg.cases.clear();
            saw_case = true;
            int c = as_int(val);
            if (c != 1 && c != 2) throw std::invalid_argument("case must be 1 or 2");
            cfg.cases.push_back(c == 1 ? RadialLaw::uniform_ball : RadialLaw::quadratic_cdf);
        } else if (key == "trials") {
            cfg.trials = as_int(val);
        } else if (key == "seed") {
            cfg.base_seed = static_cast<std::uint64_t>(std::stoull(val));
        } else if (key == "metric") {
            cfg.metric = Metric::from_tag(val);
        } else if (key == "layout") {
            if (val == "simplex") cfg.layout = CenterLayout::simplex;
            else if (val == "line") cfg.layout = CenterLayout::line;
            else throw std::invalid_argument("layout must be simplex or line");
        } else if (key == "certify") {
            cfg.run_certificates = (val == "1" || val == "true" || val == "yes");
        } else if (key == "threads") {
            cfg.threads = as_int(val);
        } else if (key == "out") {
            cfg.out_dir = val;
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }
    return cfg;
}

} // namespace medoidlp
