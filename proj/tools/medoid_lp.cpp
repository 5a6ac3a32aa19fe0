#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "medoidlp/certificates.hpp"
#include "medoidlp/experiment.hpp"
#include "medoidlp/kmedoids.hpp"
#include "medoidlp/lp_text.hpp"
#include "medoidlp/model.hpp"
#include "medoidlp/theory.hpp"

namespace {

using namespace medoidlp;

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct Instance {
    DissimilarityMatrix w;
    std::vector<int> ball_of; // empty when loaded from a matrix
};

Instance load_instance(const std::string& points_path, const std::string& matrix_path,
                       const Metric& metric) {
    if (points_path.empty() == matrix_path.empty())
        throw std::invalid_argument("provide exactly one of --points / --matrix");
    Instance inst;
    if (!points_path.empty()) {
        std::ifstream f(points_path);
        if (!f) throw std::invalid_argument("cannot open " + points_path);
        PointSet ps = read_points_csv(f);
        inst.w = dissimilarities(ps, metric);
        inst.ball_of = ps.ball_of;
    } else {
        std::ifstream f(matrix_path);
        if (!f) throw std::invalid_argument("cannot open " + matrix_path);
        inst.w = read_matrix_csv(f);
        inst.w.metric = metric;
    }
    return inst;
}

void write_output(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        if (!body.empty() && body.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write " + path);
    f << body;
}

int run(int argc, char** argv) {
    CLI::App app{"k-medoids LP relaxation toolkit: solver, recovery certificates, "
                 "guarantee checks, and separated-balls experiments"};
    app.require_subcommand(1);

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "solve the relaxation and report the outcome");
    std::string s_points, s_matrix, s_metric = "sq", s_zout, s_ext;
    int s_k = 2;
    bool s_full = false, s_with_z = false;
    solve->add_option("--points", s_points, "points CSV (x0,..,ball header)");
    solve->add_option("--matrix", s_matrix, "dissimilarity CSV (N x N)");
    solve->add_option("--k", s_k, "number of medoids")->required();
    solve->add_option("--metric", s_metric, "sq | euclid | pow<p> (default sq)");
    solve->add_option("--z-out", s_zout, "write the optimal z matrix as CSV");
    solve->add_option("--external-solution", s_ext,
                      "cross-validate an externally computed z vector (CSV)");
    solve->add_flag("--full-lp", s_full, "solve the full program (no lazy rows)");
    solve->add_flag("--with-z", s_with_z, "embed z in the JSON output");

    // ---- exact ----
    auto* exact = app.add_subcommand("exact", "exact optimum by enumeration");
    std::string e_points, e_matrix, e_metric = "sq";
    int e_k = 2;
    exact->add_option("--points", e_points, "points CSV");
    exact->add_option("--matrix", e_matrix, "dissimilarity CSV");
    exact->add_option("--k", e_k, "number of medoids")->required();
    exact->add_option("--metric", e_metric, "sq | euclid | pow<p>");

    // ---- certify ----
    auto* certify = app.add_subcommand("certify", "run all recovery certificates on a clustering");
    std::string c_points, c_matrix, c_metric = "sq", c_medoids, c_assign;
    certify->add_option("--points", c_points, "points CSV");
    certify->add_option("--matrix", c_matrix, "dissimilarity CSV");
    certify->add_option("--metric", c_metric, "sq | euclid | pow<p>");
    certify->add_option("--medoids", c_medoids, "comma-separated medoid indices");
    certify->add_option("--assign", c_assign,
                        "CSV of per-point medoid indices (overrides --medoids)");

    // ---- sample ----
    auto* sample = app.add_subcommand("sample", "draw a separated-balls instance");
    int m_k = 2, m_d = 2, m_n = 10, m_case = 1;
    double m_R = 4.0;
    std::uint64_t m_seed = 1;
    std::string m_layout = "simplex", m_out;
    sample->add_option("--k", m_k, "number of balls");
    sample->add_option("--d", m_d, "dimension (>= 2)");
    sample->add_option("--n", m_n, "points per ball");
    sample->add_option("--R", m_R, "center separation");
    sample->add_option("--case", m_case, "radial law: 1 = uniform ball, 2 = quadratic CDF");
    sample->add_option("--seed", m_seed, "RNG seed");
    sample->add_option("--layout", m_layout, "simplex | line");
    sample->add_option("--out", m_out, "output CSV (default stdout)");

    // ---- experiment ----
    auto* exp = app.add_subcommand("experiment", "Monte Carlo recovery grid");
    std::string x_config, x_out = "experiment-out", x_formats = "csv,json,svg", x_metric = "sq",
                x_layout = "simplex";
    std::vector<int> x_ns, x_ks, x_ds;
    std::vector<double> x_Rs;
    std::vector<int> x_cases;
    int x_trials = -1, x_threads = 0;
    std::uint64_t x_seed = 1;
    bool x_paper_scaled = false, x_paper_full = false, x_certify = false, x_timings = false,
         x_quiet = false;
    exp->add_option("--config", x_config, "key=value config file");
    exp->add_flag("--grid-default-paper", x_paper_scaled,
                  "use the scaled default grid (n 5/10/20, k 2/3, R 2..5, d 2/4)");
    exp->add_flag("--grid-full-paper", x_paper_full,
                  "use the full grid (1000 trials per cell; hours of compute)");
    exp->add_option("--n", x_ns, "points per ball (repeatable)");
    exp->add_option("--k", x_ks, "ball counts (repeatable)");
    exp->add_option("--d", x_ds, "dimensions (repeatable)");
    exp->add_option("--R", x_Rs, "separations (repeatable)");
    exp->add_option("--case", x_cases, "radial laws, 1 and/or 2 (repeatable)");
    exp->add_option("--trials", x_trials, "trials per cell");
    exp->add_option("--seed", x_seed, "base seed");
    exp->add_option("--metric", x_metric, "sq | euclid | pow<p>");
    exp->add_option("--layout", x_layout, "simplex | line");
    exp->add_flag("--certify", x_certify, "run cor3/cor4/prop1 on the true ball clustering");
    exp->add_option("--threads", x_threads, "worker threads (0 = auto)");
    exp->add_option("--out", x_out, "output directory");
    exp->add_option("--formats", x_formats, "comma list of csv,json,svg");
    exp->add_flag("--timings", x_timings, "include wall times in cells.json (non-deterministic)");
    exp->add_flag("--quiet", x_quiet, "suppress progress output");

    // ---- theorem-check ----
    auto* thm = app.add_subcommand("theorem-check", "evaluate the guarantee inequalities");
    double t_R = -1.0, t_eps = -1.0;
    long long t_n = 1000000;
    int t_k = 2, t_d = 2;
    std::vector<double> t_Rs;
    std::vector<long long> t_ns;
    std::vector<int> t_ks;
    bool t_table = false;
    thm->add_option("--R", t_R, "separation distance");
    thm->add_option("--eps", t_eps, "epsilon with R = 3.75 + eps");
    thm->add_option("--n", t_n, "points per ball");
    thm->add_option("--k", t_k, "ball count");
    thm->add_option("--d", t_d, "dimension");
    thm->add_flag("--table", t_table, "table mode over grids of --Rs/--ns/--ks");
    thm->add_option("--Rs", t_Rs, "table mode separations (repeatable)");
    thm->add_option("--ns", t_ns, "table mode ball sizes (repeatable)");
    thm->add_option("--ks", t_ks, "table mode ball counts (repeatable)");

    // ---- lemma-check ----
    auto* lem = app.add_subcommand("lemma-check", "empirical medoid-concentration check");
    long long l_n = 10000;
    int l_d = 2, l_reps = 50;
    std::uint64_t l_seed = 1;
    bool l_stmt2_only = false;
    lem->add_option("--n", l_n, "points per draw");
    lem->add_option("--d", l_d, "dimension");
    lem->add_option("--reps", l_reps, "repetitions");
    lem->add_option("--seed", l_seed, "RNG seed");
    lem->add_flag("--stmt2-only", l_stmt2_only, "check only the minimum-norm statement");

    // ---- export-lp ----
    auto* expo = app.add_subcommand("export-lp", "write the relaxation in LP text format");
    std::string p_points, p_matrix, p_metric = "sq", p_out, p_check;
    int p_k = 2;
    expo->add_option("--points", p_points, "points CSV");
    expo->add_option("--matrix", p_matrix, "dissimilarity CSV");
    expo->add_option("--k", p_k, "number of medoids")->required();
    expo->add_option("--metric", p_metric, "sq | euclid | pow<p>");
    expo->add_option("--out", p_out, "output LP file (default stdout)");
    expo->add_option("--check-solution", p_check,
                     "validate an external solution CSV against the program");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e); // prints usage to the appropriate stream
        return code == 0 ? 0 : 1;
    }

    if (solve->parsed()) {
        Instance inst = load_instance(s_points, s_matrix, Metric::from_tag(s_metric));
        SolveLinkmedOptions opts;
        opts.full_program = s_full;
        RelaxationResult rr = solve_linkmed(inst.w, s_k, opts);
        nlohmann::ordered_json j = nlohmann::ordered_json::parse(relaxation_to_json(rr, s_with_z));
        if (!inst.ball_of.empty()) {
            RecoveryOutcome rec = classify_recovery(rr, inst.ball_of);
            j["recovery"] = recovery_name(rec.label);
            if (!rec.mismatched.empty()) j["mismatched"] = rec.mismatched;
        }
        if (!s_ext.empty()) {
            std::ifstream f(s_ext);
            if (!f) throw std::invalid_argument("cannot open " + s_ext);
            auto x = read_solution_csv(f);
            SolutionCheck sc = check_external_solution(build_linkmed(inst.w, s_k), x);
            j["external"] = {{"objective", sc.objective},
                             {"residual", sc.residual},
                             {"feasible", sc.feasible},
                             {"objective_gap", sc.objective - rr.objective}};
        }
        if (!s_zout.empty()) {
            DissimilarityMatrix zm;
            zm.n = rr.n;
            zm.w = rr.z;
            std::ofstream f(s_zout, std::ios::binary);
            if (!f) throw std::invalid_argument("cannot write " + s_zout);
            for (int i = 0; i < rr.n; ++i) {
                for (int jj = 0; jj < rr.n; ++jj) {
                    if (jj) f << ',';
                    f << format_double(rr.z_at(i, jj));
                }
                f << '\n';
            }
        }
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    if (exact->parsed()) {
        Instance inst = load_instance(e_points, e_matrix, Metric::from_tag(e_metric));
        ExactResult res = brute_force_kmed(inst.w, e_k);
        nlohmann::ordered_json j;
        j["best_objective"] = res.best_objective;
        j["optimal_medoid_sets"] = res.optimal_medoid_sets;
        j["unique"] = res.unique;
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    if (certify->parsed()) {
        Instance inst = load_instance(c_points, c_matrix, Metric::from_tag(c_metric));
        Clustering cl;
        if (!c_assign.empty()) {
            std::ifstream f(c_assign);
            if (!f) throw std::invalid_argument("cannot open " + c_assign);
            auto vals = read_solution_csv(f);
            std::vector<int> assign(vals.begin(), vals.end());
            cl = Clustering::from_assignment(inst.w, assign);
        } else if (!c_medoids.empty()) {
            std::vector<int> ms;
            std::stringstream ss(c_medoids);
            std::string item;
            while (std::getline(ss, item, ',')) ms.push_back(std::stoi(item));
            cl = Clustering::from_medoids(inst.w, ms);
        } else {
            throw std::invalid_argument("certify needs --medoids or --assign");
        }
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        arr.push_back(nlohmann::ordered_json::parse(
            certificate_to_json(check_dual_certificate(inst.w, cl))));
        arr.push_back(nlohmann::ordered_json::parse(
            certificate_to_json(check_democratic_certificate(inst.w, cl))));
        arr.push_back(nlohmann::ordered_json::parse(
            certificate_to_json(check_threshold_certificate(inst.w, cl))));
        if (cl.k() >= 2)
            arr.push_back(nlohmann::ordered_json::parse(
                certificate_to_json(check_max_u_certificate(inst.w, cl))));
        std::cout << arr.dump(2) << '\n';
        return 0;
    }

    if (sample->parsed()) {
        CenterLayout layout = m_layout == "line" ? CenterLayout::line : CenterLayout::simplex;
        if (m_layout != "line" && m_layout != "simplex")
            throw std::invalid_argument("layout must be simplex or line");
        RadialLaw law = m_case == 1 ? RadialLaw::uniform_ball : RadialLaw::quadratic_cdf;
        if (m_case != 1 && m_case != 2) throw std::invalid_argument("case must be 1 or 2");
        PointSet ps = sample_separated_balls(m_k, m_d, m_R, m_n, law, layout, m_seed);
        std::ostringstream out;
        write_points_csv(out, ps);
        write_output(m_out, out.str());
        return 0;
    }

    if (exp->parsed()) {
        ExperimentConfig cfg = ExperimentConfig::default_scaled();
        if (x_paper_full) cfg = ExperimentConfig::paper_full();
        if (!x_config.empty()) cfg = parse_experiment_config(slurp(x_config), cfg);
        if (!x_ns.empty()) cfg.ns = x_ns;
        if (!x_ks.empty()) cfg.ks = x_ks;
        if (!x_ds.empty()) cfg.ds = x_ds;
        if (!x_Rs.empty()) cfg.Rs = x_Rs;
        if (!x_cases.empty()) {
            cfg.cases.clear();
            for (int c : x_cases) {
                if (c != 1 && c != 2) throw std::invalid_argument("case must be 1 or 2");
                cfg.cases.push_back(c == 1 ? RadialLaw::uniform_ball : RadialLaw::quadratic_cdf);
            }
        }
        if (x_trials > 0) cfg.trials = x_trials;
        if (exp->count("--seed")) cfg.base_seed = x_seed;
        if (exp->count("--metric")) cfg.metric = Metric::from_tag(x_metric);
        if (exp->count("--layout")) {
            if (x_layout == "line") cfg.layout = CenterLayout::line;
            else if (x_layout == "simplex") cfg.layout = CenterLayout::simplex;
            else throw std::invalid_argument("layout must be simplex or line");
        }
        if (x_certify) cfg.run_certificates = true;
        if (x_threads > 0) cfg.threads = x_threads;
        if (exp->count("--out")) cfg.out_dir = x_out;
        (void)x_paper_scaled; // the scaled grid is already the default

        ProgressFn progress;
        if (!x_quiet)
            progress = [](int done, int total) {
                std::cerr << "\rcells " << done << "/" << total << std::flush;
                if (done == total) std::cerr << '\n';
            };
        auto cells = run_experiment(cfg, progress);

        std::vector<std::string> formats;
        std::stringstream ss(x_formats);
        std::string fmt;
        while (std::getline(ss, fmt, ',')) formats.push_back(fmt);
        auto written = emit_report(cells, formats, cfg.out_dir);
        if (x_timings) {
            std::ofstream f(cfg.out_dir + "/cells_timed.json", std::ios::binary);
            f << cells_to_json(cells, true);
            written.push_back(cfg.out_dir + "/cells_timed.json");
        }
        for (const auto& p : written) std::cerr << "wrote " << p << '\n';
        return 0;
    }

    if (thm->parsed()) {
        if (t_table) {
            if (t_Rs.empty()) t_Rs = {3.75, 3.8, 3.9, 4.0};
            if (t_ns.empty()) t_ns = {10000, 1000000, 10000000};
            if (t_ks.empty()) t_ks = {2, 3, 10};
            std::cout << "R,n,k,d,dimension-cap,separation-lower,inner-radius,closing,satisfied\n";
            for (double R : t_Rs)
                for (long long n : t_ns)
                    for (int k : t_ks) {
                        TheoremReport rep = check_guarantee({R, n, k, t_d});
                        std::cout << format_double(R) << ',' << n << ',' << k << ',' << t_d;
                        for (const auto& c : rep.conditions)
                            std::cout << ',' << format_double(c.slack);
                        std::cout << ',' << (rep.satisfied ? "true" : "false") << '\n';
                    }
            return 0;
        }
        double R = t_R;
        if (t_eps >= 0.0) R = 3.75 + t_eps;
        if (R <= 0.0) throw std::invalid_argument("provide --R or --eps");
        TheoremReport rep = check_guarantee({R, t_n, t_k, t_d});
        std::cout << theorem_to_json(rep) << '\n';
        return 0;
    }

    if (lem->parsed()) {
        nlohmann::ordered_json j;
        if (l_stmt2_only) {
            auto s = validate_lemma5_stmt2(l_n, l_d, l_reps, l_seed);
            j["reps"] = s.reps;
            j["failures"] = s.failures;
            j["bound"] = s.bound;
            j["rate_bound"] = s.rate_bound;
        } else {
            auto s = validate_lemma5_empirically(l_n, l_d, l_reps, l_seed);
            j["n"] = s.n;
            j["d"] = s.d;
            j["reps"] = s.reps;
            j["alpha"] = s.alpha;
            j["alpha_clamped"] = s.alpha_clamped;
            j["stmt1_checks"] = s.stmt1_checks;
            j["stmt1_failures"] = s.stmt1_failures;
            j["stmt2_failures"] = s.stmt2_failures;
            j["stmt3_failures"] = s.stmt3_failures;
            j["floor_per_rep"] = s.floor_per_rep;
        }
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    if (expo->parsed()) {
        Instance inst = load_instance(p_points, p_matrix, Metric::from_tag(p_metric));
        LinearProgram lp = build_linkmed(inst.w, p_k);
        if (!p_check.empty()) {
            std::ifstream f(p_check);
            if (!f) throw std::invalid_argument("cannot open " + p_check);
            auto x = read_solution_csv(f);
            SolutionCheck sc = check_external_solution(lp, x);
            nlohmann::ordered_json j;
            j["objective"] = sc.objective;
            j["residual"] = sc.residual;
            j["feasible"] = sc.feasible;
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        write_output(p_out, export_lp_text(lp));
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const medoidlp::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
