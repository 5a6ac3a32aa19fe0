#include "medoidlp/kmedoids.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace medoidlp {

Clustering Clustering::from_medoids(const DissimilarityMatrix& w, std::vector<int> medoids) {
    std::sort(medoids.begin(), medoids.end());
    medoids.erase(std::unique(medoids.begin(), medoids.end()), medoids.end());
    if (medoids.empty()) throw std::invalid_argument("clustering needs at least one medoid");
    if (medoids.front() < 0 || medoids.back() >= w.n)
        throw std::invalid_argument("medoid index out of range");

    Clustering c;
    c.medoids = std::move(medoids);
    int n = w.n;
    c.assign.resize(n);
    std::vector<bool> is_m(n, false);
    for (int m : c.medoids) is_m[m] = true;
    for (int i = 0; i < n; ++i) {
        if (is_m[i]) {
            c.assign[i] = i;
            continue;
        }
        int best = c.medoids[0];
        for (int m : c.medoids)
            if (w.at(i, m) < w.at(i, best)) best = m; // ties keep the lowest index
        c.assign[i] = best;
    }
    return Clustering::from_assignment(w, std::move(c.assign));
}

Clustering Clustering::from_assignment(const DissimilarityMatrix& w, std::vector<int> assign) {
    int n = static_cast<int>(assign.size());
    if (n != w.n) throw std::invalid_argument("assignment length does not match matrix");
    Clustering c;
    c.assign = std::move(assign);
    std::set<int> ms;
    for (int i = 0; i < n; ++i) {
        if (c.assign[i] < 0 || c.assign[i] >= n)
            throw std::invalid_argument("assignment target out of range");
        ms.insert(c.assign[i]);
    }
    c.medoids.assign(ms.begin(), ms.end());
    for (int m : c.medoids)
        if (c.assign[m] != m)
            throw std::invalid_argument("a medoid must be assigned to itself");

    std::vector<int> count(n, 0);
    for (int i = 0; i < n; ++i) count[c.assign[i]]++;
    c.cluster_size.resize(n);
    for (int i = 0; i < n; ++i) c.cluster_size[i] = count[c.assign[i]];

    c.second_medoid.assign(n, -1);
    if (c.k() >= 2) {
        for (int i = 0; i < n; ++i) {
            int best = -1;
            for (int m : c.medoids) {
                if (m == c.assign[i]) continue;
                if (best < 0 || w.at(i, m) < w.at(i, best)) best = m;
            }
            c.second_medoid[i] = best;
        }
    }
    return c;
}

double Clustering::objective(const DissimilarityMatrix& w) const {
    double s = 0.0;
    for (int i = 0; i < n(); ++i) s += w.at(i, assign[i]);
    return s;
}

std::vector<std::vector<int>> Clustering::clusters() const {
    std::vector<std::vector<int>> out(medoids.size());
    for (int i = 0; i < n(); ++i) {
        int pos = static_cast<int>(std::lower_bound(medoids.begin(), medoids.end(), assign[i]) -
                                   medoids.begin());
        out[pos].push_back(i);
    }
    return out;
}

std::vector<int> Clustering::labels() const {
    std::vector<int> out(n());
    for (int i = 0; i < n(); ++i)
        out[i] = static_cast<int>(std::lower_bound(medoids.begin(), medoids.end(), assign[i]) -
                                  medoids.begin());
    return out;
}

void Clustering::validate(const DissimilarityMatrix& w) const {
    if (n() != w.n) throw std::invalid_argument("clustering size mismatch");
    if (k() < 1) throw std::invalid_argument("clustering needs at least one medoid");
    for (int m : medoids)
        if (assign[m] != m) throw std::invalid_argument("medoid not self-assigned");
    for (int i = 0; i < n(); ++i)
        if (!std::binary_search(medoids.begin(), medoids.end(), assign[i]))
            throw std::invalid_argument("assignment targets a non-medoid");
}

std::string recovery_name(Recovery r) {
    switch (r) {
        case Recovery::fractional: return "fractional";
        case Recovery::cluster_recovery: return "cluster-recovery";
        case Recovery::ball_recovery: return "ball-recovery";
    }
    return "";
}

LinearProgram build_linkmed(const DissimilarityMatrix& w, int k) {
    w.validate();
    int n = w.n;
    if (k < 1 || k > n) throw std::invalid_argument("k must lie in [1, N]");

    LinearProgram lp;
    lp.sense = Sense::minimize;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            lp.add_variable(w.at(i, j), 0.0, kInf,
                            "z" + std::to_string(i) + "_" + std::to_string(j));
    auto var = [n](int i, int j) { return i * n + j; };

    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<int, double>> row;
        row.reserve(n);
        for (int j = 0; j < n; ++j) row.emplace_back(var(i, j), 1.0);
        lp.add_constraint(std::move(row), Relation::eq, 1.0);
    }
    {
        std::vector<std::pair<int, double>> row;
        row.reserve(n);
        for (int i = 0; i < n; ++i) row.emplace_back(var(i, i), 1.0);
        lp.add_constraint(std::move(row), Relation::le, static_cast<double>(k));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            lp.add_constraint({{var(i, j), 1.0}, {var(j, j), -1.0}}, Relation::le, 0.0);
        }
    return lp;
}

namespace {

RelaxationResult assemble_result(const DissimilarityMatrix& w, int k,
                                 const std::vector<double>& z, const LPSolution& sol,
                                 double integrality_tol, int coupling_rows) {
    int n = w.n;
    RelaxationResult rr;
    rr.n = n;
    rr.z = z;
    rr.objective = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rr.objective += w.at(i, j) * rr.z_at(i, j);
    rr.vertex = sol.vertex_flag;
    rr.lp_iterations = sol.iterations;
    rr.coupling_rows_used = coupling_rows;

    rr.integral = true;
    for (double v : rr.z)
        if (std::min(std::abs(v), std::abs(v - 1.0)) > integrality_tol) {
            rr.integral = false;
            break;
        }

    if (rr.integral) {
        std::vector<int> medoids;
        for (int j = 0; j < n; ++j)
            if (rr.z_at(j, j) > 0.5) medoids.push_back(j);
        Clustering c = Clustering::from_medoids(w, medoids);
        double cobj = c.objective(w);
        if (std::abs(cobj - rr.objective) > 1e-6 * std::max(1.0, std::abs(rr.objective)))
            throw NumericalFailure("integral relaxation does not match extracted clustering");
        if (c.k() > k) throw NumericalFailure("extracted clustering exceeds medoid budget");
        rr.clustering = std::move(c);
    }
    return rr;
}

} // namespace

RelaxationResult solve_linkmed(const DissimilarityMatrix& w, int k,
                               const SolveLinkmedOptions& opts) {
    w.validate();
    int n = w.n;
    if (k < 1 || k > n) throw std::invalid_argument("k must lie in [1, N]");

    if (opts.full_program) {
        LinearProgram lp = build_linkmed(w, k);
        LPSolution sol = solve_lp(lp);
        if (sol.status != SolveStatus::optimal)
            throw NumericalFailure("LinKMed is feasible and bounded; solver disagreed");
        return assemble_result(w, k, sol.x, sol, opts.integrality_tol, n * (n - 1));
    }

    auto var = [n](int i, int j) { return i * n + j; };

    // Base program: row sums, budget, box bounds. The box (z <= 1) is implied
    // by the full program, so dropping coupling rows keeps a relaxation whose
    // optimum, once it satisfies every dropped row, is the full optimum.
    LinearProgram base;
    base.sense = Sense::minimize;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) base.add_variable(w.at(i, j), 0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<int, double>> row;
        row.reserve(n);
        for (int j = 0; j < n; ++j) row.emplace_back(var(i, j), 1.0);
        base.add_constraint(std::move(row), Relation::eq, 1.0);
    }
    {
        std::vector<std::pair<int, double>> row;
        for (int i = 0; i < n; ++i) row.emplace_back(var(i, i), 1.0);
        base.add_constraint(std::move(row), Relation::le, static_cast<double>(k));
    }

    // Seed the working set with each point's nearest neighbors; those
    // couplings are the first to be violated anyway (the active set at the
    // optimum concentrates on nearby pairs).
    std::vector<char> in_set(static_cast<std::size_t>(n) * n, 0);
    std::vector<std::pair<int, int>> working;
    int seed_neighbors = std::min(std::max(2, n / 5), n - 1);
    for (int i = 0; i < n; ++i) {
        std::vector<int> order;
        order.reserve(n - 1);
        for (int j = 0; j < n; ++j)
            if (j != i) order.push_back(j);
        std::partial_sort(order.begin(), order.begin() + seed_neighbors, order.end(),
                          [&](int a, int b) {
                              if (w.at(i, a) != w.at(i, b)) return w.at(i, a) < w.at(i, b);
                              return a < b;
                          });
        for (int t = 0; t < seed_neighbors; ++t) {
            in_set[static_cast<std::size_t>(i) * n + order[t]] = 1;
            working.emplace_back(i, order[t]);
        }
    }

    LPSolution sol;
    long total_iters = 0;
    for (int round = 0; round < opts.max_rounds; ++round) {
        LinearProgram lp = base;
        for (auto [i, j] : working)
            lp.add_constraint({{var(i, j), 1.0}, {var(j, j), -1.0}}, Relation::le, 0.0);
        sol = solve_lp(lp);
        total_iters += sol.iterations;
        if (sol.status != SolveStatus::optimal)
            throw NumericalFailure("LinKMed is feasible and bounded; solver disagreed");

        bool clean = true;
        for (int j = 0; j < n; ++j) {
            double zjj = sol.x[var(j, j)];
            for (int i = 0; i < n; ++i) {
                if (i == j || in_set[static_cast<std::size_t>(i) * n + j]) continue;
                if (sol.x[var(i, j)] > zjj + 1e-9) {
                    in_set[static_cast<std::size_t>(i) * n + j] = 1;
                    working.emplace_back(i, j);
                    clean = false;
                }
            }
        }
        if (clean) {
            sol.iterations = total_iters;
            return assemble_result(w, k, sol.x, sol, opts.integrality_tol,
                                   static_cast<int>(working.size()));
        }
    }
    throw NumericalFailure("coupling-row activation did not converge");
}

ExactResult brute_force_kmed(const DissimilarityMatrix& w, int k) {
    w.validate();
    int n = w.n;
    if (k < 1 || k > n) throw std::invalid_argument("k must lie in [1, N]");
    double combos = 1.0;
    for (int t = 0; t < k; ++t) combos = combos * (n - t) / (t + 1);
    if (combos > 1e7) throw std::invalid_argument("brute force guard: C(N,k) exceeds 1e7");

    ExactResult res;
    res.best_objective = kInf;
    std::vector<int> subset(k);
    for (int t = 0; t < k; ++t) subset[t] = t;

    auto cost_of = [&](const std::vector<int>& ms) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = w.at(i, ms[0]);
            for (int t = 1; t < k; ++t) best = std::min(best, w.at(i, ms[t]));
            s += best;
        }
        return s;
    };

    for (;;) {
        double c = cost_of(subset);
        if (c < res.best_objective - 1e-9) {
            res.best_objective = c;
            res.optimal_medoid_sets.clear();
            res.optimal_medoid_sets.push_back(subset);
        } else if (c <= res.best_objective + 1e-9) {
            res.best_objective = std::min(res.best_objective, c);
            res.optimal_medoid_sets.push_back(subset);
        }
        // next lexicographic k-subset
        int t = k - 1;
        while (t >= 0 && subset[t] == n - k + t) --t;
        if (t < 0) break;
        ++subset[t];
        for (int s = t + 1; s < k; ++s) subset[s] = subset[s - 1] + 1;
    }

    // The running threshold may have tightened after ties were recorded.
    std::vector<std::vector<int>> kept;
    for (auto& ms : res.optimal_medoid_sets)
        if (cost_of(ms) <= res.best_objective + 1e-9) kept.push_back(ms);
    res.optimal_medoid_sets = std::move(kept);
    res.unique = res.optimal_medoid_sets.size() == 1;
    return res;
}

namespace {

/// Canonical partition: sorted list of sorted member lists.
std::vector<std::vector<int>> canonical_partition(const std::vector<int>& labels) {
    int top = 0;
    for (int v : labels) top = std::max(top, v + 1);
    std::vector<std::vector<int>> blocks(top);
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) blocks[labels[i]].push_back(i);
    blocks.erase(std::remove_if(blocks.begin(), blocks.end(),
                                [](const std::vector<int>& b) { return b.empty(); }),
                 blocks.end());
    std::sort(blocks.begin(), blocks.end());
    return blocks;
}

} // namespace

Clustering ground_truth_clustering(const DissimilarityMatrix& w, const std::vector<int>& ball_of) {
    int n = w.n;
    if (static_cast<int>(ball_of.size()) != n)
        throw std::invalid_argument("ball membership must cover all points");
    int balls = 0;
    for (int b : ball_of) {
        if (b < 0) throw std::invalid_argument("ball indices must be nonnegative");
        balls = std::max(balls, b + 1);
    }
    std::vector<int> medoid(balls, -1);
    std::vector<double> best(balls, 0.0);
    for (int b = 0; b < balls; ++b)
        for (int j = 0; j < n; ++j) {
            if (ball_of[j] != b) continue;
            double cost = 0.0;
            for (int i = 0; i < n; ++i)
                if (ball_of[i] == b) cost += w.at(i, j);
            if (medoid[b] < 0 || cost < best[b]) {
                medoid[b] = j;
                best[b] = cost;
            }
        }
    std::vector<int> assign(n);
    for (int i = 0; i < n; ++i) {
        if (medoid[ball_of[i]] < 0) throw std::invalid_argument("empty ball in ground truth");
        assign[i] = medoid[ball_of[i]];
    }
    return Clustering::from_assignment(w, std::move(assign));
}

RecoveryOutcome classify_recovery(const RelaxationResult& rr, const std::vector<int>& ball_of) {
    if (static_cast<int>(ball_of.size()) != rr.n)
        throw std::invalid_argument("ball membership must cover all points");
    RecoveryOutcome out;
    if (!rr.integral) {
        out.label = Recovery::fractional;
        return out;
    }
    const Clustering& c = *rr.clustering;
    auto got = canonical_partition(c.labels());
    auto want = canonical_partition(ball_of);
    if (got == want) {
        out.label = Recovery::ball_recovery;
        return out;
    }
    out.label = Recovery::cluster_recovery;

    // Match each cluster to the ball it overlaps most (ties to the lower
    // ball index); points whose matched ball differs from their own are the
    // mismatches reported.
    int balls = 0;
    for (int b : ball_of) balls = std::max(balls, b + 1);
    auto clusters = c.clusters();
    std::vector<int> labels = c.labels();
    std::vector<int> matched(clusters.size(), 0);
    for (std::size_t cl = 0; cl < clusters.size(); ++cl) {
        std::vector<int> overlap(balls, 0);
        for (int i : clusters[cl]) overlap[ball_of[i]]++;
        int best = 0;
        for (int b = 1; b < balls; ++b)
            if (overlap[b] > overlap[best]) best = b;
        matched[cl] = best;
    }
    for (int i = 0; i < rr.n; ++i)
        if (matched[labels[i]] != ball_of[i]) out.mismatched.push_back(i);
    return out;
}

std::string relaxation_to_json(const RelaxationResult& rr, bool include_z) {
    nlohmann::ordered_json j;
    j["objective"] = rr.objective;
    j["integral"] = rr.integral;
    j["vertex"] = rr.vertex;
    if (rr.clustering) {
        j["medoids"] = rr.clustering->medoids;
        j["assignment"] = rr.clustering->assign;
    } else {
        j["medoids"] = nullptr;
        j["assignment"] = nullptr;
    }
    j["lp_iterations"] = rr.lp_iterations;
    if (include_z) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (int i = 0; i < rr.n; ++i) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (int jj = 0; jj < rr.n; ++jj) row.push_back(rr.z_at(i, jj));
            rows.push_back(row);
        }
        j["z"] = rows;
    }
    return j.dump(2);
}

} // namespace medoidlp
