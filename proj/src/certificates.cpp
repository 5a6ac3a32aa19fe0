#include "medoidlp/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace medoidlp {

namespace {

constexpr double kStrictTol = 1e-9;

struct ClusterView {
    int n = 0;
    int k = 0;
    std::vector<int> nonmedoids;
    std::vector<double> p; // w_{i, M(i)}
    std::vector<double> q; // w_{i, M(i,2)}, +inf when k == 1
};

ClusterView make_view(const DissimilarityMatrix& w, const Clustering& c) {
    c.validate(w);
    ClusterView v;
    v.n = c.n();
    v.k = c.k();
    v.p.resize(v.n);
    v.q.resize(v.n);
    for (int i = 0; i < v.n; ++i) {
        v.p[i] = w.at(i, c.assign[i]);
        v.q[i] = (v.k >= 2) ? w.at(i, c.second_medoid[i]) : kInf;
        if (!c.is_medoid(i)) v.nonmedoids.push_back(i);
    }
    return v;
}

} // namespace

std::string certificate_name(CertificateKind k) {
    switch (k) {
        case CertificateKind::prop1: return "prop1";
        case CertificateKind::cor2: return "cor2";
        case CertificateKind::cor3: return "cor3";
        case CertificateKind::cor4: return "cor4";
    }
    return "";
}

CertificateReport check_dual_certificate(const DissimilarityMatrix& w, const Clustering& c) {
    ClusterView v = make_view(w, c);
    int n = v.n;

    // Variables: u, gamma, lambda_0..lambda_{n-1}, then t_{ij} for each
    // non-medoid column j and every i. gamma is the common slack of the
    // strict inequalities; the system is strictly feasible iff gamma* > 0.
    LinearProgram lp;
    lp.sense = Sense::maximize;
    int vu = lp.add_variable(0.0, 0.0, kInf, "u");
    int vg = lp.add_variable(1.0, -kInf, kInf, "gamma");
    std::vector<int> vl(n);
    for (int i = 0; i < n; ++i)
        vl[i] = lp.add_variable(0.0, 0.0, kInf, "l" + std::to_string(i));
    int tcount = static_cast<int>(v.nonmedoids.size()) * n;
    std::vector<int> vt(tcount);
    for (int t = 0; t < tcount; ++t) vt[t] = lp.add_variable(0.0, 0.0, kInf, "t" + std::to_string(t));

    // t_ij >= lambda_i - w_ij + p_i
    for (std::size_t jj = 0; jj < v.nonmedoids.size(); ++jj) {
        int j = v.nonmedoids[jj];
        for (int i = 0; i < n; ++i) {
            int t = vt[jj * n + i];
            lp.add_constraint({{t, 1.0}, {vl[i], -1.0}}, Relation::ge, v.p[i] - w.at(i, j));
        }
    }
    // sum_i t_ij <= u - gamma
    for (std::size_t jj = 0; jj < v.nonmedoids.size(); ++jj) {
        std::vector<std::pair<int, double>> row;
        row.reserve(n + 2);
        for (int i = 0; i < n; ++i) row.emplace_back(vt[jj * n + i], 1.0);
        row.emplace_back(vu, -1.0);
        row.emplace_back(vg, 1.0);
        lp.add_constraint(std::move(row), Relation::le, 0.0);
    }
    // sum_{i in S_j} lambda_i = u, one row per medoid
    for (int m : c.medoids) {
        std::vector<std::pair<int, double>> row;
        for (int i = 0; i < n; ++i)
            if (c.assign[i] == m) row.emplace_back(vl[i], 1.0);
        row.emplace_back(vu, -1.0);
        lp.add_constraint(std::move(row), Relation::eq, 0.0);
    }
    // lambda_i + gamma <= q_i - p_i (dropped when k == 1: the bound is +inf)
    if (v.k >= 2)
        for (int i = 0; i < n; ++i)
            lp.add_constraint({{vl[i], 1.0}, {vg, 1.0}}, Relation::le, v.q[i] - v.p[i]);

    LPSolution sol = solve_lp(lp);
    if (sol.status != SolveStatus::optimal)
        throw NumericalFailure("dual certificate program must be solvable");

    CertificateReport rep;
    rep.kind = CertificateKind::prop1;
    rep.margin = sol.objective_value;
    rep.holds = rep.margin > kStrictTol;

    double u = sol.x[vu];
    std::vector<double> lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = sol.x[vl[i]];

    // Binding inequality at the optimum, for diagnostics.
    double worst_slack = kInf;
    for (int j : v.nonmedoids) {
        double s = u;
        for (int i = 0; i < n; ++i) s -= std::max(0.0, lambda[i] - w.at(i, j) + v.p[i]);
        if (s < worst_slack) {
            worst_slack = s;
            rep.worst = {-1, j, -1};
        }
    }
    if (v.k >= 2)
        for (int i = 0; i < n; ++i) {
            double s = v.q[i] - v.p[i] - lambda[i];
            if (s < worst_slack) {
                worst_slack = s;
                rep.worst = {i, -1, -1};
            }
        }
    if (rep.holds) rep.witness = CertificateWitness{u, std::move(lambda)};
    return rep;
}

namespace {

/// f(u) = max_{j not in M} sum_i (u/N_i + p_i - w_ij)_+ for the democratic
/// multipliers; evaluated directly (the oracle form).
double democratic_f(const DissimilarityMatrix& w, const Clustering& c, const ClusterView& v,
                    double u, int* argmax_j = nullptr) {
    double best = -kInf;
    for (int j : v.nonmedoids) {
        double s = 0.0;
        for (int i = 0; i < v.n; ++i)
            s += std::max(0.0, u / c.cluster_size[i] + v.p[i] - w.at(i, j));
        if (s > best) {
            best = s;
            if (argmax_j) *argmax_j = j;
        }
    }
    return best;
}

} // namespace

CertificateReport check_democratic_certificate(const DissimilarityMatrix& w, const Clustering& c) {
    ClusterView v = make_view(w, c);
    int n = v.n;

    CertificateReport rep;
    rep.kind = CertificateKind::cor2;

    double u_max = kInf;
    int u_max_l = -1;
    if (v.k >= 2)
        for (int i = 0; i < n; ++i) {
            double cap = c.cluster_size[i] * (v.q[i] - v.p[i]);
            if (cap < u_max) {
                u_max = cap;
                u_max_l = i;
            }
        }

    if (v.nonmedoids.empty()) {
        // k = N: there is no column to dominate, any u in (0, U_max) works.
        rep.margin = u_max;
        rep.holds = rep.margin > kStrictTol;
        rep.worst = {u_max_l, -1, -1};
        if (rep.holds) {
            std::vector<double> lambda(n, 0.0);
            rep.witness = CertificateWitness{0.0, std::move(lambda)};
        }
        return rep;
    }

    // Slack of the certificate at a given u: the dominance gap u - f(u) and
    // the per-point caps lambda_i = u/N_i < q_i - p_i, exactly the strict
    // inequalities a prop1 witness with democratic multipliers must clear.
    auto margin_at = [&](double u, int* aj) {
        double m = u - democratic_f(w, c, v, u, aj);
        if (v.k >= 2)
            for (int i = 0; i < n; ++i)
                m = std::min(m, v.q[i] - v.p[i] - u / c.cluster_size[i]);
        return m;
    };

    // Kink positions of every g_j(u) = sum_i (u/N_i + p_i - w_ij)_+ - u.
    std::vector<double> kinks;
    for (int j : v.nonmedoids)
        for (int i = 0; i < n; ++i) {
            double b = c.cluster_size[i] * (w.at(i, j) - v.p[i]);
            if (b > 0.0 && b <= u_max) kinks.push_back(b);
        }
    double top_kink = 0.0;
    for (double b : kinks) top_kink = std::max(top_kink, b);
    double domain_hi = (u_max < kInf) ? u_max : top_kink + 1.0;

    std::vector<double> evals = kinks;
    evals.push_back(0.0);
    evals.push_back(domain_hi);
    std::sort(evals.begin(), evals.end());
    evals.erase(std::unique(evals.begin(), evals.end()), evals.end());

    double best_margin = -kInf;
    double best_u = 0.0;
    int best_j = -1;
    for (double u : evals) {
        int aj = -1;
        double m = margin_at(u, &aj);
        if (m > best_margin) {
            best_margin = m;
            best_u = u;
            best_j = aj;
        }
    }

    // The scan can miss a sliver where the max of the per-column functions
    // dips negative strictly between kinks; intersect the per-column
    // sublevel intervals {u : g_j(u) <= -tol} for an exact decision. The
    // domain is clipped where the lambda caps retain tol of slack.
    double strict_hi = domain_hi;
    if (v.k >= 2)
        for (int i = 0; i < n; ++i)
            strict_hi = std::min(strict_hi,
                                 c.cluster_size[i] * (v.q[i] - v.p[i] - kStrictTol));
    double lo_common = 0.0, hi_common = strict_hi;
    bool intersect_ok = strict_hi > 0.0;
    for (int j : v.nonmedoids) {
        if (!intersect_ok) break;
        // Walk g_j over its own kinks; g_j is convex piecewise linear.
        std::vector<double> ks;
        ks.push_back(0.0);
        for (int i = 0; i < n; ++i) {
            double b = c.cluster_size[i] * (w.at(i, j) - v.p[i]);
            if (b > 0.0 && b < strict_hi) ks.push_back(b);
        }
        ks.push_back(strict_hi);
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

        auto gj = [&](double u) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                s += std::max(0.0, u / c.cluster_size[i] + v.p[i] - w.at(i, j));
            return s - u;
        };
        double lj = kInf, rj = -kInf;
        double prev_u = ks[0], prev_g = gj(ks[0]);
        if (prev_g <= -kStrictTol) lj = std::min(lj, prev_u), rj = std::max(rj, prev_u);
        for (std::size_t t = 1; t < ks.size(); ++t) {
            double cu = ks[t], cg = gj(cu);
            // crossing points of the affine piece with -tol
            if ((prev_g <= -kStrictTol) != (cg <= -kStrictTol)) {
                double frac = (-kStrictTol - prev_g) / (cg - prev_g);
                double ux = prev_u + frac * (cu - prev_u);
                lj = std::min(lj, ux);
                rj = std::max(rj, ux);
            }
            if (cg <= -kStrictTol) {
                lj = std::min(lj, cu);
                rj = std::max(rj, cu);
            }
            prev_u = cu;
            prev_g = cg;
        }
        if (lj > rj) {
            intersect_ok = false;
            break;
        }
        lo_common = std::max(lo_common, lj);
        hi_common = std::min(hi_common, rj);
        if (lo_common > hi_common) {
            intersect_ok = false;
            break;
        }
    }

    if (intersect_ok) {
        double u_mid = 0.5 * (lo_common + hi_common);
        int aj = -1;
        double m = margin_at(u_mid, &aj);
        if (m > best_margin) {
            best_margin = m;
            best_u = u_mid;
            best_j = aj;
        }
    }

    rep.margin = best_margin;
    rep.holds = intersect_ok && best_margin > kStrictTol;
    rep.worst = {u_max_l, best_j, -1};
    if (rep.holds) {
        std::vector<double> lambda(n);
        for (int i = 0; i < n; ++i) lambda[i] = best_u / c.cluster_size[i];
        rep.witness = CertificateWitness{best_u, std::move(lambda)};
    }
    return rep;
}

CertificateReport check_threshold_certificate(const DissimilarityMatrix& w, const Clustering& c) {
    ClusterView v = make_view(w, c);
    int n = v.n;

    CertificateReport rep;
    rep.kind = CertificateKind::cor3;

    double max_intra = -kInf;
    int ia = -1, ja = -1;
    double min_inter = kInf;
    int ib = -1, lb = -1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double val = c.cluster_size[i] * (w.at(i, j) - v.p[i]);
            if (c.assign[j] == c.assign[i]) {
                if (val > max_intra) {
                    max_intra = val;
                    ia = i;
                    ja = j;
                }
            } else {
                if (val < min_inter) {
                    min_inter = val;
                    ib = i;
                    lb = j;
                }
            }
        }

    if (min_inter == kInf) {
        // k = 1: no inter-cluster pair, the condition is vacuous.
        rep.margin = kInf;
        rep.holds = true;
        rep.worst = {ia, ja, -1};
        return rep;
    }
    rep.margin = min_inter - max_intra;
    rep.holds = rep.margin > kStrictTol;
    rep.worst = {ib, ja, lb};
    return rep;
}

CertificateReport check_max_u_certificate(const DissimilarityMatrix& w, const Clustering& c) {
    ClusterView v = make_view(w, c);
    if (v.k < 2) throw std::invalid_argument("max-u certificate requires k >= 2");
    int n = v.n;

    CertificateReport rep;
    rep.kind = CertificateKind::cor4;

    double u = -kInf;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (c.assign[j] == c.assign[i])
                u = std::max(u, c.cluster_size[i] * (w.at(i, j) - v.p[i]));

    double margin = kInf;
    for (int i = 0; i < n; ++i) {
        double s = c.cluster_size[i] * (v.q[i] - v.p[i]) - u;
        if (s < margin) {
            margin = s;
            rep.worst = {i, -1, -1};
        }
    }
    for (int j : v.nonmedoids) {
        double lhs = 0.0, rhs = 0.0;
        for (int i = 0; i < n; ++i) {
            if (c.assign[i] == c.assign[j])
                rhs += w.at(i, j) - v.p[i];
            else
                lhs += std::max(0.0, u / c.cluster_size[i] + v.p[i] - w.at(i, j));
        }
        double s = rhs - lhs;
        if (s < margin) {
            margin = s;
            rep.worst = {-1, j, -1};
        }
    }

    rep.margin = margin;
    rep.holds = margin > kStrictTol;
    if (rep.holds) {
        std::vector<double> lambda(n);
        for (int i = 0; i < n; ++i) lambda[i] = u / c.cluster_size[i];
        rep.witness = CertificateWitness{u, std::move(lambda)};
    }
    return rep;
}

double threshold_separation_bound(int n_max, int n_min, double p) {
    if (n_max < n_min || n_min < 1) throw std::invalid_argument("bad cluster sizes");
    if (!(p > 0.0)) throw std::invalid_argument("power must be positive");
    return 2.0 * (1.0 + std::pow(1.0 + static_cast<double>(n_max) / n_min, 1.0 / p));
}

std::string certificate_to_json(const CertificateReport& rep) {
    nlohmann::ordered_json j;
    j["kind"] = certificate_name(rep.kind);
    j["holds"] = rep.holds;
    j["margin"] = rep.margin;
    if (rep.witness) {
        j["witness"]["u"] = rep.witness->u;
        j["witness"]["lambda"] = rep.witness->lambda;
    } else {
        j["witness"] = nullptr;
    }
    j["worst"] = {{"i", rep.worst.i}, {"j", rep.worst.j}, {"l", rep.worst.l}};
    return j.dump(2);
}

} // namespace medoidlp
