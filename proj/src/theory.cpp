#include "medoidlp/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <limits>

#include "json.hpp"
#include "medoidlp/model.hpp"
#include "medoidlp/rng.hpp"

namespace medoidlp {

namespace {
constexpr double kHuge = std::numeric_limits<double>::infinity();
}

void GuaranteeQuery::validate() const {
    if (n < 3) throw std::invalid_argument("guarantee query needs n >= 3");
    if (k < 2) throw std::invalid_argument("guarantee query needs k >= 2");
    if (d < 2) throw std::invalid_argument("guarantee query needs d >= 2");
    if (!(R > 0.0)) throw std::invalid_argument("guarantee query needs R > 0");
}

TheoremReport check_guarantee(const GuaranteeQuery& q) {
    q.validate();
    TheoremReport rep;
    double n = static_cast<double>(q.n);
    double logn = std::log(n);
    double rho = 3.0 * std::sqrt(2.0 * logn / (n - 2.0));
    rep.rho = rho;
    rep.alpha = std::sqrt(2.0 * logn);
    rep.u_bound = n * (4.0 - (1.0 - rho) * (1.0 - rho));
    rep.probability_floor = 1.0 - 4.0 * q.k / n;
    rep.proof_probability_floor = 1.0 - 2.0 * q.k / n;

    // (i) dimension cap that keeps alpha = sqrt(2 log n) admissible
    rep.conditions[0].name = "dimension-cap";
    rep.conditions[0].slack = 9.0 / 8.0 * (n - 2.0) / logn - q.d;
    rep.conditions[0].satisfied = rep.conditions[0].slack > 0.0;

    // (ii) R > 1 + rho + 2 sqrt(1 + rho)
    rep.conditions[1].name = "separation-lower";
    rep.conditions[1].slack = q.R - (1.0 + rho + 2.0 * std::sqrt(1.0 + rho));
    rep.conditions[1].satisfied = rep.conditions[1].slack > 0.0;

    // (iii) R - 1 - 2 sqrt(1 + rho) > rho / 3
    double inner = q.R - 1.0 - 2.0 * std::sqrt(1.0 + rho);
    rep.conditions[2].name = "inner-radius";
    rep.conditions[2].slack = inner - rho / 3.0;
    rep.conditions[2].satisfied = rep.conditions[2].slack > 0.0;

    // (iv) the closing inequality; non-strict as printed.
    double outer_mass = std::max(0.0, 1.0 - inner * inner);
    double lhs = (n * outer_mass + std::sqrt(n / 2.0 * logn)) * (q.k - 1) *
                 ((1.0 + rho) * (1.0 + rho) - (q.R - 2.0) * (q.R - 2.0) + 4.0 -
                  (1.0 - rho) * (1.0 - rho));
    double clamp = std::min(inner, 1.0);
    double ratio = std::sqrt((n - 2.0) / n);
    double rhs = (n - 2.0) * clamp * clamp - 2.0 * std::sqrt(2.0 * (n - 2.0) * logn) * clamp -
                 2.0 * ratio * (2.0 + ratio) * logn;
    rep.conditions[3].name = "closing";
    rep.conditions[3].slack = rhs - lhs;
    rep.conditions[3].satisfied = rep.conditions[3].slack >= 0.0;

    rep.satisfied = true;
    for (const auto& c : rep.conditions) rep.satisfied = rep.satisfied && c.satisfied;
    return rep;
}

Lemma5Bounds lemma5_bounds(long long n, int d, double alpha) {
    if (n < 3) throw std::invalid_argument("lemma bounds need n >= 3");
    if (d < 2) throw std::invalid_argument("lemma bounds need d >= 2");
    Lemma5Bounds b;
    double nn = static_cast<double>(n);
    b.alpha_max = 1.5 * std::sqrt((nn - 2.0) / (2.0 * d));
    if (!(alpha > 0.0) || alpha > b.alpha_max)
        throw std::invalid_argument("alpha outside (0, (3/2) sqrt((n-2)/2d)]");
    b.alpha = alpha;
    b.min_norm_bound = alpha / std::sqrt(nn);
    b.medoid_norm_bound = 3.0 * alpha / std::sqrt(nn - 2.0);
    b.prob_floor = 1.0 - nn * std::exp(-alpha * alpha);
    return b;
}

namespace {

/// Index of the in-sample medoid under squared distances, O(n^2) by direct
/// enumeration (this is the oracle the empirical checks lean on).
int brute_force_medoid(const std::vector<double>& xs, int n, int d) {
    int best = 0;
    double best_cost = kHuge;
    for (int j = 0; j < n; ++j) {
        const double* xj = xs.data() + static_cast<std::size_t>(j) * d;
        double cost = 0.0;
        for (int i = 0; i < n; ++i) {
            const double* xi = xs.data() + static_cast<std::size_t>(i) * d;
            double s = 0.0;
            for (int t = 0; t < d; ++t) {
                double diff = xi[t] - xj[t];
                s += diff * diff;
            }
            cost += s;
        }
        if (cost < best_cost) {
            best_cost = cost;
            best = j;
        }
    }
    return best;
}

double norm_of(const std::vector<double>& xs, int idx, int d) {
    const double* x = xs.data() + static_cast<std::size_t>(idx) * d;
    double s = 0.0;
    for (int t = 0; t < d; ++t) s += x[t] * x[t];
    return std::sqrt(s);
}

} // namespace

Lemma5Summary validate_lemma5_empirically(long long n, int d, int reps, std::uint64_t seed,
                                          int stmt1_samples) {
    if (n < 3 || n > 20000) throw std::invalid_argument("empirical lemma check caps n at 2e4");
    if (d < 2) throw std::invalid_argument("dimension must be at least 2");
    if (reps < 1) throw std::invalid_argument("need at least one repetition");

    Lemma5Summary sum;
    sum.n = n;
    sum.d = d;
    sum.reps = reps;
    double nn = static_cast<double>(n);
    double alpha = std::sqrt(2.0 * std::log(nn));
    double alpha_max = 1.5 * std::sqrt((nn - 2.0) / (2.0 * d));
    if (alpha > alpha_max) {
        alpha = alpha_max;
        sum.alpha_clamped = true;
    }
    sum.alpha = alpha;
    sum.floor_per_rep = nn * std::exp(-alpha * alpha);
    double min_bound = alpha / std::sqrt(nn);
    double med_bound = 3.0 * alpha / std::sqrt(nn - 2.0);

    std::vector<double> origin(d, 0.0);
    int in = static_cast<int>(n);
    for (int rep = 0; rep < reps; ++rep) {
        std::uint64_t rep_seed = mix_seed(seed, static_cast<std::uint64_t>(rep));
        auto xs = sample_ball(origin.data(), d, in, RadialLaw::quadratic_cdf, rep_seed);

        int star = brute_force_medoid(xs, in, d);
        int argmin = 0;
        double best = kHuge;
        for (int i = 0; i < in; ++i) {
            double v = norm_of(xs, i, d);
            if (v < best) {
                best = v;
                argmin = i;
            }
        }
        double norm_min = best;
        double norm_star = norm_of(xs, star, d);

        if (norm_min > min_bound) sum.stmt2_failures++;
        if (norm_star > med_bound) sum.stmt3_failures++;

        // Statement 1 on a deterministic subset of columns l.
        Rng pick(mix_seed(rep_seed, 0x5741ULL));
        int checks = std::min<long long>(stmt1_samples, n);
        for (int t = 0; t < checks; ++t) {
            int l = static_cast<int>(pick.next_below(static_cast<std::uint32_t>(in)));
            double lhs_star = 0.0, lhs_min = 0.0;
            const double* xl = xs.data() + static_cast<std::size_t>(l) * d;
            const double* xm = xs.data() + static_cast<std::size_t>(argmin) * d;
            const double* xst = xs.data() + static_cast<std::size_t>(star) * d;
            for (int i = 0; i < in; ++i) {
                const double* xi = xs.data() + static_cast<std::size_t>(i) * d;
                double dl = 0.0, dmin = 0.0, dstar = 0.0;
                for (int tt = 0; tt < d; ++tt) {
                    double a = xi[tt] - xl[tt];
                    double b = xi[tt] - xm[tt];
                    double cc = xi[tt] - xst[tt];
                    dl += a * a;
                    dmin += b * b;
                    dstar += cc * cc;
                }
                lhs_star += dl - dstar;
                lhs_min += dl - dmin;
            }
            double nl = norm_of(xs, l, d);
            double rhs = (nn - 2.0) * (nl * nl - norm_min * norm_min) -
                         2.0 * alpha * std::sqrt(nn - 2.0) * (nl + norm_min);
            sum.stmt1_checks++;
            // chain: sum (d_l - d_star) >= sum (d_l - d_min) >= rhs
            if (!(lhs_star >= lhs_min - 1e-7 && lhs_min >= rhs - 1e-7)) sum.stmt1_failures++;
        }
    }
    return sum;
}

Lemma5Stmt2Summary validate_lemma5_stmt2(long long n, int d, int reps, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("need n >= 3");
    Lemma5Stmt2Summary sum;
    sum.reps = reps;
    double nn = static_cast<double>(n);
    double alpha = std::sqrt(2.0 * std::log(nn));
    sum.bound = alpha / std::sqrt(nn);
    sum.rate_bound = std::exp(-alpha * alpha);

    std::vector<double> origin(d, 0.0);
    int in = static_cast<int>(n);
    for (int rep = 0; rep < reps; ++rep) {
        auto xs = sample_ball(origin.data(), d, in, RadialLaw::quadratic_cdf,
                              mix_seed(seed, static_cast<std::uint64_t>(rep)));
        double best = kHuge;
        for (int i = 0; i < in; ++i) best = std::min(best, norm_of(xs, i, d));
        if (best > sum.bound) sum.failures++;
    }
    return sum;
}

std::string theorem_to_json(const TheoremReport& rep) {
    nlohmann::ordered_json j;
    j["rho"] = rep.rho;
    j["alpha"] = rep.alpha;
    j["u_bound"] = rep.u_bound;
    nlohmann::ordered_json conds = nlohmann::ordered_json::array();
    for (const auto& c : rep.conditions) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["slack"] = c.slack;
        cj["satisfied"] = c.satisfied;
        conds.push_back(cj);
    }
    j["conditions"] = conds;
    j["probability_floor"] = rep.probability_floor;
    j["proof_probability_floor"] = rep.proof_probability_floor;
    j["satisfied"] = rep.satisfied;
    return j.dump(2);
}

} // namespace medoidlp
