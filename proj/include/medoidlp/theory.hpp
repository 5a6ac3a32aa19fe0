#ifndef MEDOIDLP_THEORY_HPP
#define MEDOIDLP_THEORY_HPP

#include <array>
#include <cstdint>
#include <string>

namespace medoidlp {

/// Query for the separated-balls guarantee: separation R (= 3.75 + eps),
/// n points per ball, k balls, dimension d.
struct GuaranteeQuery {
    double R = 3.75;
    long long n = 0;
    int k = 2;
    int d = 2;

    void validate() const; // n >= 3, k >= 2, d >= 2, R > 0
};

struct ConditionSlack {
    std::string name;
    double slack = 0.0;
    bool satisfied = false;
};

/// Numeric evaluation of the four guarantee inequalities. All logarithms are
/// natural. `probability_floor` is the theorem-level 1 - 4k/n; the proof's
/// own bookkeeping reaches 1 - 2k/n, exposed as `proof_probability_floor`.
struct TheoremReport {
    double rho = 0.0;     // 3 sqrt(2 log n / (n-2))
    double alpha = 0.0;   // sqrt(2 log n)
    double u_bound = 0.0; // n (4 - (1-rho)^2)
    std::array<ConditionSlack, 4> conditions;
    double probability_floor = 0.0;
    double proof_probability_floor = 0.0;
    bool satisfied = false;
};

TheoremReport check_guarantee(const GuaranteeQuery& q);

struct Lemma5Bounds {
    double alpha = 0.0;
    double alpha_max = 0.0;         // (3/2) sqrt((n-2)/(2d))
    double min_norm_bound = 0.0;    // alpha n^{-1/2}
    double medoid_norm_bound = 0.0; // 3 alpha (n-2)^{-1/2}
    double prob_floor = 0.0;        // 1 - n e^{-alpha^2}
};

/// Thresholds of the medoid-concentration lemma. Requires n >= 3, d >= 2 and
/// 0 < alpha <= alpha_max.
Lemma5Bounds lemma5_bounds(long long n, int d, double alpha);

/// Monte Carlo validation of the lemma's three statements under the
/// quadratic-CDF radial law, against in-sample brute-force medoids.
struct Lemma5Summary {
    long long n = 0;
    int d = 0;
    int reps = 0;
    double alpha = 0.0;
    bool alpha_clamped = false; // alpha = sqrt(2 log n) exceeded alpha_max
    long stmt1_checks = 0;
    long stmt1_failures = 0;
    int stmt2_failures = 0;
    int stmt3_failures = 0;
    double floor_per_rep = 0.0; // n e^{-alpha^2}
};

Lemma5Summary validate_lemma5_empirically(long long n, int d, int reps, std::uint64_t seed,
                                          int stmt1_samples = 20);

/// Statement-2-only variant (minimum-norm bound), cheap enough for very many
/// repetitions.
struct Lemma5Stmt2Summary {
    int reps = 0;
    int failures = 0;
    double bound = 0.0;         // alpha n^{-1/2}
    double rate_bound = 0.0;    // e^{-alpha^2}
};

Lemma5Stmt2Summary validate_lemma5_stmt2(long long n, int d, int reps, std::uint64_t seed);

std::string theorem_to_json(const TheoremReport& rep);

} // namespace medoidlp

#endif
