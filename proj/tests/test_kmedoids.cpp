#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "medoidlp/kmedoids.hpp"
#include "medoidlp/lp_text.hpp"
#include "medoidlp/rng.hpp"

using namespace medoidlp;

namespace {

DissimilarityMatrix from_1d(std::initializer_list<double> coords, Metric m = Metric::squared()) {
    return dissimilarities_1d(std::vector<double>(coords), m);
}

DissimilarityMatrix random_planar(Rng& rng, int n, Metric m = Metric::squared()) {
    PointSet ps;
    ps.dim = 2;
    for (int i = 0; i < n; ++i) {
        ps.xs.push_back(rng.next_double());
        ps.xs.push_back(rng.next_double());
    }
    ps.ball_of.assign(n, 0);
    return dissimilarities(ps, m);
}

} // namespace

TEST_CASE("clustering bookkeeping") {
    auto w = from_1d({0.0, 1.0, 2.0, 10.0, 11.0, 12.0});

    auto c = Clustering::from_medoids(w, {1, 4});
    CHECK(c.k() == 2);
    CHECK(c.assign == std::vector<int>{1, 1, 1, 4, 4, 4});
    CHECK(c.cluster_size == std::vector<int>{3, 3, 3, 3, 3, 3});
    // second medoid is the other one everywhere when k = 2
    CHECK(c.second_medoid == std::vector<int>{4, 4, 4, 1, 1, 1});
    CHECK(c.objective(w) == doctest::Approx(4.0));
    CHECK(c.labels() == std::vector<int>{0, 0, 0, 1, 1, 1});

    auto solo = Clustering::from_medoids(w, {2});
    CHECK(solo.k() == 1);
    CHECK(solo.second_medoid == std::vector<int>(6, -1));

    // an arbitrary (non-nearest) assignment is representable for probing
    auto probe = Clustering::from_assignment(w, {0, 0, 3, 3, 3, 3});
    CHECK(probe.k() == 2);
    CHECK(probe.medoids == std::vector<int>{0, 3});

    CHECK_THROWS_AS(Clustering::from_assignment(w, {1, 0, 0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("program construction") {
    SUBCASE("N=3, k=1: 9 variables and 3+1+6 rows") {
        auto w = from_1d({0.0, 1.0, 3.0});
        auto lp = build_linkmed(w, 1);
        CHECK(lp.num_vars() == 9);
        CHECK(lp.num_constraints() == 3 + 1 + 6);
    }
    SUBCASE("equality, budget, and coupling structure at N=4") {
        auto w = from_1d({0.0, 1.0, 2.0, 3.0});
        auto lp = build_linkmed(w, 2);
        CHECK(lp.num_vars() == 16);
        int eq = 0, le = 0;
        for (const auto& c : lp.constraints()) {
            if (c.rel == Relation::eq) ++eq;
            else ++le;
        }
        CHECK(eq == 4);
        CHECK(le == 1 + 12); // budget + N(N-1) couplings
    }
    SUBCASE("k out of range") {
        auto w = from_1d({0.0, 1.0});
        CHECK_THROWS_AS(build_linkmed(w, 0), std::invalid_argument);
        CHECK_THROWS_AS(build_linkmed(w, 3), std::invalid_argument);
    }
}

TEST_CASE("brute force enumeration") {
    SUBCASE("three collinear points, k=1") {
        auto w = from_1d({0.0, 1.0, 3.0});
        // medoid costs by direct enumeration: 10, 5, 13
        auto res = brute_force_kmed(w, 1);
        CHECK(res.best_objective == doctest::Approx(5.0));
        REQUIRE(res.optimal_medoid_sets.size() == 1);
        CHECK(res.optimal_medoid_sets[0] == std::vector<int>{1});
        CHECK(res.unique);
    }
    SUBCASE("k = N gives zero objective") {
        auto w = from_1d({0.0, 2.0, 5.0});
        auto res = brute_force_kmed(w, 3);
        CHECK(res.best_objective == doctest::Approx(0.0));
        CHECK(res.unique);
        CHECK(res.optimal_medoid_sets[0] == std::vector<int>{0, 1, 2});
    }
    SUBCASE("symmetry produces two optima") {
        auto w = from_1d({0.0, 1.0});
        auto res = brute_force_kmed(w, 1);
        CHECK(res.best_objective == doctest::Approx(1.0));
        CHECK(res.optimal_medoid_sets.size() == 2);
        CHECK(!res.unique);
    }
    SUBCASE("combinatorial guard") {
        Rng rng(3);
        auto w = random_planar(rng, 60);
        CHECK_THROWS_AS(brute_force_kmed(w, 30), std::invalid_argument);
    }
}

TEST_CASE("relaxation on three collinear points") {
    auto w = from_1d({0.0, 1.0, 3.0});
    auto rr = solve_linkmed(w, 1);
    CHECK(rr.integral);
    CHECK(rr.objective == doctest::Approx(5.0));
    CHECK(rr.clustering->medoids == std::vector<int>{1});
}

TEST_CASE("relaxation on the six-point line") {
    auto w = from_1d({0.0, 1.0, 2.0, 10.0, 11.0, 12.0});
    auto rr = solve_linkmed(w, 2);
    CHECK(rr.vertex);
    CHECK(rr.integral);
    CHECK(rr.objective == doctest::Approx(4.0));
    REQUIRE(rr.clustering.has_value());
    CHECK(rr.clustering->medoids == std::vector<int>{1, 4}); // the points 1 and 11

    auto exact = brute_force_kmed(w, 2);
    CHECK(exact.best_objective == doctest::Approx(4.0));
    CHECK(exact.unique);
    CHECK(exact.optimal_medoid_sets[0] == rr.clustering->medoids);
}

TEST_CASE("two points, identity relaxations") {
    SUBCASE("k=2: everyone their own medoid at cost zero") {
        auto w = from_1d({0.0, 5.0});
        auto rr = solve_linkmed(w, 2);
        CHECK(rr.integral);
        CHECK(rr.objective == doctest::Approx(0.0));
        CHECK(rr.z_at(0, 0) == doctest::Approx(1.0));
        CHECK(rr.z_at(1, 1) == doctest::Approx(1.0));
    }
    SUBCASE("k=1: objective is the pair weight, either vertex") {
        auto w = from_1d({0.0, 3.0});
        auto rr = solve_linkmed(w, 1);
        CHECK(rr.integral);
        CHECK(rr.objective == doctest::Approx(9.0));
        auto exact = brute_force_kmed(w, 1);
        CHECK(!exact.unique);
        CHECK(exact.optimal_medoid_sets.size() == 2);
    }
}

TEST_CASE("row generation agrees with the full program") {
    Rng rng(501);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 4 + static_cast<int>(rng.next_below(6));
        int k = 1 + static_cast<int>(rng.next_below(3u));
        k = std::min(k, n);
        auto w = random_planar(rng, n);
        auto lazy = solve_linkmed(w, k);
        SolveLinkmedOptions full;
        full.full_program = true;
        auto dense = solve_linkmed(w, k, full);
        CHECK(lazy.objective == doctest::Approx(dense.objective).epsilon(1e-9));
        CHECK(lazy.integral == dense.integral);
        // with ties (e.g. k = n-1 leaves out either endpoint of the closest
        // pair) the two paths may pick different optimal vertices; compare
        // the solutions themselves only when the optimum is unique
        auto exact = brute_force_kmed(w, k);
        if (exact.unique)
            for (int i = 0; i < n * n; ++i) CHECK(std::abs(lazy.z[i] - dense.z[i]) < 1e-6);
    }
}

TEST_CASE("relaxation bounds and extraction properties") {
    Rng rng(99);
    int integral_count = 0;
    for (int trial = 0; trial < 60; ++trial) {
        int n = 4 + static_cast<int>(rng.next_below(9)); // up to 12
        int k = 1 + static_cast<int>(rng.next_below(3u));
        k = std::min(k, n);
        auto w = random_planar(rng, n);
        auto rr = solve_linkmed(w, k);
        auto exact = brute_force_kmed(w, k);

        // relaxation bound
        CHECK(rr.objective <= exact.best_objective + 1e-7);

        // row sums, budget, coupling feasibility
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += rr.z_at(i, j);
            CHECK(std::abs(s - 1.0) <= 1e-7);
        }
        double diag = 0.0;
        for (int j = 0; j < n; ++j) diag += rr.z_at(j, j);
        CHECK(diag <= k + 1e-7);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) CHECK(rr.z_at(i, j) <= rr.z_at(j, j) + 1e-9);

        if (rr.integral) {
            ++integral_count;
            CHECK(rr.objective == doctest::Approx(exact.best_objective).epsilon(1e-9));
            if (exact.unique) CHECK(rr.clustering->medoids == exact.optimal_medoid_sets[0]);
            // extracted assignment is nearest-medoid with lowest-index ties
            const auto& c = *rr.clustering;
            for (int i = 0; i < n; ++i) {
                for (int m : c.medoids) {
                    CHECK(w.at(i, c.assign[i]) <= w.at(i, m) + 1e-12);
                    if (w.at(i, m) == w.at(i, c.assign[i])) CHECK(c.assign[i] <= m);
                }
            }
        }
    }
    CHECK(integral_count > 30); // most planar instances relax integrally
}

TEST_CASE("1D unsquared relaxations are integral") {
    Rng rng(653);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 4 + static_cast<int>(rng.next_below(17)); // up to 20
        int k = 1 + static_cast<int>(rng.next_below(4u));
        k = std::min(k, n);
        std::vector<double> coords;
        for (int i = 0; i < n; ++i) coords.push_back(rng.next_double() * 10.0);
        auto w = dissimilarities_1d(coords, Metric::euclidean());
        auto rr = solve_linkmed(w, k);
        CHECK(rr.vertex);
        CHECK(rr.integral);
    }
}

TEST_CASE("recovery classification") {
    auto w = from_1d({0.0, 1.0, 2.0, 10.0, 11.0, 12.0});
    auto rr = solve_linkmed(w, 2);
    REQUIRE(rr.integral);

    SUBCASE("matching partition is a ball recovery") {
        auto out = classify_recovery(rr, {0, 0, 0, 1, 1, 1});
        CHECK(out.label == Recovery::ball_recovery);
        CHECK(out.mismatched.empty());
        // medoid identity is irrelevant, only the partition matters
        auto relabeled = classify_recovery(rr, {7, 7, 7, 3, 3, 3});
        CHECK(relabeled.label == Recovery::ball_recovery);
    }
    SUBCASE("one misplaced point downgrades to cluster recovery") {
        auto out = classify_recovery(rr, {0, 0, 1, 1, 1, 1});
        CHECK(out.label == Recovery::cluster_recovery);
        CHECK(out.mismatched == std::vector<int>{2});
    }
    SUBCASE("fractional entries stay fractional") {
        RelaxationResult frac;
        frac.n = 2;
        frac.z = {0.5, 0.5, 0.5, 0.5};
        frac.objective = 1.0;
        frac.integral = false;
        auto out = classify_recovery(frac, {0, 1});
        CHECK(out.label == Recovery::fractional);
    }
    SUBCASE("truth vector must cover all points") {
        CHECK_THROWS_AS(classify_recovery(rr, {0, 0, 0}), std::invalid_argument);
    }
}

TEST_CASE("relaxation JSON shape") {
    auto w = from_1d({0.0, 1.0, 2.0, 10.0, 11.0, 12.0});
    auto rr = solve_linkmed(w, 2);
    std::string j = relaxation_to_json(rr);
    CHECK(j.find("\"objective\"") != std::string::npos);
    CHECK(j.find("\"integral\": true") != std::string::npos);
    CHECK(j.find("\"medoids\"") != std::string::npos);
    std::string with_z = relaxation_to_json(rr, true);
    CHECK(with_z.find("\"z\"") != std::string::npos);
}

TEST_CASE("exported LinKMed solves identically after a round trip") {
    Rng rng(11);
    auto w = random_planar(rng, 5);
    auto lp = build_linkmed(w, 2);
    auto back = parse_lp_text(export_lp_text(lp));
    auto a = solve_lp(lp);
    auto b = solve_lp(back);
    REQUIRE(a.status == SolveStatus::optimal);
    REQUIRE(b.status == SolveStatus::optimal);
    CHECK(a.objective_value == b.objective_value);
    CHECK(a.x == b.x);
}
