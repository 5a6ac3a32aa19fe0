#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "medoidlp/theory.hpp"

using namespace medoidlp;

TEST_CASE("rho and the basic scalars") {
    auto rep = check_guarantee({3.75, 1000000, 2, 2});
    // high-precision reference: 3 sqrt(2 log 1e6 / (1e6 - 2))
    CHECK(rep.rho == doctest::Approx(0.01576958107885976).epsilon(1e-12));
    CHECK(rep.alpha == doctest::Approx(std::sqrt(2.0 * std::log(1e6))));
    CHECK(rep.u_bound == doctest::Approx(3031290.4824703168).epsilon(1e-10));
    CHECK(rep.probability_floor == doctest::Approx(1.0 - 8.0 / 1e6));
    CHECK(rep.proof_probability_floor == doctest::Approx(1.0 - 4.0 / 1e6));

    // u_bound approaches 3n as rho vanishes
    auto big = check_guarantee({3.75, 1000000000000LL, 2, 2});
    CHECK(big.u_bound / 1e12 == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("valid parameter combinations all satisfy the guarantee") {
    struct Row {
        double R;
        long long n;
        int k;
        double slack4; // frozen high-precision value of the closing slack
    };
    const Row rows[] = {
        {3.75, 1000000, 2, 67669.896393908982},
        {3.80, 10000000, 3, 510357.23459519057},
        {3.90, 10000, 2, 1479.3606098936409},
        {3.90, 10000000, 10, 543011.83434750325},
    };
    for (const auto& r : rows) {
        auto rep = check_guarantee({r.R, r.n, r.k, 2});
        CHECK(rep.satisfied);
        for (const auto& c : rep.conditions) CHECK(c.satisfied);
        CHECK(rep.conditions[3].slack == doctest::Approx(r.slack4).epsilon(1e-8));
    }
}

TEST_CASE("golden value: R=3.75 at n=1e4 fails the closing inequality") {
    auto rep = check_guarantee({3.75, 10000, 2, 2});
    CHECK(!rep.satisfied);
    CHECK(rep.conditions[0].satisfied);
    CHECK(rep.conditions[1].satisfied);
    CHECK(rep.conditions[2].satisfied);
    CHECK(!rep.conditions[3].satisfied);
    CHECK(rep.conditions[3].slack == doctest::Approx(-5845.8251282780962).epsilon(1e-8));
}

TEST_CASE("monotonicity and limits") {
    SUBCASE("satisfied is monotone in R on a 50-point grid") {
        bool seen_true = false;
        for (int t = 0; t < 50; ++t) {
            double R = 3.2 + t * (5.0 - 3.2) / 49.0;
            auto rep = check_guarantee({R, 10000, 2, 2});
            if (rep.satisfied) seen_true = true;
            if (seen_true) CHECK(rep.satisfied);
        }
        CHECK(seen_true);
    }
    SUBCASE("rho decreases and vanishes") {
        double prev = 1e300;
        for (long long n : {8LL, 20LL, 100LL, 1000LL, 10000LL, 100000LL, 1000000LL}) {
            auto rep = check_guarantee({4.0, n, 2, 2});
            CHECK(rep.rho < prev);
            prev = rep.rho;
        }
        CHECK(prev < 0.02);
    }
}

TEST_CASE("query validation") {
    CHECK_THROWS_AS(check_guarantee({3.75, 2, 2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(check_guarantee({3.75, 100, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(check_guarantee({3.75, 100, 2, 1}), std::invalid_argument);
    CHECK_THROWS_AS(check_guarantee({-1.0, 100, 2, 2}), std::invalid_argument);
}

TEST_CASE("lemma bounds") {
    SUBCASE("alpha = sqrt(2 log n) turns the floor into 1 - 1/n") {
        long long n = 10000;
        double alpha = std::sqrt(2.0 * std::log(static_cast<double>(n)));
        auto b = lemma5_bounds(n, 2, alpha);
        CHECK(b.prob_floor == doctest::Approx(1.0 - 1e-4).epsilon(1e-10));
        CHECK(b.min_norm_bound == doctest::Approx(alpha / 100.0));
        CHECK(b.medoid_norm_bound == doctest::Approx(3.0 * alpha / std::sqrt(9998.0)));
        CHECK(b.alpha_max == doctest::Approx(1.5 * std::sqrt(9998.0 / 4.0)));
    }
    SUBCASE("alpha outside its admissible range is rejected") {
        CHECK_THROWS_AS(lemma5_bounds(10, 2, 100.0), std::invalid_argument);
        CHECK_THROWS_AS(lemma5_bounds(10, 2, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(lemma5_bounds(2, 2, 0.1), std::invalid_argument);
    }
}

TEST_CASE("empirical lemma validation at small scale") {
    SUBCASE("statements hold at n=200") {
        auto s = validate_lemma5_empirically(200, 2, 10, 77);
        CHECK(!s.alpha_clamped);
        CHECK(s.stmt1_checks == 200);
        CHECK(s.stmt1_failures == 0);
        CHECK(s.stmt2_failures <= 1);
        CHECK(s.stmt3_failures <= 1);
        CHECK(s.floor_per_rep == doctest::Approx(1.0 / 200.0));
    }
    SUBCASE("degenerate n=3 runs with a clamped alpha") {
        auto s = validate_lemma5_empirically(3, 2, 5, 9);
        CHECK(s.alpha_clamped);
        CHECK(s.alpha == doctest::Approx(1.5 * std::sqrt(1.0 / 4.0)));
    }
    SUBCASE("statement-2-only sampler matches its analytic rate bound loosely") {
        auto s = validate_lemma5_stmt2(100, 2, 2000, 5);
        // e^{-alpha^2} = 1e-4 at n = 100; 2000 reps should see at most a few
        CHECK(s.rate_bound == doctest::Approx(1e-4));
        CHECK(s.failures <= 3);
    }
    SUBCASE("cap on n") {
        CHECK_THROWS_AS(validate_lemma5_empirically(30000, 2, 1, 1), std::invalid_argument);
    }
}

TEST_CASE("theorem JSON") {
    auto rep = check_guarantee({3.9, 10000, 2, 2});
    std::string j = theorem_to_json(rep);
    CHECK(j.find("\"rho\"") != std::string::npos);
    CHECK(j.find("\"conditions\"") != std::string::npos);
    CHECK(j.find("\"satisfied\": true") != std::string::npos);
    CHECK(j.find("\"probability_floor\"") != std::string::npos);
}
