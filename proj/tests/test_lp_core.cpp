#include <cmath>
#include <sstream>

#include "doctest.h"
#include "medoidlp/linear_program.hpp"
#include "medoidlp/lp_text.hpp"
#include "medoidlp/rng.hpp"

using namespace medoidlp;

TEST_CASE("one-variable programs") {
    SUBCASE("min x subject to x >= 3") {
        LinearProgram lp;
        lp.add_variable(1.0, 0.0, kInf, "x");
        lp.add_constraint({{0, 1.0}}, Relation::ge, 3.0);
        auto sol = solve_lp(lp);
        REQUIRE(sol.status == SolveStatus::optimal);
        CHECK(sol.x[0] == doctest::Approx(3.0));
        CHECK(sol.objective_value == doctest::Approx(3.0));
        CHECK(sol.vertex_flag);
    }
    SUBCASE("infeasible pair of rows") {
        LinearProgram lp;
        lp.add_variable(1.0, 0.0, kInf, "x");
        lp.add_constraint({{0, 1.0}}, Relation::ge, 3.0);
        lp.add_constraint({{0, 1.0}}, Relation::le, 1.0);
        CHECK(solve_lp(lp).status == SolveStatus::infeasible);
    }
    SUBCASE("unbounded below") {
        LinearProgram lp;
        lp.add_variable(-1.0, 0.0, kInf, "x");
        CHECK(solve_lp(lp).status == SolveStatus::unbounded);
    }
}

TEST_CASE("simplex geometry picks a vertex deterministically") {
    LinearProgram lp;
    lp.add_variable(-1.0, 0.0, kInf, "x");
    lp.add_variable(-1.0, 0.0, kInf, "y");
    lp.add_constraint({{0, 1.0}, {1, 1.0}}, Relation::le, 1.0);
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.objective_value == doctest::Approx(-1.0));
    CHECK(sol.vertex_flag);
    bool at_corner = (std::abs(sol.x[0] - 1.0) < 1e-9 && std::abs(sol.x[1]) < 1e-9) ||
                     (std::abs(sol.x[1] - 1.0) < 1e-9 && std::abs(sol.x[0]) < 1e-9);
    CHECK(at_corner);

    auto again = solve_lp(lp);
    CHECK(sol.x == again.x); // bit-identical rerun
    CHECK(sol.iterations == again.iterations);
}

TEST_CASE("equalities, free and fixed variables") {
    SUBCASE("free variable with a lower bound elsewhere") {
        LinearProgram lp;
        lp.add_variable(1.0, 0.0, kInf, "x");
        lp.add_variable(2.0, -3.0, kInf, "y");
        lp.add_constraint({{0, 1.0}, {1, 1.0}}, Relation::eq, 5.0);
        auto sol = solve_lp(lp);
        REQUIRE(sol.status == SolveStatus::optimal);
        CHECK(sol.x[1] == doctest::Approx(-3.0));
        CHECK(sol.x[0] == doctest::Approx(8.0));
        CHECK(sol.objective_value == doctest::Approx(2.0));
    }
    SUBCASE("maximization flips the sense") {
        LinearProgram lp;
        lp.sense = Sense::maximize;
        lp.add_variable(1.0, 0.0, kInf, "x");
        lp.add_variable(1.0, 0.0, kInf, "y");
        lp.add_constraint({{0, 1.0}, {1, 1.0}}, Relation::le, 2.0);
        auto sol = solve_lp(lp);
        REQUIRE(sol.status == SolveStatus::optimal);
        CHECK(sol.objective_value == doctest::Approx(2.0));
        // for maximization the dual bound is from above
        double dual = dual_objective(lp, sol.duals);
        CHECK(dual >= sol.objective_value - 1e-7);
        CHECK(dual == doctest::Approx(2.0));
    }
    SUBCASE("upper bounds drive bound flips") {
        LinearProgram lp;
        lp.add_variable(-1.0, 0.0, 1.0, "x");
        lp.add_variable(-2.0, 0.0, 1.0, "y");
        lp.add_constraint({{0, 1.0}, {1, 1.0}}, Relation::le, 1.5);
        auto sol = solve_lp(lp);
        REQUIRE(sol.status == SolveStatus::optimal);
        CHECK(sol.objective_value == doctest::Approx(-2.5));
        CHECK(sol.x[1] == doctest::Approx(1.0));
        CHECK(sol.x[0] == doctest::Approx(0.5));
    }
}

TEST_CASE("Beale's cycling example terminates at the optimum") {
    LinearProgram lp;
    lp.add_variable(-0.75, 0.0, kInf, "x4");
    lp.add_variable(150.0, 0.0, kInf, "x5");
    lp.add_variable(-0.02, 0.0, kInf, "x6");
    lp.add_variable(6.0, 0.0, kInf, "x7");
    lp.add_constraint({{0, 0.25}, {1, -60.0}, {2, -0.04}, {3, 9.0}}, Relation::le, 0.0);
    lp.add_constraint({{0, 0.5}, {1, -90.0}, {2, -0.02}, {3, 3.0}}, Relation::le, 0.0);
    lp.add_constraint({{2, 1.0}}, Relation::le, 1.0);
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.objective_value == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("random boxed programs: residuals, weak duality, determinism") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng.next_below(5));
        int m = 1 + static_cast<int>(rng.next_below(5));
        LinearProgram lp;
        for (int j = 0; j < n; ++j)
            lp.add_variable(2.0 * rng.next_double() - 1.0, 0.0, 2.0, "v" + std::to_string(j));
        std::vector<double> x0(n);
        for (int j = 0; j < n; ++j) x0[j] = 2.0 * rng.next_double();
        for (int r = 0; r < m; ++r) {
            std::vector<std::pair<int, double>> row;
            double ax = 0.0;
            for (int j = 0; j < n; ++j) {
                double a = 2.0 * rng.next_double() - 1.0;
                row.emplace_back(j, a);
                ax += a * x0[j];
            }
            int kind = static_cast<int>(rng.next_below(3));
            if (kind == 0)
                lp.add_constraint(std::move(row), Relation::le, ax + rng.next_double());
            else if (kind == 1)
                lp.add_constraint(std::move(row), Relation::ge, ax - rng.next_double());
            else
                lp.add_constraint(std::move(row), Relation::eq, ax);
        }
        auto sol = solve_lp(lp);
        REQUIRE(sol.status == SolveStatus::optimal); // x0 is feasible by construction
        CHECK(sol.primal_residual <= 1e-8);
        CHECK(sol.complementarity_residual <= 1e-7);
        CHECK(sol.objective_value <= lp.objective_value(x0) + 1e-7);
        double dual = dual_objective(lp, sol.duals);
        CHECK(dual <= sol.objective_value + 1e-7);
        // strong duality holds at an optimal basis; verify within tolerance
        CHECK(std::abs(dual - sol.objective_value) <= 1e-6 * (1.0 + std::abs(dual)));

        auto again = solve_lp(lp);
        CHECK(again.x == sol.x);
    }
}

TEST_CASE("LP text export and parse") {
    SUBCASE("single variable layout") {
        LinearProgram lp;
        lp.add_variable(2.0, 0.0, kInf, "x");
        lp.add_constraint({{0, 1.0}}, Relation::ge, 3.0);
        std::string text = export_lp_text(lp);
        CHECK(text.find("Minimize") != std::string::npos);
        CHECK(text.find("Subject To") != std::string::npos);
        CHECK(text.find("2 x") != std::string::npos);
        CHECK(text.find(">= 3") != std::string::npos);
        // one objective line, one constraint line
        CHECK(text.find(" obj:") != std::string::npos);
        CHECK(text.find(" c0:") != std::string::npos);
        CHECK(text.find(" c1:") == std::string::npos);
    }

    SUBCASE("round trip reproduces exact coefficient arrays") {
        Rng rng(77);
        LinearProgram lp;
        lp.sense = Sense::maximize;
        for (int j = 0; j < 6; ++j) {
            double lo = rng.next_double() < 0.3 ? -kInf : -rng.next_double();
            double hi = rng.next_double() < 0.3 ? kInf : 2.0 + rng.next_double();
            if (lo > hi) std::swap(lo, hi);
            lp.add_variable(rng.next_gaussian(), lo, hi, "q" + std::to_string(j));
        }
        for (int r = 0; r < 5; ++r) {
            std::vector<std::pair<int, double>> row;
            for (int j = 0; j < 6; ++j)
                if (rng.next_double() < 0.7) row.emplace_back(j, rng.next_gaussian());
            if (row.empty()) row.emplace_back(0, 1.0);
            Relation rel = r % 3 == 0 ? Relation::le : (r % 3 == 1 ? Relation::ge : Relation::eq);
            lp.add_constraint(std::move(row), rel, rng.next_gaussian());
        }
        std::string text = export_lp_text(lp);
        LinearProgram back = parse_lp_text(text);
        REQUIRE(back.num_vars() == lp.num_vars());
        REQUIRE(back.num_constraints() == lp.num_constraints());
        CHECK(back.sense == lp.sense);
        CHECK(back.objective() == lp.objective());
        CHECK(back.lower() == lp.lower());
        CHECK(back.upper() == lp.upper());
        CHECK(back.names() == lp.names());
        for (int r = 0; r < lp.num_constraints(); ++r) {
            CHECK(back.constraints()[r].rel == lp.constraints()[r].rel);
            CHECK(back.constraints()[r].rhs == lp.constraints()[r].rhs);
            CHECK(back.constraints()[r].coeffs == lp.constraints()[r].coeffs);
        }
        // and the re-export is byte-stable
        CHECK(export_lp_text(back) == text);
    }

    SUBCASE("unnamed variables are rejected") {
        LinearProgram lp;
        lp.add_variable(1.0);
        CHECK_THROWS_AS(export_lp_text(lp), std::invalid_argument);
    }
}

TEST_CASE("external solution import") {
    std::istringstream in("0.5\n1.5,2\n\n3\n");
    auto xs = read_solution_csv(in);
    REQUIRE(xs.size() == 4);
    CHECK(xs[0] == 0.5);
    CHECK(xs[1] == 1.5);
    CHECK(xs[2] == 2.0);
    CHECK(xs[3] == 3.0);

    LinearProgram lp;
    lp.add_variable(1.0, 0.0, kInf, "x");
    lp.add_variable(1.0, 0.0, kInf, "y");
    lp.add_constraint({{0, 1.0}, {1, 1.0}}, Relation::ge, 1.0);
    auto ok = check_external_solution(lp, {0.5, 0.5});
    CHECK(ok.feasible);
    CHECK(ok.objective == doctest::Approx(1.0));
    auto bad = check_external_solution(lp, {0.1, 0.2});
    CHECK(!bad.feasible);
    CHECK(bad.residual == doctest::Approx(0.7));
}
