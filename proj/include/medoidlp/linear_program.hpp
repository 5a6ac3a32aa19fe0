#ifndef MEDOIDLP_LINEAR_PROGRAM_HPP
#define MEDOIDLP_LINEAR_PROGRAM_HPP

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace medoidlp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { minimize, maximize };
enum class Relation { le, eq, ge };

/// One constraint row, stored sparsely as (variable index, coefficient).
struct Constraint {
    std::vector<std::pair<int, double>> coeffs;
    Relation rel = Relation::le;
    double rhs = 0.0;
};

/// A general-form LP: objective sense + coefficients, rows, per-variable
/// bounds (default [0, +inf)), optional variable names.
class LinearProgram {
public:
    Sense sense = Sense::minimize;

    int add_variable(double cost, double lower = 0.0, double upper = kInf,
                     std::string name = {});
    void add_constraint(std::vector<std::pair<int, double>> coeffs, Relation rel, double rhs);
    void add_dense_constraint(const std::vector<double>& row, Relation rel, double rhs);
    void set_objective_coeff(int j, double v) { objective_[j] = v; }
    void add_objective_coeff(int j, double v) { objective_[j] += v; }
    void set_bounds(int j, double lo, double hi) { lower_[j] = lo; upper_[j] = hi; }

    int num_vars() const { return static_cast<int>(objective_.size()); }
    int num_constraints() const { return static_cast<int>(constraints_.size()); }

    const std::vector<double>& objective() const { return objective_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(int j) const { return names_[j]; }
    bool has_names() const;

    double objective_value(const std::vector<double>& x) const;

    /// Throws std::invalid_argument if the program is malformed (no
    /// variables, out-of-range indices, non-finite rhs, crossed bounds).
    void validate() const;

private:
    std::vector<double> objective_;
    std::vector<Constraint> constraints_;
    std::vector<double> lower_, upper_;
    std::vector<std::string> names_;
};

enum class SolveStatus { optimal, infeasible, unbounded };

/// Raised when the simplex cannot certify its result to tolerance.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

struct LPSolution {
    SolveStatus status = SolveStatus::optimal;
    std::vector<double> x;
    double objective_value = 0.0;
    std::vector<double> duals; // one multiplier per constraint row
    bool vertex_flag = false;
    double primal_residual = 0.0;
    double complementarity_residual = 0.0;
    long iterations = 0;
};

struct SimplexOptions {
    double pivot_tol = 1e-9;
    double feasibility_tol = 1e-8;
    double optimality_tol = 1e-9;
    // Dantzig pricing until this many pivots, then Bland's rule for
    // guaranteed termination.
    long dantzig_pivot_cap = 20000;
    long max_iterations = 2000000;
};

/// Deterministic dense bounded-variable revised simplex. Returns a basic
/// optimal vertex when one exists; identical input yields identical output.
LPSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

/// Largest violation of rows and bounds by x (unit-scaled rows).
double feasibility_residual(const LinearProgram& lp, const std::vector<double>& x);

/// Dual objective value of a multiplier vector y (for minimization this is a
/// lower bound on the optimum whenever the implied reduced costs have
/// admissible signs; used by the weak-duality checks).
double dual_objective(const LinearProgram& lp, const std::vector<double>& y);

} // namespace medoidlp

#endif
