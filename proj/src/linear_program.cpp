#include "medoidlp/linear_program.hpp"

#include <algorithm>
#include <cmath>

namespace medoidlp {

int LinearProgram::add_variable(double cost, double lower, double upper, std::string name) {
    objective_.push_back(cost);
    lower_.push_back(lower);
    upper_.push_back(upper);
    names_.push_back(std::move(name));
    return num_vars() - 1;
}

void LinearProgram::add_constraint(std::vector<std::pair<int, double>> coeffs, Relation rel,
                                   double rhs) {
    Constraint c;
    c.coeffs = std::move(coeffs);
    c.rel = rel;
    c.rhs = rhs;
    constraints_.push_back(std::move(c));
}

void LinearProgram::add_dense_constraint(const std::vector<double>& row, Relation rel,
                                         double rhs) {
    std::vector<std::pair<int, double>> coeffs;
    for (int j = 0; j < static_cast<int>(row.size()); ++j)
        if (row[j] != 0.0) coeffs.emplace_back(j, row[j]);
    add_constraint(std::move(coeffs), rel, rhs);
}

bool LinearProgram::has_names() const {
    if (names_.empty()) return false;
    return std::all_of(names_.begin(), names_.end(),
                       [](const std::string& s) { return !s.empty(); });
}

double LinearProgram::objective_value(const std::vector<double>& x) const {
    double v = 0.0;
    for (int j = 0; j < num_vars(); ++j) v += objective_[j] * x[j];
    return v;
}

void LinearProgram::validate() const {
    if (num_vars() < 1) throw std::invalid_argument("LP must have at least one variable");
    for (int j = 0; j < num_vars(); ++j) {
        if (std::isnan(lower_[j]) || std::isnan(upper_[j]) || lower_[j] > upper_[j])
            throw std::invalid_argument("LP has crossed or NaN bounds");
        if (!std::isfinite(objective_[j]))
            throw std::invalid_argument("LP objective coefficients must be finite");
    }
    for (const auto& c : constraints_) {
        if (!std::isfinite(c.rhs)) throw std::invalid_argument("LP rhs must be finite");
        for (auto [j, v] : c.coeffs) {
            if (j < 0 || j >= num_vars())
                throw std::invalid_argument("LP constraint references unknown variable");
            if (!std::isfinite(v))
                throw std::invalid_argument("LP coefficients must be finite");
        }
    }
}

double feasibility_residual(const LinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    const auto& lo = lp.lower();
    const auto& hi = lp.upper();
    for (int j = 0; j < lp.num_vars(); ++j) {
        if (lo[j] > -kInf) worst = std::max(worst, lo[j] - x[j]);
        if (hi[j] < kInf) worst = std::max(worst, x[j] - hi[j]);
    }
    for (const auto& c : lp.constraints()) {
        double ax = 0.0;
        double scale = 1.0;
        for (auto [j, v] : c.coeffs) {
            ax += v * x[j];
            scale = std::max(scale, std::abs(v));
        }
        double viol = 0.0;
        switch (c.rel) {
            case Relation::le: viol = ax - c.rhs; break;
            case Relation::ge: viol = c.rhs - ax; break;
            case Relation::eq: viol = std::abs(ax - c.rhs); break;
        }
        worst = std::max(worst, viol / scale);
    }
    return worst;
}

double dual_objective(const LinearProgram& lp, const std::vector<double>& y) {
    // Minimize: L(y) = y.b + sum_j min over [l_j, u_j] of (c_j - y.A_j) x_j,
    // a lower bound on the optimum. Maximize: the mirror upper bound.
    const auto& cons = lp.constraints();
    double val = 0.0;
    std::vector<double> reduced = lp.objective();
    for (std::size_t r = 0; r < cons.size(); ++r) {
        val += y[r] * cons[r].rhs;
        for (auto [j, v] : cons[r].coeffs) reduced[j] -= y[r] * v;
    }
    bool minimize = lp.sense == Sense::minimize;
    for (int j = 0; j < lp.num_vars(); ++j) {
        double rc = reduced[j];
        double lo = lp.lower()[j], hi = lp.upper()[j];
        if (rc == 0.0) continue;
        double pick = (rc > 0.0) == minimize ? lo : hi;
        if (!std::isfinite(pick)) return minimize ? -kInf : kInf;
        val += rc * pick;
    }
    return val;
}

} // namespace medoidlp
