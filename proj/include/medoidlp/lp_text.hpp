#ifndef MEDOIDLP_LP_TEXT_HPP
#define MEDOIDLP_LP_TEXT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "medoidlp/linear_program.hpp"

namespace medoidlp {

/// Renders the program in LP file format (Minimize / Subject To / Bounds /
/// End), readable by common external solvers. Every variable appears in the
/// objective line (zero coefficients included) so a re-parse reproduces the
/// exact variable order. Requires named variables.
std::string export_lp_text(const LinearProgram& lp);

/// Parses the LP file subset produced by export_lp_text.
LinearProgram parse_lp_text(const std::string& text);

/// Reads an externally computed solution vector: one value per line, or
/// comma-separated values; blank lines ignored.
std::vector<double> read_solution_csv(std::istream& in);

/// Cross-validation of an external solver's answer against a program.
struct SolutionCheck {
    double objective = 0.0;
    double residual = 0.0;
    bool feasible = false;
};
SolutionCheck check_external_solution(const LinearProgram& lp, const std::vector<double>& x,
                                      double tol = 1e-6);

} // namespace medoidlp

#endif
