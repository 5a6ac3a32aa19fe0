#include <algorithm>
#include <cmath>
#include <vector>

#include "medoidlp/linear_program.hpp"

// Bounded-variable revised simplex with an explicitly maintained basis
// inverse. One logical variable per row turns every program into
//   min c.x  s.t.  A x + s = b,  l <= (x, s) <= u,
// so the all-logical basis is diagonal. Rows whose logical cannot absorb the
// initial residual get a phase-1 artificial. Pricing is Dantzig (most
// violating reduced cost) until a pivot cap, then Bland's rule; all ties
// break to the lowest variable index.

namespace medoidlp {

namespace {

enum VarStatus : unsigned char { kNonbasicLower, kNonbasicUpper, kNonbasicFree, kBasic };

struct SparseCol {
    std::vector<std::pair<int, double>> nz; // (row, coefficient)
};

class SimplexEngine {
public:
    SimplexEngine(const LinearProgram& lp, const SimplexOptions& opts)
        : lp_(lp), opts_(opts) {}

    LPSolution run();

private:
    const LinearProgram& lp_;
    const SimplexOptions& opts_;

    int m_ = 0;        // rows
    int nstruct_ = 0;  // structural variables
    int ntotal_ = 0;   // structural + logical + artificial
    int nreal_ = 0;    // structural + logical

    std::vector<SparseCol> cols_;
    std::vector<double> cost_;   // phase-2 cost, minimize-normalized
    std::vector<double> lo_, hi_;
    std::vector<double> b_;

    std::vector<int> basis_;             // row -> basic variable
    std::vector<unsigned char> vstat_;   // variable -> VarStatus
    std::vector<double> xval_;           // variable -> current value
    std::vector<double> binv_;           // m x m row-major
    std::vector<double> y_;              // incrementally maintained duals
    long iters_ = 0;

    double* binv_row(int r) { return binv_.data() + static_cast<std::size_t>(r) * m_; }

    void build_columns();
    void initial_basis();
    bool price(const std::vector<double>& cost, bool bland, int& q, double& rc) const;
    void compute_duals(const std::vector<double>& cost, std::vector<double>& y) const;
    double reduced_cost(const std::vector<double>& y, int j, const std::vector<double>& cost) const;
    void ftran(int q, std::vector<double>& d) const;
    // Returns SolveStatus::optimal when no improving column remains,
    // SolveStatus::unbounded otherwise.
    SolveStatus iterate(const std::vector<double>& cost, bool pin_leaving_artificials);
    void refresh_basic_values();
    void refactorize();
    bool drive_out_artificials();
    LPSolution extract(SolveStatus status);
};

void SimplexEngine::build_columns() {
    m_ = lp_.num_constraints();
    nstruct_ = lp_.num_vars();
    nreal_ = nstruct_ + m_;
    ntotal_ = nreal_;

    cols_.assign(nreal_, {});
    cost_.assign(nreal_, 0.0);
    lo_.assign(nreal_, 0.0);
    hi_.assign(nreal_, 0.0);
    b_.assign(m_, 0.0);

    double sense = lp_.sense == Sense::minimize ? 1.0 : -1.0;
    for (int j = 0; j < nstruct_; ++j) {
        cost_[j] = sense * lp_.objective()[j];
        lo_[j] = lp_.lower()[j];
        hi_[j] = lp_.upper()[j];
    }
    const auto& cons = lp_.constraints();
    for (int r = 0; r < m_; ++r) {
        b_[r] = cons[r].rhs;
        for (auto [j, v] : cons[r].coeffs) cols_[j].nz.emplace_back(r, v);
        int s = nstruct_ + r;
        cols_[s].nz.emplace_back(r, 1.0);
        switch (cons[r].rel) {
            case Relation::le: lo_[s] = 0.0; hi_[s] = kInf; break;
            case Relation::ge: lo_[s] = -kInf; hi_[s] = 0.0; break;
            case Relation::eq: lo_[s] = 0.0; hi_[s] = 0.0; break;
        }
    }
}

void SimplexEngine::initial_basis() {
    vstat_.assign(ntotal_, kNonbasicLower);
    xval_.assign(ntotal_, 0.0);
    basis_.assign(m_, -1);

    for (int j = 0; j < nstruct_; ++j) {
        if (lo_[j] > -kInf) {
            vstat_[j] = kNonbasicLower;
            xval_[j] = lo_[j];
        } else if (hi_[j] < kInf) {
            vstat_[j] = kNonbasicUpper;
            xval_[j] = hi_[j];
        } else {
            vstat_[j] = kNonbasicFree;
            xval_[j] = 0.0;
        }
    }

    std::vector<double> act(m_, 0.0);
    for (int j = 0; j < nstruct_; ++j) {
        if (xval_[j] == 0.0) continue;
        for (auto [r, v] : cols_[j].nz) act[r] += v * xval_[j];
    }

    std::vector<double> diag(m_, 1.0);
    for (int r = 0; r < m_; ++r) {
        int s = nstruct_ + r;
        double need = b_[r] - act[r];
        if (need >= lo_[s] && need <= hi_[s]) {
            basis_[r] = s;
            vstat_[s] = kBasic;
            xval_[s] = need;
        } else {
            // Park the logical at the bound nearest the residual and cover
            // the rest with an artificial of matching sign.
            double parked = (need < lo_[s]) ? lo_[s] : hi_[s];
            vstat_[s] = (parked == lo_[s]) ? kNonbasicLower : kNonbasicUpper;
            xval_[s] = parked;
            double rem = need - parked;
            int a = ntotal_++;
            cols_.push_back({});
            cols_[a].nz.emplace_back(r, rem >= 0.0 ? 1.0 : -1.0);
            cost_.push_back(0.0);
            lo_.push_back(0.0);
            hi_.push_back(kInf);
            vstat_.push_back(kBasic);
            xval_.push_back(std::abs(rem));
            basis_[r] = a;
            diag[r] = rem >= 0.0 ? 1.0 : -1.0;
        }
    }

    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) binv_row(r)[r] = diag[r];
}

void SimplexEngine::compute_duals(const std::vector<double>& cost, std::vector<double>& y) const {
    y.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
        double cb = cost[basis_[r]];
        if (cb == 0.0) continue;
        const double* row = binv_.data() + static_cast<std::size_t>(r) * m_;
        for (int c = 0; c < m_; ++c) y[c] += cb * row[c];
    }
}

double SimplexEngine::reduced_cost(const std::vector<double>& y, int j,
                                   const std::vector<double>& cost) const {
    double rc = cost[j];
    for (auto [r, v] : cols_[j].nz) rc -= y[r] * v;
    return rc;
}

bool SimplexEngine::price(const std::vector<double>& cost, bool bland, int& q,
                          double& rc_out) const {
    q = -1;
    double best = opts_.optimality_tol;
    for (int j = 0; j < ntotal_; ++j) {
        unsigned char st = vstat_[j];
        if (st == kBasic) continue;
        if (lo_[j] == hi_[j]) continue; // fixed
        double rc = reduced_cost(y_, j, cost);
        double viol = 0.0;
        if (st == kNonbasicLower)
            viol = -rc;
        else if (st == kNonbasicUpper)
            viol = rc;
        else
            viol = std::abs(rc);
        if (viol > best) {
            q = j;
            rc_out = rc;
            if (bland) return true;
            best = viol;
        }
    }
    return q >= 0;
}

void SimplexEngine::ftran(int q, std::vector<double>& d) const {
    d.assign(m_, 0.0);
    for (auto [r, v] : cols_[q].nz) {
        const double* col_base = binv_.data() + r;
        for (int i = 0; i < m_; ++i) d[i] += v * col_base[static_cast<std::size_t>(i) * m_];
    }
}

SolveStatus SimplexEngine::iterate(const std::vector<double>& cost, bool pin_leaving_artificials) {
    std::vector<double> d;
    compute_duals(cost, y_);
    long since_refresh = 0;
    for (;;) {
        if (iters_ > opts_.max_iterations)
            throw NumericalFailure("simplex iteration limit exceeded");
        bool bland = iters_ > opts_.dantzig_pivot_cap;
        int q = -1;
        double rc = 0.0;
        if (since_refresh > 256) {
            compute_duals(cost, y_);
            since_refresh = 0;
        }
        if (!price(cost, bland, q, rc)) {
            // The duals are maintained incrementally; re-derive them exactly
            // before accepting optimality.
            if (since_refresh == 0) return SolveStatus::optimal;
            compute_duals(cost, y_);
            since_refresh = 0;
            if (!price(cost, bland, q, rc)) return SolveStatus::optimal;
        }
        ++iters_;
        ++since_refresh;

        double t = 1.0; // direction of motion for x_q
        if (vstat_[q] == kNonbasicUpper || (vstat_[q] == kNonbasicFree && rc > 0.0)) t = -1.0;

        ftran(q, d);

        double theta = kInf;
        int leave_row = -1;
        double own_span = hi_[q] - lo_[q]; // inf when a bound is infinite
        for (int i = 0; i < m_; ++i) {
            double delta = t * d[i];
            int bi = basis_[i];
            double step;
            if (delta > opts_.pivot_tol) {
                if (lo_[bi] == -kInf) continue;
                step = (xval_[bi] - lo_[bi]) / delta;
            } else if (delta < -opts_.pivot_tol) {
                if (hi_[bi] == kInf) continue;
                step = (hi_[bi] - xval_[bi]) / (-delta);
            } else {
                continue;
            }
            if (step < -1e-12) step = 0.0;
            if (step < theta - 1e-12 ||
                (step < theta + 1e-12 && (leave_row < 0 || bi < basis_[leave_row]))) {
                theta = std::max(step, 0.0);
                leave_row = i;
            }
        }

        if (own_span <= theta && own_span < kInf) {
            // Bound flip: the entering variable crosses to its other bound
            // before any basic variable blocks.
            for (int i = 0; i < m_; ++i)
                if (d[i] != 0.0) xval_[basis_[i]] -= own_span * t * d[i];
            xval_[q] = (t > 0.0) ? hi_[q] : lo_[q];
            vstat_[q] = (t > 0.0) ? kNonbasicUpper : kNonbasicLower;
            continue;
        }
        if (leave_row < 0) return SolveStatus::unbounded;

        int leave = basis_[leave_row];
        double delta_leave = t * d[leave_row];
        for (int i = 0; i < m_; ++i)
            if (d[i] != 0.0) xval_[basis_[i]] -= theta * t * d[i];
        if (vstat_[q] == kNonbasicLower)
            xval_[q] = lo_[q] + theta;
        else if (vstat_[q] == kNonbasicUpper)
            xval_[q] = hi_[q] - theta;
        else
            xval_[q] = t * theta;
        if (delta_leave > 0.0) {
            vstat_[leave] = kNonbasicLower;
            xval_[leave] = lo_[leave];
        } else {
            vstat_[leave] = kNonbasicUpper;
            xval_[leave] = hi_[leave];
        }
        if (pin_leaving_artificials && leave >= nreal_) {
            lo_[leave] = hi_[leave] = 0.0;
            xval_[leave] = 0.0;
        }
        vstat_[q] = kBasic;
        basis_[leave_row] = q;

        // Elementary row update of the inverse.
        double piv = d[leave_row];
        double* prow = binv_row(leave_row);
        double inv_piv = 1.0 / piv;
        for (int c = 0; c < m_; ++c) prow[c] *= inv_piv;
        for (int i = 0; i < m_; ++i) {
            if (i == leave_row) continue;
            double f = d[i];
            if (f == 0.0) continue;
            double* row = binv_row(i);
            for (int c = 0; c < m_; ++c) row[c] -= f * prow[c];
        }
        // Dual update: y' = y + rc_q * (updated pivot row of the inverse).
        for (int c = 0; c < m_; ++c) y_[c] += rc * prow[c];
    }
}

void SimplexEngine::refresh_basic_values() {
    std::vector<double> r(b_);
    for (int j = 0; j < ntotal_; ++j) {
        if (vstat_[j] == kBasic || xval_[j] == 0.0) continue;
        for (auto [row, v] : cols_[j].nz) r[row] -= v * xval_[j];
    }
    for (int i = 0; i < m_; ++i) {
        const double* row = binv_row(i);
        double s = 0.0;
        for (int c = 0; c < m_; ++c) s += row[c] * r[c];
        xval_[basis_[i]] = s;
    }
}

void SimplexEngine::refactorize() {
    // Rebuild the inverse from the basis columns by Gauss-Jordan with
    // partial pivoting.
    std::vector<double> bmat(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i)
        for (auto [r, v] : cols_[basis_[i]].nz) bmat[static_cast<std::size_t>(r) * m_ + i] = v;
    std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) inv[static_cast<std::size_t>(i) * m_ + i] = 1.0;

    for (int c = 0; c < m_; ++c) {
        int piv_row = c;
        double best = std::abs(bmat[static_cast<std::size_t>(c) * m_ + c]);
        for (int i = c + 1; i < m_; ++i) {
            double v = std::abs(bmat[static_cast<std::size_t>(i) * m_ + c]);
            if (v > best) {
                best = v;
                piv_row = i;
            }
        }
        if (best < 1e-14) throw NumericalFailure("singular basis during refactorization");
        if (piv_row != c) {
            for (int j = 0; j < m_; ++j) {
                std::swap(bmat[static_cast<std::size_t>(piv_row) * m_ + j],
                          bmat[static_cast<std::size_t>(c) * m_ + j]);
                std::swap(inv[static_cast<std::size_t>(piv_row) * m_ + j],
                          inv[static_cast<std::size_t>(c) * m_ + j]);
            }
        }
        double ip = 1.0 / bmat[static_cast<std::size_t>(c) * m_ + c];
        for (int j = 0; j < m_; ++j) {
            bmat[static_cast<std::size_t>(c) * m_ + j] *= ip;
            inv[static_cast<std::size_t>(c) * m_ + j] *= ip;
        }
        for (int i = 0; i < m_; ++i) {
            if (i == c) continue;
            double f = bmat[static_cast<std::size_t>(i) * m_ + c];
            if (f == 0.0) continue;
            for (int j = 0; j < m_; ++j) {
                bmat[static_cast<std::size_t>(i) * m_ + j] -= f * bmat[static_cast<std::size_t>(c) * m_ + j];
                inv[static_cast<std::size_t>(i) * m_ + j] -= f * inv[static_cast<std::size_t>(c) * m_ + j];
            }
        }
    }
    binv_ = std::move(inv);
}

bool SimplexEngine::drive_out_artificials() {
    bool any_left = false;
    std::vector<double> d;
    for (int r = 0; r < m_; ++r) {
        if (basis_[r] < nreal_) continue;
        // Degenerate swap: replace the artificial with any admissible real
        // column whose tableau entry in this row is usable as a pivot.
        int chosen = -1;
        const double* brow = binv_row(r);
        for (int j = 0; j < nreal_ && chosen < 0; ++j) {
            if (vstat_[j] == kBasic || lo_[j] == hi_[j]) continue;
            double piv = 0.0;
            for (auto [row, v] : cols_[j].nz) piv += brow[row] * v;
            if (std::abs(piv) > 1e-7) chosen = j;
        }
        if (chosen < 0) {
            // Redundant row: pin the artificial at zero and leave it basic.
            lo_[basis_[r]] = hi_[basis_[r]] = 0.0;
            xval_[basis_[r]] = 0.0;
            any_left = true;
            continue;
        }
        int art = basis_[r];
        vstat_[art] = kNonbasicLower;
        xval_[art] = 0.0;
        lo_[art] = hi_[art] = 0.0;
        ftran(chosen, d);
        double piv = d[r];
        basis_[r] = chosen;
        vstat_[chosen] = kBasic; // theta = 0 swap: values are restored below
        double* prow = binv_row(r);
        double inv_piv = 1.0 / piv;
        for (int c = 0; c < m_; ++c) prow[c] *= inv_piv;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            double f = d[i];
            if (f == 0.0) continue;
            double* row = binv_row(i);
            for (int c = 0; c < m_; ++c) row[c] -= f * prow[c];
        }
        refresh_basic_values();
    }
    return any_left;
}

LPSolution SimplexEngine::extract(SolveStatus status) {
    LPSolution sol;
    sol.status = status;
    sol.iterations = iters_;
    if (status != SolveStatus::optimal) return sol;

    refresh_basic_values();
    sol.x.assign(xval_.begin(), xval_.begin() + nstruct_);
    sol.objective_value = lp_.objective_value(sol.x);

    std::vector<double> y;
    compute_duals(cost_, y);
    double sense = lp_.sense == Sense::minimize ? 1.0 : -1.0;
    sol.duals.resize(m_);
    for (int r = 0; r < m_; ++r) sol.duals[r] = sense * y[r];

    sol.vertex_flag = true;
    for (int j = 0; j < ntotal_; ++j)
        if (vstat_[j] == kNonbasicFree) sol.vertex_flag = false;

    sol.primal_residual = feasibility_residual(lp_, sol.x);

    // Complementarity / dual-sign residual over rows and columns.
    double worst = 0.0;
    const auto& cons = lp_.constraints();
    for (int r = 0; r < m_; ++r) {
        double ax = 0.0;
        double scale = 1.0;
        for (auto [j, v] : cons[r].coeffs) {
            ax += v * sol.x[j];
            scale = std::max(scale, std::abs(v));
        }
        if (cons[r].rel != Relation::eq)
            worst = std::max(worst, std::abs(sol.duals[r] * (ax - cons[r].rhs)) / scale);
    }
    for (int j = 0; j < nstruct_; ++j) {
        double rc = reduced_cost(y, j, cost_);
        if (vstat_[j] == kBasic)
            worst = std::max(worst, std::abs(rc)); // drift detector: exact arithmetic gives 0
        else if (vstat_[j] == kNonbasicLower && lo_[j] != hi_[j])
            worst = std::max(worst, std::max(0.0, -rc));
        else if (vstat_[j] == kNonbasicUpper && lo_[j] != hi_[j])
            worst = std::max(worst, std::max(0.0, rc));
        else if (vstat_[j] == kNonbasicFree)
            worst = std::max(worst, std::abs(rc));
    }
    sol.complementarity_residual = worst;
    return sol;
}

LPSolution SimplexEngine::run() {
    lp_.validate();
    build_columns();
    initial_basis();

    bool need_phase1 = ntotal_ > nreal_;
    if (need_phase1) {
        std::vector<double> phase1_cost(ntotal_, 0.0);
        for (int j = nreal_; j < ntotal_; ++j) phase1_cost[j] = 1.0;
        SolveStatus st = iterate(phase1_cost, true);
        if (st == SolveStatus::unbounded)
            throw NumericalFailure("phase 1 reported unbounded");
        refresh_basic_values();
        double infeas = 0.0;
        double bscale = 1.0;
        for (double v : b_) bscale = std::max(bscale, std::abs(v));
        for (int j = nreal_; j < ntotal_; ++j) infeas += std::abs(xval_[j]);
        if (infeas > opts_.feasibility_tol * bscale)
            return extract(SolveStatus::infeasible);
        // From here on artificials are pinned to zero.
        for (int j = nreal_; j < ntotal_; ++j) {
            lo_[j] = hi_[j] = 0.0;
            if (vstat_[j] != kBasic) xval_[j] = 0.0;
        }
        drive_out_artificials();
    }

    if (cost_.size() < static_cast<std::size_t>(ntotal_)) cost_.resize(ntotal_, 0.0);
    SolveStatus st = iterate(cost_, false);
    if (st == SolveStatus::unbounded) return extract(SolveStatus::unbounded);

    LPSolution sol = extract(SolveStatus::optimal);
    if (sol.primal_residual > opts_.feasibility_tol ||
        sol.complementarity_residual > 1e-7) {
        // One repair round: rebuild the inverse exactly, recompute the basic
        // values, and re-optimize from the current basis.
        refactorize();
        refresh_basic_values();
        st = iterate(cost_, false);
        if (st == SolveStatus::unbounded) return extract(SolveStatus::unbounded);
        sol = extract(SolveStatus::optimal);
        if (sol.primal_residual > opts_.feasibility_tol)
            throw NumericalFailure("feasibility residual above tolerance after refinement");
        if (sol.complementarity_residual > 1e-7)
            throw NumericalFailure("complementary slackness residual above tolerance");
    }
    return sol;
}

} // namespace

LPSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
    SimplexEngine engine(lp, opts);
    return engine.run();
}

} // namespace medoidlp
