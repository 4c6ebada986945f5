#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cloudrank {

enum class Relation { LessEq, GreaterEq, Equal };

struct LpConstraint {
  std::vector<double> coeffs;
  Relation relation = Relation::LessEq;
  double rhs = 0.0;
};

// Range for one variable; either side may be infinite. The default is the
// standard non-negative orthant.
struct VariableBound {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

// Linear program: minimize objective . x subject to the constraints and the
// variable bounds. An empty bounds list means x >= 0 componentwise.
struct LpProblem {
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;
  std::vector<VariableBound> variable_bounds;
};

struct LpSolution {
  std::vector<double> x;
  double objective_value = 0.0;
};

struct LpInfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LpUnboundedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Dense two-phase simplex over a row-major tableau. Entering columns follow
// Dantzig's rule until that iteration budget runs out, then Bland's rule,
// which cannot cycle.
class SimplexTableau {
 public:
  SimplexTableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cells_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return cells_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return cells_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return cells_[r * (cols_ + 1) + cols_]; }
  double rhs(std::size_t r) const { return cells_[r * (cols_ + 1) + cols_]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t basis(std::size_t r) const { return basis_[r]; }
  void set_basis(std::size_t r, std::size_t col) { basis_[r] = col; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) {
      cells_[pr * (cols_ + 1) + c] /= p;
    }
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) {
        cells_[r * (cols_ + 1) + c] -= f * cells_[pr * (cols_ + 1) + c];
      }
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  // Minimizes cost . x from the current basis. Columns at or beyond
  // first_banned may never enter (artificials during phase 2). Returns the
  // optimal objective value.
  double optimize(const std::vector<double>& cost, std::size_t first_banned) {
    std::vector<double> reduced(cost);
    double objective = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      objective += cb * rhs(r);
      for (std::size_t c = 0; c < cols_; ++c) {
        reduced[c] -= cb * at(r, c);
      }
    }

    const std::size_t dantzig_budget = 32 * (rows_ + cols_) + 256;
    const std::size_t max_iterations = 512 * (rows_ + cols_) + 4096;
    const std::size_t candidates = std::min(first_banned, cols_);
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
      const bool bland = iter >= dantzig_budget;
      std::size_t enter = cols_;
      double best = -kCostTolerance;
      for (std::size_t c = 0; c < candidates; ++c) {
        if (reduced[c] < best) {
          enter = c;
          if (bland) break;
          best = reduced[c];
        }
      }
      if (enter == cols_) {
        return objective;
      }

      std::size_t leave = rows_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTolerance) continue;
        const double ratio = rhs(r) / a;
        if (ratio < best_ratio - kRatioTolerance ||
            (ratio < best_ratio + kRatioTolerance &&
             (leave == rows_ || basis_[r] < basis_[leave]))) {
          best_ratio = ratio;
          leave = r;
        }
      }
      if (leave == rows_) {
        throw LpUnboundedError("solve_lp: objective is unbounded below");
      }

      objective += reduced[enter] * best_ratio;
      const double f = reduced[enter] / at(leave, enter);
      for (std::size_t c = 0; c < cols_; ++c) {
        reduced[c] -= f * at(leave, c);
      }
      pivot(leave, enter);
      reduced[enter] = 0.0;
    }
    throw std::runtime_error("solve_lp: iteration limit exceeded");
  }

  static constexpr double kPivotTolerance = 1e-10;
  static constexpr double kCostTolerance = 1e-10;
  static constexpr double kRatioTolerance = 1e-12;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> cells_;
  std::vector<std::size_t> basis_;
};

// Solves minimize objective . y s.t. constraints, y >= 0.
inline LpSolution solve_standard_form(const std::vector<double>& objective,
                                      const std::vector<LpConstraint>& constraints) {
  const std::size_t n = objective.size();
  const std::size_t m = constraints.size();

  // Normalize rows to non-negative right-hand sides, then assign one slack
  // column per inequality and one artificial column per row that lacks an
  // obvious basic variable.
  std::vector<std::vector<double>> a(m, std::vector<double>(n, 0.0));
  std::vector<double> b(m, 0.0);
  std::vector<Relation> rel(m, Relation::LessEq);
  for (std::size_t i = 0; i < m; ++i) {
    const LpConstraint& c = constraints[i];
    const double sign = c.rhs < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) a[i][j] = sign * c.coeffs[j];
    b[i] = sign * c.rhs;
    rel[i] = c.relation;
    if (sign < 0.0) {
      if (c.relation == Relation::LessEq) rel[i] = Relation::GreaterEq;
      if (c.relation == Relation::GreaterEq) rel[i] = Relation::LessEq;
    }
  }

  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (rel[i] != Relation::Equal) ++n_slack;
    if (rel[i] != Relation::LessEq) ++n_art;
  }
  const std::size_t first_art = n + n_slack;
  const std::size_t total = n + n_slack + n_art;

  SimplexTableau tab(m, total);
  std::size_t slack_col = n;
  std::size_t art_col = first_art;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = a[i][j];
    tab.rhs(i) = b[i];
    switch (rel[i]) {
      case Relation::LessEq:
        tab.at(i, slack_col) = 1.0;
        tab.set_basis(i, slack_col++);
        break;
      case Relation::GreaterEq:
        tab.at(i, slack_col++) = -1.0;
        tab.at(i, art_col) = 1.0;
        tab.set_basis(i, art_col++);
        break;
      case Relation::Equal:
        tab.at(i, art_col) = 1.0;
        tab.set_basis(i, art_col++);
        break;
    }
  }

  if (n_art > 0) {
    std::vector<double> phase1_cost(total, 0.0);
    for (std::size_t c = first_art; c < total; ++c) phase1_cost[c] = 1.0;
    const double infeasibility = tab.optimize(phase1_cost, total);
    if (infeasibility > 1e-7) {
      throw LpInfeasibleError("solve_lp: constraints have no feasible point");
    }
    // Degenerate pivots push leftover artificials out of the basis; a row
    // with no usable column is redundant and stays inert.
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.basis(r) < first_art) continue;
      for (std::size_t c = 0; c < first_art; ++c) {
        if (std::abs(tab.at(r, c)) > SimplexTableau::kPivotTolerance) {
          tab.pivot(r, c);
          break;
        }
      }
    }
  }

  std::vector<double> phase2_cost(total, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = objective[j];
  const double value = tab.optimize(phase2_cost, first_art);

  LpSolution solution;
  solution.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis(r) < n) solution.x[tab.basis(r)] = tab.rhs(r);
  }
  solution.objective_value = value;
  return solution;
}

}  // namespace detail

// Solves the given program. General bounds are reduced to the non-negative
// orthant first: a finite lower bound shifts the variable, an upper-only
// bound mirrors it, a doubly infinite one splits into a positive and a
// negative part, and a finite upper bound after shifting adds a row.
inline LpSolution solve_lp(const LpProblem& problem) {
  const std::size_t n = problem.objective.size();
  if (n == 0) {
    throw std::invalid_argument("solve_lp: no variables");
  }
  if (!problem.variable_bounds.empty() && problem.variable_bounds.size() != n) {
    throw std::invalid_argument("solve_lp: bounds list does not match variable count");
  }
  for (const LpConstraint& c : problem.constraints) {
    if (c.coeffs.size() != n) {
      throw std::invalid_argument("solve_lp: constraint width does not match variable count");
    }
    if (!std::isfinite(c.rhs)) {
      throw std::invalid_argument("solve_lp: non-finite right-hand side");
    }
    for (double v : c.coeffs) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("solve_lp: non-finite coefficient");
      }
    }
  }
  for (double v : problem.objective) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("solve_lp: non-finite objective coefficient");
    }
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const bool default_bounds = problem.variable_bounds.empty();

  // Column plan per original variable: y-column(s), orientation and offset,
  // so that x_j = offset + sign * y[col] (or y[pos] - y[neg] when split).
  struct ColumnPlan {
    std::size_t col = 0;
    std::size_t neg_col = 0;
    double offset = 0.0;
    double sign = 1.0;
    bool split = false;
  };
  std::vector<ColumnPlan> plan(n);
  std::vector<std::pair<std::size_t, double>> upper_rows;  // (variable, cap on its y)
  std::size_t cols = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const VariableBound bound = default_bounds ? VariableBound{} : problem.variable_bounds[j];
    if (std::isnan(bound.lower) || std::isnan(bound.upper) || bound.lower > bound.upper ||
        bound.lower == kInf || bound.upper == -kInf) {
      throw std::invalid_argument("solve_lp: malformed variable bound");
    }
    ColumnPlan& p = plan[j];
    if (bound.lower == -kInf && bound.upper == kInf) {
      p.split = true;
      p.col = cols++;
      p.neg_col = cols++;
    } else if (bound.lower != -kInf) {
      p.col = cols++;
      p.offset = bound.lower;
      p.sign = 1.0;
      if (bound.upper != kInf) {
        upper_rows.emplace_back(j, bound.upper - bound.lower);
      }
    } else {
      p.col = cols++;
      p.offset = bound.upper;
      p.sign = -1.0;
    }
  }

  std::vector<double> objective(cols, 0.0);
  double constant = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const ColumnPlan& p = plan[j];
    if (p.split) {
      objective[p.col] += problem.objective[j];
      objective[p.neg_col] -= problem.objective[j];
    } else {
      objective[p.col] += p.sign * problem.objective[j];
      constant += problem.objective[j] * p.offset;
    }
  }

  std::vector<LpConstraint> constraints;
  constraints.reserve(problem.constraints.size() + upper_rows.size());
  for (const LpConstraint& c : problem.constraints) {
    LpConstraint out;
    out.relation = c.relation;
    out.rhs = c.rhs;
    out.coeffs.assign(cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const ColumnPlan& p = plan[j];
      if (p.split) {
        out.coeffs[p.col] += c.coeffs[j];
        out.coeffs[p.neg_col] -= c.coeffs[j];
      } else {
        out.coeffs[p.col] += p.sign * c.coeffs[j];
        out.rhs -= c.coeffs[j] * p.offset;
      }
    }
    constraints.push_back(std::move(out));
  }
  for (const auto& [j, cap] : upper_rows) {
    LpConstraint out;
    out.coeffs.assign(cols, 0.0);
    out.coeffs[plan[j].col] = 1.0;
    out.relation = Relation::LessEq;
    out.rhs = cap;
    constraints.push_back(std::move(out));
  }

  LpSolution inner = detail::solve_standard_form(objective, constraints);

  LpSolution solution;
  solution.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const ColumnPlan& p = plan[j];
    solution.x[j] = p.split ? inner.x[p.col] - inner.x[p.neg_col]
                            : p.offset + p.sign * inner.x[p.col];
  }
  solution.objective_value = inner.objective_value + constant;
  return solution;
}

}  // namespace cloudrank
