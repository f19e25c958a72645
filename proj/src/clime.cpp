#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scoreinf/error.hpp"
#include "scoreinf/solvers.hpp"

namespace scoreinf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostTol = 1e-11;
constexpr double kPivotTol = 1e-11;
constexpr int kRefactorEvery = 64;

// Bounded-variable primal simplex for one row of the program
//   min 1^T (m+ + m-)  s.t.  A m+ - A m- + r = e_j,  m+-, >= 0,  |r_i| <= lambda.
// Column layout: m+ (0..s-1), m- (s..2s-1), r (2s..3s-1), artificial (3s).
class RowSimplex {
 public:
  RowSimplex(const Matrix& A, double lambda, Index j)
      : A_(A), s_(A.rows()), lambda_(lambda), j_(j), nvar_(3 * s_ + 1) {
    lower_.assign(static_cast<size_t>(nvar_), 0.0);
    upper_.assign(static_cast<size_t>(nvar_), kInf);
    for (Index i = 0; i < s_; ++i) {
      lower_[static_cast<size_t>(2 * s_ + i)] = -lambda_;
      upper_[static_cast<size_t>(2 * s_ + i)] = lambda_;
    }
    x_.assign(static_cast<size_t>(nvar_), 0.0);
    basic_pos_.assign(static_cast<size_t>(nvar_), -1);
    basis_.resize(static_cast<size_t>(s_));
    for (Index i = 0; i < s_; ++i) {
      const Index var = i == j_ ? artificial() : 2 * s_ + i;
      basis_[static_cast<size_t>(i)] = var;
      basic_pos_[static_cast<size_t>(var)] = i;
    }
    // r_j rests at its upper bound; the artificial absorbs 1 - lambda.
    x_[static_cast<size_t>(2 * s_ + j_)] = lambda_;
    binv_ = Matrix::Identity(s_, s_);
    recompute_basic_values();
  }

  void solve() {
    cost_.assign(static_cast<size_t>(nvar_), 0.0);
    cost_[static_cast<size_t>(artificial())] = 1.0;
    run();
    if (x_[static_cast<size_t>(artificial())] > 1e-9)
      throw InfeasibleError("constraint level " + std::to_string(lambda_) +
                            " is infeasible for row " + std::to_string(j_));
    upper_[static_cast<size_t>(artificial())] = 0.0;
    x_[static_cast<size_t>(artificial())] = 0.0;
    cost_.assign(static_cast<size_t>(nvar_), 0.0);
    for (Index k = 0; k < 2 * s_; ++k) cost_[static_cast<size_t>(k)] = 1.0;
    run();
    polish();
  }

  Vector m() const {
    Vector out(s_);
    for (Index k = 0; k < s_; ++k)
      out[k] = x_[static_cast<size_t>(k)] - x_[static_cast<size_t>(s_ + k)];
    return out;
  }

  // Simplex multipliers of the equality rows.
  Vector duals() const {
    Matrix B = basis_matrix();
    Vector cb(s_);
    for (Index i = 0; i < s_; ++i) cb[i] = cost_[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
    return B.transpose().partialPivLu().solve(cb);
  }

  int iterations() const { return iterations_; }

 private:
  Index artificial() const { return 3 * s_; }

  Vector column(Index var) const {
    if (var < s_) return A_.col(var);
    if (var < 2 * s_) return -A_.col(var - s_);
    Vector e = Vector::Zero(s_);
    e[var < 3 * s_ ? var - 2 * s_ : j_] = 1.0;
    return e;
  }

  Matrix basis_matrix() const {
    Matrix B(s_, s_);
    for (Index i = 0; i < s_; ++i) B.col(i) = column(basis_[static_cast<size_t>(i)]);
    return B;
  }

  Vector nonbasic_rhs() const {
    Vector rhs = Vector::Zero(s_);
    rhs[j_] = 1.0;
    for (Index v = 0; v < nvar_; ++v) {
      if (basic_pos_[static_cast<size_t>(v)] >= 0) continue;
      const double xv = x_[static_cast<size_t>(v)];
      if (xv != 0.0) rhs -= column(v) * xv;
    }
    return rhs;
  }

  void recompute_basic_values() {
    const Vector xb = binv_ * nonbasic_rhs();
    for (Index i = 0; i < s_; ++i) x_[static_cast<size_t>(basis_[static_cast<size_t>(i)])] = xb[i];
  }

  void refactor() {
    binv_ = basis_matrix().partialPivLu().inverse();
    recompute_basic_values();
  }

  void polish() {
    const Vector xb = basis_matrix().partialPivLu().solve(nonbasic_rhs());
    for (Index i = 0; i < s_; ++i) {
      const auto var = static_cast<size_t>(basis_[static_cast<size_t>(i)]);
      x_[var] = std::clamp(xb[i], lower_[var], upper_[var]);
    }
  }

  void run() {
    const int max_iter = 200 * static_cast<int>(nvar_) + 1000;
    int degenerate = 0;
    int since_refactor = 0;
    for (int guard = 0; guard < max_iter; ++guard) {
      Vector cb(s_);
      for (Index i = 0; i < s_; ++i)
        cb[i] = cost_[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
      const Vector y = binv_.transpose() * cb;
      const Vector ay = A_ * y;
      const bool bland = degenerate > 30;

      // Pricing.
      Index enter = -1;
      double best = 0.0;
      double enter_dir = 0.0;
      for (Index v = 0; v < nvar_; ++v) {
        const auto vs = static_cast<size_t>(v);
        if (basic_pos_[vs] >= 0) continue;
        if (upper_[vs] - lower_[vs] <= 0.0) continue;
        double d;
        if (v < s_) d = cost_[vs] - ay[v];
        else if (v < 2 * s_) d = cost_[vs] + ay[v - s_];
        else if (v < 3 * s_) d = cost_[vs] - y[v - 2 * s_];
        else d = cost_[vs] - y[j_];
        const bool at_upper = x_[vs] >= upper_[vs];
        double score = 0.0;
        double dir = 0.0;
        if (!at_upper && d < -kCostTol) { score = -d; dir = 1.0; }
        if (at_upper && d > kCostTol) { score = d; dir = -1.0; }
        if (dir == 0.0) continue;
        if (bland) { enter = v; enter_dir = dir; break; }
        if (score > best) { best = score; enter = v; enter_dir = dir; }
      }
      if (enter < 0) return;
      ++iterations_;

      const Vector alpha = binv_ * column(enter);
      // Ratio test: basic x_B changes by -dir * t * alpha.
      const auto es = static_cast<size_t>(enter);
      double t_max = upper_[es] - lower_[es];
      Index leave = -1;
      double leave_bound = 0.0;
      double leave_pivot = 0.0;
      for (Index i = 0; i < s_; ++i) {
        const double rate = enter_dir * alpha[i];
        if (std::abs(alpha[i]) <= kPivotTol) continue;
        const auto var = static_cast<size_t>(basis_[static_cast<size_t>(i)]);
        double limit;
        double bound;
        if (rate > 0.0) {
          if (lower_[var] == -kInf) continue;
          limit = (x_[var] - lower_[var]) / rate;
          bound = lower_[var];
        } else {
          if (upper_[var] == kInf) continue;
          limit = (upper_[var] - x_[var]) / -rate;
          bound = upper_[var];
        }
        limit = std::max(limit, 0.0);
        bool take = false;
        if (limit < t_max - 1e-12) {
          take = true;
        } else if (limit <= t_max + 1e-12 && leave >= 0) {
          take = bland ? basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leave)]
                       : std::abs(alpha[i]) > std::abs(leave_pivot);
        }
        if (take) {
          t_max = std::min(t_max, limit);
          leave = i;
          leave_bound = bound;
          leave_pivot = alpha[i];
        }
      }
      if (t_max == kInf) throw NumericalError("row program is unbounded");
      degenerate = t_max <= 1e-12 ? degenerate + 1 : 0;

      for (Index i = 0; i < s_; ++i)
        x_[static_cast<size_t>(basis_[static_cast<size_t>(i)])] -= enter_dir * t_max * alpha[i];
      x_[es] += enter_dir * t_max;

      if (leave < 0) continue;  // bound flip of the entering variable

      const auto out_var = static_cast<size_t>(basis_[static_cast<size_t>(leave)]);
      x_[out_var] = leave_bound;
      basic_pos_[out_var] = -1;
      basis_[static_cast<size_t>(leave)] = enter;
      basic_pos_[es] = leave;

      const Eigen::RowVectorXd pivot_row = binv_.row(leave) / alpha[leave];
      for (Index i = 0; i < s_; ++i) {
        if (i == leave) continue;
        if (alpha[i] != 0.0) binv_.row(i) -= alpha[i] * pivot_row;
      }
      binv_.row(leave) = pivot_row;

      if (++since_refactor >= kRefactorEvery) {
        refactor();
        since_refactor = 0;
      }
    }
    throw NumericalError("simplex iteration limit reached for row " + std::to_string(j_));
  }

  const Matrix& A_;
  Index s_;
  double lambda_;
  Index j_;
  Index nvar_;
  std::vector<double> lower_, upper_, x_, cost_;
  std::vector<Index> basic_pos_;
  std::vector<Index> basis_;
  Matrix binv_;
  int iterations_ = 0;
};

}  // namespace

ClimeResult clime_rows(const Matrix& A, double lambda, const IndexSet& rows) {
  const Index s = A.rows();
  if (A.cols() != s) throw DimensionMismatchError("clime_rows needs a square matrix");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw InputError("constraint level must be a finite non-negative number");
  ClimeResult out;
  out.M = Matrix::Zero(static_cast<Index>(rows.size()), s);
  out.info.resize(rows.size());

  for (size_t k = 0; k < rows.size(); ++k) {
    const Index j = rows[k];
    if (j < 0 || j >= s) throw InputError("row index out of range");
    ClimeRowInfo& info = out.info[k];
    info.row = j;
    if (lambda >= 1.0) continue;  // m = 0 is feasible and optimal

    RowSimplex lp(A, lambda, j);
    lp.solve();
    const Vector m = lp.m();
    Vector y = lp.duals();

    Vector resid = -A * m;
    resid[j] += 1.0;
    info.l1_norm = m.lpNorm<1>();
    info.constraint_violation = std::max(0.0, resid.lpNorm<Eigen::Infinity>() - lambda);
    const double ay = (A * y).lpNorm<Eigen::Infinity>();
    info.dual_infeasibility = std::max(0.0, ay - 1.0);
    if (ay > 1.0) y /= ay;
    const double dual_value = y[j] - lambda * y.lpNorm<1>();
    info.dual_gap = info.l1_norm - dual_value;
    info.iterations = lp.iterations();

    const double scale = std::max(1.0, info.l1_norm);
    if (info.constraint_violation > 1e-8 || info.dual_gap > 1e-8 * scale)
      throw NumericalError("row " + std::to_string(j) + " failed its optimality certificate (gap " +
                           std::to_string(info.dual_gap) + ", violation " +
                           std::to_string(info.constraint_violation) + ")");
    out.M.row(static_cast<Index>(k)) = m.transpose();
  }
  return out;
}

}  // namespace scoreinf
