#include "cubelam/lp.hpp"

#include <vector>

namespace cubelam {

std::optional<VectorQ> solve_exact(const MatrixQ& A, const VectorQ& b) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n) throw std::invalid_argument("solve_exact: shape mismatch");
  MatrixQ m(n, n + 1);
  m << A, b;
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    while (pivot < n && m(pivot, col) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) m.row(pivot).swap(m.row(col));
    const Rational inv = Rational(1) / m(col, col);
    m.row(col) *= inv;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r != col && m(r, col) != 0) {
        const Rational f = m(r, col);
        m.row(r) -= f * m.row(col);
      }
    }
  }
  return VectorQ(m.col(n));
}

std::optional<VectorQ> find_nonnegative_solution(const MatrixQ& A, const VectorQ& b) {
  const Eigen::Index rows = A.rows();
  const Eigen::Index vars = A.cols();
  if (b.size() != rows) throw std::invalid_argument("find_nonnegative_solution: shape mismatch");

  // Tableau over [x | artificials | rhs], rows normalised to b >= 0, plus
  // the phase-one objective row (minimise the sum of artificials).
  const Eigen::Index cols = vars + rows;
  MatrixQ t = MatrixQ::Zero(rows + 1, cols + 1);
  std::vector<Eigen::Index> basis(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Rational s = b(r) < 0 ? Rational(-1) : Rational(1);
    t.block(r, 0, 1, vars) = s * A.row(r);
    t(r, vars + r) = 1;
    t(r, cols) = s * b(r);
    basis[r] = vars + r;
  }
  // reduced costs: c_j - c_B B^-1 a_j with c = 1 on artificials
  for (Eigen::Index r = 0; r < rows; ++r) t.row(rows) -= t.row(r);
  for (Eigen::Index r = 0; r < rows; ++r) t(rows, vars + r) = 0;

  for (;;) {
    // Bland: smallest index with negative reduced cost enters
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (t(rows, j) < 0) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    Rational best;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (t(r, enter) > 0) {
        const Rational ratio = t(r, cols) / t(r, enter);
        if (leave < 0 || ratio < best || (ratio == best && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
    }
    if (leave < 0) break;  // unbounded direction; cannot happen in phase one
    const Rational inv = Rational(1) / t(leave, enter);
    t.row(leave) *= inv;
    for (Eigen::Index r = 0; r <= rows; ++r) {
      if (r != leave && t(r, enter) != 0) {
        const Rational f = t(r, enter);
        t.row(r) -= f * t.row(leave);
      }
    }
    basis[leave] = enter;
  }

  if (t(rows, cols) != 0) return std::nullopt;  // positive artificial sum
  VectorQ x = VectorQ::Zero(vars);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (basis[r] < vars) x(basis[r]) = t(r, cols);
  }
  if (A * x != b) throw std::logic_error("simplex returned an infeasible point");
  return x;
}

}  // namespace cubelam
