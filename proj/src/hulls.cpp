#include "cubelam/hulls.hpp"

namespace cubelam {

std::string to_string(SquareCase c) {
  switch (c) {
    case SquareCase::DegeneratePlane:
      return "degenerate-plane";
    case SquareCase::CoplanarTriangles:
      return "coplanar-triangles";
    case SquareCase::SameSign:
      return "same-sign";
    case SquareCase::OppositeSign:
      return "opposite-sign";
  }
  return "unknown";
}

std::optional<std::vector<Rational>> pc_membership(const std::vector<Mat2q>& K, const Mat2q& X) {
  if (K.empty()) return std::nullopt;
  if (K.size() > 16) throw InputError("pc_membership supports at most 16 points");
  const auto n = static_cast<Eigen::Index>(K.size());
  MatrixQ A(6, n);
  VectorQ b(6);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Mat2q& k = K[j];
    A(0, j) = 1;
    A(1, j) = k(0, 0);
    A(2, j) = k(0, 1);
    A(3, j) = k(1, 0);
    A(4, j) = k(1, 1);
    A(5, j) = det(k);
  }
  b << 1, X(0, 0), X(0, 1), X(1, 0), X(1, 1), det(X);
  const auto sol = find_nonnegative_solution(A, b);
  if (!sol) return std::nullopt;
  return std::vector<Rational>(sol->data(), sol->data() + sol->size());
}

}  // namespace cubelam
