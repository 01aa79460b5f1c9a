#pragma once

#include "cubelam/scalar.hpp"

#include <Eigen/Core>

#include <optional>

namespace cubelam {

using MatrixQ = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using VectorQ = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

/// Finds x >= 0 with A x = b, or nullopt if none exists. Exact two-phase
/// simplex (phase one only) with Bland's anti-cycling rule.
std::optional<VectorQ> find_nonnegative_solution(const MatrixQ& A, const VectorQ& b);

/// Unique solution of a square system, nullopt if singular. Exact Gaussian
/// elimination.
std::optional<VectorQ> solve_exact(const MatrixQ& A, const VectorQ& b);

}  // namespace cubelam
