#pragma once

#include <cstddef>
#include <functional>

#include "betheasep/types.hpp"

namespace betheasep::numerics {

/// Dense row-major complex matrix. Plain value type, no view semantics.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  Complex operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  const ComplexVector& entries() const { return entries_; }
  ComplexVector& entries() { return entries_; }

  /// Largest entry magnitude (0 for an empty matrix).
  double max_magnitude() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  ComplexVector entries_;
};

ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x);
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
double inf_norm(const ComplexVector& v);

/// Solves a x = rhs by LU with partial pivoting.
/// Throws SingularMatrix when a pivot falls below 1e-13 times the largest
/// initial entry magnitude.
ComplexVector lu_solve(const ComplexMatrix& a, const ComplexVector& rhs);

/// Rank by Gaussian elimination with full pivoting: pivots with magnitude
/// above tolerance * max initial entry magnitude count.
std::size_t matrix_rank(const ComplexMatrix& a, double tolerance);

struct RankProfile {
  std::size_t rank = 0;
  double smallest_accepted_pivot = 0.0;  // 0 when rank is 0
  double max_entry_magnitude = 0.0;
};

/// Same elimination as matrix_rank but also reports the smallest pivot that
/// still counted toward the rank (the completeness certificate's proxy for
/// the smallest singular value).
RankProfile rank_profile(const ComplexMatrix& a, double tolerance);

struct PolyRootsConfig {
  std::size_t max_iterations = 400;
  double residual_factor = 1e-9;      // accept when |p(z)| <= factor * maxc * (1+|z|)^deg
  double leading_threshold = 1e-13;   // relative floor for the leading coefficient
};

/// All roots (with multiplicity) of a polynomial given by ascending-degree
/// coefficients, via Aberth-Ehrlich simultaneous iteration. Roots come back
/// sorted lexicographically by (re, im).
ComplexVector poly_roots(const ComplexVector& ascending_coefficients,
                         const PolyRootsConfig& config = {});

struct NewtonConfig {
  std::size_t max_iterations = 50;
  double residual_tolerance = 1e-12;
  double step_damping = 1.0;                  // initial step scale in (0, 1]
  double singular_jacobian_threshold = 1e-13; // relative pivot floor for the Jacobian solve
};

/// Evaluates residual and square Jacobian at x. Residual and Jacobian are
/// resized by the callee.
using NewtonSystem =
    std::function<void(const ComplexVector& x, ComplexVector& residual, ComplexMatrix& jacobian)>;

/// Damped Newton: full steps are halved (up to 20 times) until the residual
/// inf-norm decreases. Throws NoConvergence when the iteration budget runs
/// out or a step stalls, SingularJacobian when the Jacobian solve pivots out.
ComplexVector newton_solve(const NewtonSystem& system, ComplexVector start,
                           const NewtonConfig& config = {});

}  // namespace betheasep::numerics
