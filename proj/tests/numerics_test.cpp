#include <doctest.h>

#include <cmath>
#include <numbers>

#include "betheasep/numerics.hpp"
#include "test_util.hpp"

using namespace betheasep;
using namespace betheasep::numerics;

TEST_CASE("lu_solve identity and diagonal") {
  ComplexMatrix id = ComplexMatrix::identity(3);
  ComplexVector rhs = {1.0, 2.0, 3.0};
  ComplexVector x = lu_solve(id, rhs);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(x[i] - rhs[i]) < 1e-14);

  ComplexMatrix d(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 3.0;
  x = lu_solve(d, {2.0, 3.0});
  CHECK(std::abs(x[0] - 1.0) < 1e-14);
  CHECK(std::abs(x[1] - 1.0) < 1e-14);
}

TEST_CASE("lu_solve rejects the zero matrix") {
  ComplexMatrix z(2, 2);
  CHECK_THROWS_AS(lu_solve(z, {1.0, 1.0}), SingularMatrix);
}

TEST_CASE("lu_solve residual on random well-conditioned systems") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = testutil::random_complex(rng);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += double(n);  // diagonal dominance
    const ComplexVector b = testutil::random_vector(rng, n);
    const ComplexVector x = lu_solve(a, b);
    const ComplexVector ax = matvec(a, x);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(ax[i] - b[i]));
    CHECK(res <= 1e-10 * (1.0 + inf_norm(b)));
  }
}

TEST_CASE("matrix_rank pivot counting") {
  CHECK(matrix_rank(ComplexMatrix::identity(4), 1e-9) == 4);

  ComplexMatrix dup(2, 2);
  dup(0, 0) = dup(1, 0) = 1.0;
  dup(0, 1) = dup(1, 1) = 2.0;
  CHECK(matrix_rank(dup, 1e-9) == 1);
}

TEST_CASE("matrix_rank of the N=1, L=3 eigenvector matrix") {
  // plane waves at the three cube roots of unity form a Vandermonde matrix,
  // invertible because the roots are distinct
  ComplexMatrix v(3, 3);
  for (int k = 0; k < 3; ++k) {
    const Complex xi = std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0);
    for (int x = 1; x <= 3; ++x) v(x - 1, k) = std::pow(xi, x);
  }
  CHECK(matrix_rank(v, 1e-9) == 3);
}

TEST_CASE("poly_roots simple cases") {
  ComplexVector roots = poly_roots({-1.0, 0.0, 1.0});  // xi^2 - 1
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0] + 1.0) < 1e-10);
  CHECK(std::abs(roots[1] - 1.0) < 1e-10);

  roots = poly_roots({-1.0, 0.0, 0.0, 0.0, 1.0});  // xi^4 - 1
  REQUIRE(roots.size() == 4);
  for (Complex r : roots) CHECK(std::abs(std::pow(r, 4) - 1.0) < 1e-9);

  // (xi-1)(xi-2)(xi-3) = xi^3 - 6 xi^2 + 11 xi - 6 expanded by hand
  roots = poly_roots({-6.0, 11.0, -6.0, 1.0});
  REQUIRE(roots.size() == 3);
  CHECK(std::abs(roots[0] - 1.0) < 1e-8);
  CHECK(std::abs(roots[1] - 2.0) < 1e-8);
  CHECK(std::abs(roots[2] - 3.0) < 1e-8);
}

TEST_CASE("poly_roots rejects a vanishing leading coefficient") {
  CHECK_THROWS_AS(poly_roots({1.0, 1.0, 0.0}), DegenerateLeadingCoefficient);
}

TEST_CASE("poly_roots reproduces coefficients via symmetric functions") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t deg = 2 + rng() % 29;  // up to 30
    ComplexVector coeffs = testutil::random_vector(rng, deg + 1);
    coeffs[deg] += Complex(2.0, 0.0);  // keep the leading coefficient honest
    const ComplexVector roots = poly_roots(coeffs);

    // rebuild monic coefficients from the roots
    ComplexVector rebuilt = {1.0};
    for (Complex r : roots) {
      ComplexVector next(rebuilt.size() + 1, 0.0);
      for (std::size_t i = 0; i < rebuilt.size(); ++i) {
        next[i + 1] += rebuilt[i];
        next[i] -= r * rebuilt[i];
      }
      rebuilt = std::move(next);
    }
    double scale = 0.0;
    for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));
    for (std::size_t i = 0; i <= deg; ++i) {
      const Complex expected = coeffs[i] / coeffs[deg];
      CHECK(std::abs(rebuilt[i] - expected) <= 1e-7 * (1.0 + std::abs(expected)) * scale);
    }
  }
}

namespace {

// scalar system xi^2 - c
numerics::NewtonSystem quadratic(Complex c) {
  return [c](const ComplexVector& x, ComplexVector& r, ComplexMatrix& j) {
    r = {x[0] * x[0] - c};
    j = ComplexMatrix(1, 1);
    j(0, 0) = 2.0 * x[0];
  };
}

}  // namespace

TEST_CASE("newton_solve scalar quadratic") {
  const ComplexVector x = newton_solve(quadratic(2.0), {1.5}, {});
  CHECK(std::abs(x[0] - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("newton_solve flags a singular Jacobian") {
  CHECK_THROWS_AS(newton_solve(quadratic(2.0), {0.0}, {}), SingularJacobian);
}

TEST_CASE("newton_solve decoupled 2-dim system") {
  const numerics::NewtonSystem sys = [](const ComplexVector& x, ComplexVector& r,
                                        ComplexMatrix& j) {
    r = {x[0] * x[0] - 1.0, x[1] * x[1] - 4.0};
    j = ComplexMatrix(2, 2);
    j(0, 0) = 2.0 * x[0];
    j(1, 1) = 2.0 * x[1];
  };
  const ComplexVector x = newton_solve(sys, {0.9, 1.8}, {});
  CHECK(std::abs(x[0] - 1.0) < 1e-10);
  CHECK(std::abs(x[1] - 2.0) < 1e-10);
}

TEST_CASE("newton_solve result is a fixed point") {
  NewtonConfig config;
  const ComplexVector x = newton_solve(quadratic(Complex(1.3, 0.4)), {1.0}, config);
  // one further step moves the point by at most 10x the residual tolerance
  ComplexVector r;
  ComplexMatrix j;
  quadratic(Complex(1.3, 0.4))(x, r, j);
  const double move = std::abs(r[0] / j(0, 0));
  CHECK(move <= 10.0 * config.residual_tolerance);
}
