#include "betheasep/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace betheasep::numerics {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double ComplexMatrix::max_magnitude() const {
  double m = 0.0;
  for (Complex z : entries_) m = std::max(m, std::abs(z));
  return m;
}

ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matvec: size mismatch");
  ComplexVector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("multiply: size mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      Complex aik = a(i, k);
      if (aik == Complex(0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double inf_norm(const ComplexVector& v) {
  double m = 0.0;
  for (Complex z : v) m = std::max(m, std::abs(z));
  return m;
}

namespace {

// Shared LU solve with an explicit relative pivot floor; maps pivot failure
// to the exception built by on_singular.
template <typename MakeError>
ComplexVector lu_solve_impl(ComplexMatrix a, ComplexVector b, double pivot_floor_rel,
                            MakeError&& on_singular) {
  if (!a.square()) throw InvalidDimensions("lu_solve: matrix must be square");
  const std::size_t n = a.rows();
  if (b.size() != n) throw DimensionMismatch("lu_solve: rhs length mismatch");
  const double floor = pivot_floor_rel * a.max_magnitude();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      double m = std::abs(a(i, k));
      if (m > best) { best = m; piv = i; }
    }
    if (best <= floor) throw on_singular();
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    const Complex inv = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = a(i, k) * inv;
      if (f == Complex(0.0)) continue;
      a(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  ComplexVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Complex acc = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= a(ii, j) * x[j];
    x[ii] = acc / a(ii, ii);
  }
  return x;
}

}  // namespace

ComplexVector lu_solve(const ComplexMatrix& a, const ComplexVector& rhs) {
  return lu_solve_impl(a, rhs, 1e-13,
                       [] { return SingularMatrix("lu_solve: pivot below threshold"); });
}

RankProfile rank_profile(const ComplexMatrix& a, double tolerance) {
  if (tolerance <= 0.0) throw InvalidDimensions("rank: tolerance must be positive");
  ComplexMatrix m = a;
  const std::size_t rows = m.rows(), cols = m.cols();
  RankProfile out;
  out.max_entry_magnitude = m.max_magnitude();
  const double floor = tolerance * out.max_entry_magnitude;
  double smallest = 0.0;
  std::size_t r = 0;
  const std::size_t steps = std::min(rows, cols);
  for (std::size_t k = 0; k < steps; ++k) {
    // full pivot over the remaining submatrix
    std::size_t pi = k, pj = k;
    double best = 0.0;
    for (std::size_t i = k; i < rows; ++i)
      for (std::size_t j = k; j < cols; ++j) {
        double mag = std::abs(m(i, j));
        if (mag > best) { best = mag; pi = i; pj = j; }
      }
    if (best <= floor) break;
    if (pi != k)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(k, j), m(pi, j));
    if (pj != k)
      for (std::size_t i = 0; i < rows; ++i) std::swap(m(i, k), m(i, pj));
    smallest = (r == 0) ? best : std::min(smallest, best);
    ++r;
    const Complex inv = 1.0 / m(k, k);
    for (std::size_t i = k + 1; i < rows; ++i) {
      const Complex f = m(i, k) * inv;
      if (f == Complex(0.0)) continue;
      for (std::size_t j = k; j < cols; ++j) m(i, j) -= f * m(k, j);
    }
  }
  out.rank = r;
  out.smallest_accepted_pivot = smallest;
  return out;
}

std::size_t matrix_rank(const ComplexMatrix& a, double tolerance) {
  return rank_profile(a, tolerance).rank;
}

namespace {

Complex poly_eval(const ComplexVector& c, Complex z) {
  Complex acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

Complex poly_eval_deriv(const ComplexVector& c, Complex z) {
  Complex acc = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) acc = acc * z + double(i) * c[i];
  return acc;
}

}  // namespace

ComplexVector poly_roots(const ComplexVector& coeffs, const PolyRootsConfig& config) {
  double maxc = 0.0;
  for (Complex c : coeffs) maxc = std::max(maxc, std::abs(c));
  if (coeffs.size() < 2 || maxc == 0.0)
    throw InvalidDimensions("poly_roots: degree must be at least 1");
  const std::size_t deg = coeffs.size() - 1;
  if (std::abs(coeffs[deg]) <= config.leading_threshold * maxc)
    throw DegenerateLeadingCoefficient("poly_roots: leading coefficient vanishes");

  if (deg == 1) return {-coeffs[0] / coeffs[1]};

  // Initial guesses: circle of radius |a0/ad|^{1/deg}, rotated off the real
  // axis to break symmetric stalls.
  const double radius = std::pow(std::abs(coeffs[0] / coeffs[deg]), 1.0 / double(deg));
  ComplexVector z(deg);
  for (std::size_t k = 0; k < deg; ++k) {
    double angle = 2.0 * std::numbers::pi * double(k) / double(deg) + 0.4;
    z[k] = std::polar(std::max(radius, 1e-30), angle);
  }

  // Iterate each root until its residual falls to evaluation-noise level or
  // the step stagnates; the stated acceptance bound alone is far too loose
  // at high degree to keep symmetric functions of the roots accurate.
  const auto eval_scale = [&](Complex at) {
    double e = 0.0, zpow = 1.0;
    const double za = std::abs(at);
    for (const Complex& c : coeffs) {
      e += std::abs(c) * zpow;
      zpow *= za;
    }
    return e;
  };

  std::vector<bool> done(deg, false);
  bool converged = false;
  for (std::size_t iter = 0; iter < config.max_iterations && !converged; ++iter) {
    converged = true;
    for (std::size_t i = 0; i < deg; ++i) {
      if (done[i]) continue;
      const Complex pv = poly_eval(coeffs, z[i]);
      if (std::abs(pv) <= 1e-13 * eval_scale(z[i])) { done[i] = true; continue; }
      converged = false;
      Complex dv = poly_eval_deriv(coeffs, z[i]);
      if (dv == Complex(0.0)) {  // sit exactly on a critical point: nudge
        z[i] += Complex(1e-8, 1e-8) * (1.0 + std::abs(z[i]));
        continue;
      }
      const Complex w = pv / dv;
      Complex s = 0.0;
      for (std::size_t j = 0; j < deg; ++j)
        if (j != i) s += 1.0 / (z[i] - z[j]);
      const Complex denom = 1.0 - w * s;
      const Complex step = (std::abs(denom) < 1e-14) ? w : w / denom;
      z[i] -= step;
      if (std::abs(step) <= 1e-14 * (1.0 + std::abs(z[i]))) done[i] = true;
    }
  }
  for (Complex r : z) {
    const double bound =
        config.residual_factor * maxc * std::pow(1.0 + std::abs(r), double(deg));
    if (!(std::abs(poly_eval(coeffs, r)) <= bound))
      throw NoConvergence("poly_roots: a root misses the residual bound");
  }
  std::sort(z.begin(), z.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return z;
}

ComplexVector newton_solve(const NewtonSystem& system, ComplexVector start,
                           const NewtonConfig& config) {
  if (config.max_iterations < 1 || config.residual_tolerance <= 0.0)
    throw InvalidDimensions("newton_solve: bad config");
  if (!is_finite(start)) throw InvalidDimensions("newton_solve: start not finite");

  ComplexVector x = std::move(start);
  ComplexVector r;
  ComplexMatrix jac;
  system(x, r, jac);
  double rn = inf_norm(r);

  for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
    if (rn <= config.residual_tolerance) return x;
    ComplexVector neg(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) neg[i] = -r[i];
    ComplexVector delta;
    try {
      delta = lu_solve_impl(jac, neg, config.singular_jacobian_threshold, [] {
        return SingularJacobian("newton_solve: Jacobian pivot below threshold");
      });
    } catch (const InvalidDimensions&) {
      throw;
    }

    // near-singular Jacobians produce steps so long that every damping
    // level overshoots; cap the length at a multiple of the current point
    const double step_len = inf_norm(delta);
    const double trust = 10.0 * (1.0 + inf_norm(x));
    if (step_len > trust)
      for (Complex& d : delta) d *= trust / step_len;

    double t = config.step_damping;
    bool accepted = false;
    for (int halving = 0; halving <= 20; ++halving) {
      ComplexVector xt(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) xt[i] = x[i] + t * delta[i];
      ComplexVector rt;
      ComplexMatrix jt;
      system(xt, rt, jt);
      const double rtn = inf_norm(rt);
      if (std::isfinite(rtn) && rtn < rn) {
        x = std::move(xt);
        r = std::move(rt);
        jac = std::move(jt);
        rn = rtn;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) throw NoConvergence("newton_solve: damped step stalled");
  }
  if (rn <= config.residual_tolerance) return x;
  throw NoConvergence("newton_solve: iteration cap reached");
}

}  // namespace betheasep::numerics
