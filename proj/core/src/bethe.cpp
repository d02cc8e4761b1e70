#include "betheasep/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>

#include "betheasep/parallel.hpp"

namespace betheasep::bethe {

namespace {

bool lex_less(Complex a, Complex b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

bool lex_vec_less(const ComplexVector& a, const ComplexVector& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return a.size() < b.size();
}

double vec_distance(const ComplexVector& a, const ComplexVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}


// 53-bit uniform double in [0, 1) from a raw 64-bit draw; spelled out so the
// start stream is identical on every platform.
double unit_double(std::uint64_t x) { return double(x >> 11) * 0x1.0p-53; }

void check_hopping_margin(Complex p, double margin, std::initializer_list<double> excluded) {
  for (double e : excluded)
    if (std::abs(p - Complex(e, 0.0)) < margin)
      throw InvalidHoppingRate("hopping rate too close to an excluded value");
}

}  // namespace

std::uint64_t SolutionSet::count(AdmissibilityTag tag) const {
  std::uint64_t total = 0;
  for (const auto& [root, adm] : roots)
    if (adm.tag == tag) total += std::uint64_t(root.multiplicity);
  return total;
}

std::uint64_t SolutionSet::raw_total() const {
  std::uint64_t total = 0;
  for (const auto& [root, adm] : roots) total += std::uint64_t(root.multiplicity);
  return total;
}

std::uint64_t falling_factorial_count(int sites, int particles) {
  std::uint64_t v = 1;
  for (int k = 0; k < particles; ++k) v *= std::uint64_t(sites - k);
  return v;
}

ComplexVector cleared_residual(const ComplexVector& xi, HoppingRate hopping, int sites) {
  const std::size_t n = xi.size();
  const Complex p = hopping.p, q = hopping.q();
  ComplexVector f(n);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    Complex a = std::pow(xi[j], sites);
    Complex b = sign;
    for (std::size_t i = 0; i < n; ++i) {
      a *= p + q * xi[j] * xi[i] - xi[i];
      b *= p + q * xi[j] * xi[i] - xi[j];
    }
    f[j] = a + b;
  }
  return f;
}

ComplexMatrix bethe_jacobian(const ComplexVector& xi, HoppingRate hopping, int sites) {
  const std::size_t n = xi.size();
  const Complex p = hopping.p, q = hopping.q();
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  ComplexMatrix jac(n, n);
  ComplexVector fa(n), fb(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      fa[i] = p + q * xi[j] * xi[i] - xi[i];
      fb[i] = p + q * xi[j] * xi[i] - xi[j];
    }
    const Complex xjL = std::pow(xi[j], sites);
    const Complex xjL1 = std::pow(xi[j], sites - 1);
    for (std::size_t k = 0; k < n; ++k) {
      Complex da = 0.0, db = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        Complex dfa = 0.0, dfb = 0.0;
        if (k == i) { dfa += q * xi[j] - 1.0; dfb += q * xi[j]; }
        if (k == j) { dfa += q * xi[i]; dfb += q * xi[i] - 1.0; }
        if (dfa == Complex(0.0) && dfb == Complex(0.0)) continue;
        Complex resta = 1.0, restb = 1.0;
        for (std::size_t m = 0; m < n; ++m) {
          if (m == i) continue;
          resta *= fa[m];
          restb *= fb[m];
        }
        da += dfa * resta;
        db += dfb * restb;
      }
      Complex entry = xjL * da + sign * db;
      if (k == j) {
        Complex proda = 1.0;
        for (std::size_t i = 0; i < n; ++i) proda *= fa[i];
        entry += double(sites) * xjL1 * proda;
      }
      jac(j, k) = entry;
    }
  }
  return jac;
}

double uncleared_residual(const ComplexVector& xi, HoppingRate hopping, int sites) {
  const std::size_t n = xi.size();
  const Complex p = hopping.p, q = hopping.q();
  const double sign = (n % 2 == 1) ? 1.0 : -1.0;  // (-1)^{N-1}
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Complex prod = sign;
    // the i = j factor is identically 1 as a rational function and is
    // cancelled analytically rather than evaluated (it is 0/0 on the
    // self-denominator locus)
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      prod *= (p + q * xi[j] * xi[i] - xi[j]) / (p + q * xi[j] * xi[i] - xi[i]);
    }
    const Complex lhs = std::pow(xi[j], sites);
    // relative: both sides grow like |xi|^L away from the unit circle
    const double m = std::abs(lhs - prod) / (1.0 + std::abs(lhs) + std::abs(prod));
    worst = std::max(worst, std::isfinite(m) ? m : std::numeric_limits<double>::infinity());
  }
  return worst;
}

numerics::NewtonSystem scaled_newton_system(HoppingRate hopping, int sites,
                                            const ComplexVector& reference) {
  double scale = 1.0;
  for (const Complex& z : reference)
    scale *= std::pow(std::max(1.0, std::abs(z)), sites);
  const double inv = 1.0 / scale;
  return [hopping, sites, inv](const ComplexVector& x, ComplexVector& r, ComplexMatrix& j) {
    r = cleared_residual(x, hopping, sites);
    j = bethe_jacobian(x, hopping, sites);
    if (inv < 1.0) {
      for (Complex& v : r) v *= inv;
      for (Complex& v : j.entries()) v *= inv;
    }
  };
}

bool is_stationary_root(const ComplexVector& xi, double tolerance) {
  for (Complex z : xi)
    if (std::abs(z - Complex(1.0, 0.0)) > tolerance) return false;
  return true;
}

Admissibility classify(const BetheRoot& root, HoppingRate hopping, int sites,
                       const Thresholds& t) {
  const ComplexVector& xi = root.xi;
  const std::size_t n = xi.size();
  // The exact all-ones root carries the stationary eigenstate (nonzero as a
  // limiting Bethe state), so it is admissible even though its components
  // coincide; the usual coincident-pair cancellation needs finite amplitudes
  // and does not apply here.
  if (is_stationary_root(xi)) return {AdmissibilityTag::Admissible};

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(xi[i] - xi[j]) < t.coincidence)
        return {AdmissibilityTag::CoincidentPair, int(i), int(j)};

  for (std::size_t k = 0; k < n; ++k) {
    const double m = std::abs(xi[k]);
    if (m < t.zero_magnitude || m > t.infinite_magnitude)
      return {AdmissibilityTag::ZeroOrInfiniteComponent, int(k)};
  }

  // Clearing artifacts solve the polynomial system but not the original
  // equations. The denominator test alone is not reliable at solver
  // precision (points converge to within ~1e-5 of an artifact variety where
  // the exact denominators vanish), so any root whose uncleared residual
  // fails is quarantined.
  if (uncleared_residual(xi, hopping, sites) > t.uncleared_tolerance)
    return {AdmissibilityTag::SpuriousDenominator};

  return {AdmissibilityTag::Admissible};
}

// Distance between component multisets by greedy nearest matching; immune
// to the order instability of lexicographic canonical sorting when two
// components share a real part to rounding error.
double multiset_distance(const ComplexVector& a, const ComplexVector& b) {
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const Complex& za : a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(za - b[j]);
      if (d < best) { best = d; bi = j; }
    }
    used[bi] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

ComplexVector canonical_components(const ComplexVector& xi) {
  ComplexVector out = xi;
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

namespace {

void sort_solution_set(SolutionSet& set) {
  std::sort(set.roots.begin(), set.roots.end(), [](const auto& a, const auto& b) {
    const ComplexVector ca = canonical_components(a.first.xi);
    const ComplexVector cb = canonical_components(b.first.xi);
    if (ca != cb) return lex_vec_less(ca, cb);
    return lex_vec_less(a.first.xi, b.first.xi);
  });
}

}  // namespace

SolutionSet solve_two_particle(int sites, HoppingRate hopping, const Thresholds& t) {
  if (sites < 3) throw InvalidDimensions("solve_two_particle: need L >= 3");
  check_hopping_margin(hopping.p, t.hopping_margin, {0.0, 1.0});
  const Complex p = hopping.p, q = hopping.q();
  const int L = sites;

  SolutionSet out;
  out.hopping = hopping;
  out.sites = L;
  out.particles = 2;
  out.dedup_mode = DedupMode::raw;

  for (int k = 0; k < L; ++k) {
    const Complex eps =
        std::polar(1.0, 2.0 * std::numbers::pi * double(k) / double(L));
    const Complex lead = p + q * eps;
    if (std::abs(lead) < t.degenerate_sector)
      throw DegenerateSector("solve_two_particle: leading coefficient vanishes in a sector");

    ComplexVector coeffs(L + 1, 0.0);
    coeffs[0] = lead;
    coeffs[1] = -1.0;
    coeffs[L - 1] += -eps;
    coeffs[L] = lead;
    ComplexVector roots = numerics::poly_roots(coeffs);

    // Newton-polish simple roots to machine precision; roots in a multiple
    // cluster are left to the snap below.
    auto eval = [&](Complex z) {
      Complex acc = 0.0;
      for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
      return acc;
    };
    auto deriv = [&](Complex z) {
      Complex acc = 0.0;
      for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * z + double(i) * coeffs[i];
      return acc;
    };
    for (Complex& z : roots) {
      for (int it = 0; it < 8; ++it) {
        const Complex d = deriv(z);
        if (std::abs(d) < 1e-8) break;
        const Complex step = eval(z) / d;
        if (!is_finite(step) || std::abs(step) > 0.5) break;
        z -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
      }
    }
    // xi = 1 is an exact sector root precisely when 2(p + q eps) = 1 + eps
    // (the degenerate eps = 1 double root); snap its cluster to 1 exactly.
    if (std::abs(2.0 * lead - (1.0 + eps)) < 1e-12)
      for (Complex& z : roots)
        if (std::abs(z - Complex(1.0)) < 1e-4) z = 1.0;

    // cluster multiple roots into one entry with multiplicity
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (used[i]) continue;
      int mult = 1;
      for (std::size_t j = i + 1; j < roots.size(); ++j) {
        if (!used[j] && std::abs(roots[i] - roots[j]) < t.cluster) {
          used[j] = true;
          ++mult;
        }
      }
      const Complex xi1 = roots[i];
      const Complex xi2 = (xi1 == Complex(1.0) ? eps : eps / xi1);
      BetheRoot root{{xi1, xi2}, 0.0, mult};
      root.residual_norm = numerics::inf_norm(cleared_residual(root.xi, hopping, L));
      Admissibility adm = classify(root, hopping, L, t);
      out.roots.emplace_back(std::move(root), adm);
    }
  }

  out.admissible_found = out.count(AdmissibilityTag::Admissible);
  out.admissible_expected = falling_factorial_count(L, 2);
  out.target_reached = out.admissible_found == out.admissible_expected;
  sort_solution_set(out);
  return out;
}

SolutionSet solve_general(int sites, int particles, HoppingRate hopping,
                          const SolveOptions& options) {
  const int L = sites, N = particles;
  if (N < 1 || N > L) throw InvalidDimensions("solve_general: need 1 <= N <= L");
  const Thresholds& t = options.thresholds;
  check_hopping_margin(hopping.p, t.hopping_margin, {0.0, 0.5, 1.0});

  SolutionSet out;
  out.hopping = hopping;
  out.sites = L;
  out.particles = N;
  out.dedup_mode = DedupMode::raw;
  out.admissible_expected = falling_factorial_count(L, N);

  std::uint64_t nfact = 1;
  for (int i = 2; i <= N; ++i) nfact *= std::uint64_t(i);

  // The all-ones root solves the cleared system identically for every p and
  // holds the stationary class; seeded with its orbit weight N!.
  out.roots.emplace_back(BetheRoot{ComplexVector(N, Complex(1.0)), 0.0, int(nfact)},
                         Admissibility{AdmissibilityTag::Admissible});

  const double snap_radius =
      std::max(t.stationary_snap,
               4.0 * std::pow(options.newton.residual_tolerance, 1.0 / double(N)));

  auto is_duplicate = [&](const ComplexVector& xi) {
    for (const auto& [root, adm] : out.roots)
      if (vec_distance(root.xi, xi) <= t.cluster) return true;
    return false;
  };

  auto admissible_total = [&] { return out.count(AdmissibilityTag::Admissible); };

  // deterministic annulus start stream
  std::mt19937_64 rng(options.seed);
  const double r2min = t.annulus_min * t.annulus_min;
  const double r2max = t.annulus_max * t.annulus_max;
  std::vector<ComplexVector> starts(options.budget);
  for (auto& s : starts) {
    s.resize(N);
    for (int i = 0; i < N; ++i) {
      const double radius = std::sqrt(r2min + (r2max - r2min) * unit_double(rng()));
      const double angle = 2.0 * std::numbers::pi * unit_double(rng());
      s[i] = std::polar(radius, angle);
    }
  }

  const auto system = [&hopping, L](const ComplexVector& x, ComplexVector& r,
                                    ComplexMatrix& j) {
    r = cleared_residual(x, hopping, L);
    j = bethe_jacobian(x, hopping, L);
  };

  const std::size_t wave = std::max<std::size_t>(8 * parallel::thread_cap(), 32);
  std::size_t next = 0;
  while (next < starts.size() && admissible_total() < out.admissible_expected) {
    const std::size_t begin = next;
    const std::size_t end = std::min(starts.size(), begin + wave);
    next = end;
    std::vector<std::optional<ComplexVector>> results(end - begin);
    parallel::for_each_chunk(end - begin, [&](std::size_t lo, std::size_t hi, std::size_t) {
      for (std::size_t i = lo; i < hi; ++i) {
        try {
          results[i] = numerics::newton_solve(system, starts[begin + i], options.newton);
        } catch (const NoConvergence&) {
        } catch (const SingularJacobian&) {
        }
      }
    });
    for (std::size_t i = 0; i < results.size(); ++i) {
      out.starts_used = begin + i + 1;
      if (!results[i]) continue;
      ComplexVector x = std::move(*results[i]);
      if (vec_distance(x, ComplexVector(N, Complex(1.0))) < snap_radius) continue;  // seeded
      if (is_duplicate(x)) continue;
      // expand the permutation orbit; every permutation of a solution solves
      // the (symmetric) system and counts separately in raw mode
      std::vector<int> perm(N);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        ComplexVector px(N);
        for (int j = 0; j < N; ++j) px[j] = x[perm[j]];
        if (is_duplicate(px)) continue;
        const double res = numerics::inf_norm(cleared_residual(px, hopping, L));
        if (res > t.cleared_acceptance) continue;
        BetheRoot root{px, res, 1};
        Admissibility adm = classify(root, hopping, L, t);
        out.roots.emplace_back(std::move(root), adm);
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (admissible_total() >= out.admissible_expected) break;
    }
  }

  out.admissible_found = admissible_total();
  out.target_reached = out.admissible_found >= out.admissible_expected;
  sort_solution_set(out);
  return out;
}

SolutionSet dedup_up_to_permutation(const SolutionSet& set, double cluster_threshold) {
  SolutionSet out;
  out.hopping = set.hopping;
  out.sites = set.sites;
  out.particles = set.particles;
  out.dedup_mode = DedupMode::up_to_permutation;
  out.target_reached = set.target_reached;
  out.admissible_expected = set.admissible_expected;
  out.starts_used = set.starts_used;

  for (const auto& [root, adm] : set.roots) {
    ComplexVector canon = canonical_components(root.xi);
    bool merged = false;
    for (auto& [existing, eadm] : out.roots) {
      if (multiset_distance(existing.xi, canon) <= cluster_threshold) {
        existing.multiplicity += root.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) {
      BetheRoot rep{std::move(canon), root.residual_norm, root.multiplicity};
      out.roots.emplace_back(std::move(rep), adm);
    }
  }
  out.admissible_found = out.count(AdmissibilityTag::Admissible);
  sort_solution_set(out);
  return out;
}

}  // namespace betheasep::bethe
