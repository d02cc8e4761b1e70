#include "betheasep/ramify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "betheasep/spectrum.hpp"

namespace betheasep::ramify {

namespace {

double vec_distance(const ComplexVector& a, const ComplexVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double min_admissible_gap(const bethe::SolutionSet& set) {
  std::vector<const ComplexVector*> adm;
  for (const auto& [root, tag] : set.roots)
    if (tag.tag == bethe::AdmissibilityTag::Admissible) adm.push_back(&root.xi);
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < adm.size(); ++i)
    for (std::size_t j = i + 1; j < adm.size(); ++j)
      gap = std::min(gap, vec_distance(*adm[i], *adm[j]));
  return gap;
}

bethe::SolutionSet solve_at(int sites, int particles, Complex p, std::uint64_t seed,
                            std::size_t budget, const bethe::Thresholds& thresholds) {
  const HoppingRate hopping{p};
  if (particles == 2) return bethe::solve_two_particle(sites, hopping, thresholds);
  bethe::SolveOptions so;
  so.seed = seed;
  so.budget = budget;
  so.thresholds = thresholds;
  return bethe::solve_general(sites, particles, hopping, so);
}

}  // namespace

std::vector<PathSample> track_path(int sites, int particles, Complex p_start, Complex p_end,
                                   int steps, const TrackOptions& options) {
  if (steps < 1) throw InvalidDimensions("track_path: need at least one step");
  auto margin_ok = [&](Complex p) {
    for (double e : {0.0, 0.5, 1.0})
      if (std::abs(p - Complex(e, 0.0)) < options.excluded_margin) return false;
    return true;
  };
  for (int k = 0; k <= steps; ++k) {
    const Complex p = p_start + (p_end - p_start) * (double(k) / double(steps));
    if (!margin_ok(p))
      throw InvalidHoppingRate("track_path: a sample point is too close to {0, 1/2, 1}");
  }

  std::vector<PathSample> samples;
  bethe::SolutionSet current =
      solve_at(sites, particles, p_start, options.seed, options.budget, options.thresholds);
  samples.push_back({p_start, current, min_admissible_gap(current)});

  // Predictor-corrector: each previous root Newton-refines at the new p.
  // With allow_failures a root whose corrector fails keeps its predictor
  // value (the assignment step below still anchors on it); otherwise a
  // failure aborts the whole leg.
  auto refine_all = [&](const bethe::SolutionSet& from, Complex p,
                        bool allow_failures) -> std::optional<bethe::SolutionSet> {
    const HoppingRate hopping{p};
    bethe::SolutionSet next = from;
    next.hopping = hopping;
    for (auto& [root, tag] : next.roots) {
      if (bethe::is_stationary_root(root.xi)) continue;  // p-independent
      const auto system = bethe::scaled_newton_system(hopping, sites, root.xi);
      try {
        root.xi = numerics::newton_solve(system, root.xi, options.newton);
      } catch (const Error&) {
        if (!allow_failures) return std::nullopt;
        continue;
      }
      root.residual_norm = numerics::inf_norm(bethe::cleared_residual(root.xi, hopping, sites));
      tag = bethe::classify(root, hopping, sites, options.thresholds);
    }
    return next;
  };

  // For N = 2 the exact solver is available at every sample, so tracked
  // identities come from minimal-cost assignment of the refined predictions
  // onto the fresh solution set (greedy on the globally smallest distance,
  // which repairs conflicts where two branches fall into one basin while a
  // collision is being crossed).
  auto rematch = [&](bethe::SolutionSet refined, Complex p) -> bethe::SolutionSet {
    const bethe::SolutionSet fresh =
        solve_at(sites, particles, p, options.seed, options.budget, options.thresholds);
    if (fresh.roots.size() != refined.roots.size()) return fresh;  // identity reset
    const std::size_t n = refined.roots.size();
    std::vector<bool> used_fresh(n, false), assigned(n, false);
    for (std::size_t round = 0; round < n; ++round) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (assigned[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (used_fresh[j]) continue;
          const double d =
              vec_distance(refined.roots[i].first.xi, fresh.roots[j].first.xi);
          if (d < best) { best = d; bi = i; bj = j; }
        }
      }
      assigned[bi] = true;
      used_fresh[bj] = true;
      refined.roots[bi] = fresh.roots[bj];
    }
    return refined;
  };

  // advance from `current` at p_from to p_to; with an exact per-sample
  // solver (N = 2) corrector failures are absorbed by the assignment,
  // otherwise the step halves recursively before giving up
  std::function<bethe::SolutionSet(const bethe::SolutionSet&, Complex, Complex, int)> advance =
      [&](const bethe::SolutionSet& from, Complex p_from, Complex p_to,
          int depth) -> bethe::SolutionSet {
    if (particles == 2)
      return rematch(std::move(*refine_all(from, p_to, true)), p_to);
    if (auto next = refine_all(from, p_to, false)) return *next;
    if (depth >= options.max_step_halvings)
      throw PathLost("track_path: refinement failed after step halvings");
    const Complex mid = p_from + (p_to - p_from) * 0.5;
    const bethe::SolutionSet half = advance(from, p_from, mid, depth + 1);
    return advance(half, mid, p_to, depth + 1);
  };

  for (int k = 1; k <= steps; ++k) {
    const Complex p = p_start + (p_end - p_start) * (double(k) / double(steps));
    current = advance(current, samples.back().p, p, 0);
    samples.push_back({p, current, min_admissible_gap(current)});
  }
  return samples;
}

namespace {

// p-dependent sector polynomial of the two-particle reduction, ascending
ComplexVector sector_coefficients(int sites, Complex p, Complex eps) {
  const Complex lead = p + (Complex(1.0) - p) * eps;
  ComplexVector c(sites + 1, 0.0);
  c[0] = lead;
  c[1] = -1.0;
  c[sites - 1] += -eps;
  c[sites] = lead;
  return c;
}

Complex poly_eval(const ComplexVector& c, Complex z) {
  Complex acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

// |Res(P, P')| minimized over sectors; the eps = 1 sector is deflated by its
// permanent (xi - 1) stationary factor so only genuine collisions register.
double min_sector_resultant(int sites, Complex p) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < sites; ++k) {
    const Complex eps =
        std::polar(1.0, 2.0 * std::numbers::pi * double(k) / double(sites));
    ComplexVector c = sector_coefficients(sites, p, eps);
    if (std::abs(2.0 * c[sites] - (1.0 + eps)) < 1e-12) {
      // synthetic division by (xi - 1)
      ComplexVector d(c.size() - 1);
      Complex carry = c[c.size() - 1];
      for (std::size_t i = c.size() - 1; i-- > 0;) {
        d[i] = carry;
        carry = c[i] + carry;
      }
      c = std::move(d);
    }
    const std::size_t deg = c.size() - 1;
    if (std::abs(c[deg]) < 1e-12) continue;  // degenerate sector, skip
    ComplexVector dc(deg);
    for (std::size_t i = 1; i <= deg; ++i) dc[i - 1] = double(i) * c[i];
    ComplexVector roots;
    try {
      roots = numerics::poly_roots(c);
    } catch (const Error&) {
      continue;
    }
    Complex res = std::pow(c[deg], double(deg - 1));
    for (Complex r : roots) res *= poly_eval(dc, r);
    best = std::min(best, std::abs(res));
  }
  return best;
}

}  // namespace

ScanReport find_ramification(int sites, int particles, SearchRegion region, int grid,
                             const ScanOptions& options) {
  if (grid < 3) throw InvalidDimensions("find_ramification: grid too small");
  ScanReport report;
  report.region = region;
  report.grid = grid;

  // Class merging must happen well below the acceptance gap, or the very
  // collision being measured gets deduplicated away before it registers.
  const double gap_cluster = std::min(options.thresholds.cluster, options.accept_gap * 1e-3);
  auto gap_at = [&](Complex p) -> double {
    try {
      const bethe::SolutionSet sol =
          solve_at(sites, particles, p, options.seed, options.budget, options.thresholds);
      const bethe::SolutionSet classes = bethe::dedup_up_to_permutation(sol, gap_cluster);
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < classes.roots.size(); ++i)
        for (std::size_t j = i + 1; j < classes.roots.size(); ++j)
          gap = std::min(gap, bethe::multiset_distance(classes.roots[i].first.xi,
                                           classes.roots[j].first.xi));
      return gap;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const double dre = (region.re_max - region.re_min) / double(grid - 1);
  const double dim = (region.im_max - region.im_min) / double(grid - 1);
  std::vector<std::vector<double>> gaps(grid, std::vector<double>(grid));
  double floor = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const Complex p(region.re_min + i * dre, region.im_min + j * dim);
      gaps[i][j] = gap_at(p);
      floor = std::min(floor, gaps[i][j]);
    }
  report.min_gap_over_grid = floor;

  // Sampled zoom along one axis: argmin over a shrinking bracket. Robust
  // where the gap surface is a narrow sqrt-cone cut into an exactly-flat
  // plateau of p-independent class distances, which defeats golden-section
  // bracketing. Resolving gap ~ 1e-6 on a sqrt-cone needs p to ~1e-14.
  auto line_min = [&](Complex center, bool along_re, double halfwidth, double stop) {
    double lo = -halfwidth, hi = halfwidth;
    double best_t = 0.0;
    while (hi - lo > stop) {
      constexpr int kSamples = 13;
      double best_val = std::numeric_limits<double>::infinity();
      for (int s = 0; s < kSamples; ++s) {
        const double t = lo + (hi - lo) * double(s) / double(kSamples - 1);
        const double v = gap_at(center + (along_re ? Complex(t, 0.0) : Complex(0.0, t)));
        if (v < best_val) { best_val = v; best_t = t; }
      }
      const double width = (hi - lo) / double(kSamples - 1) * 1.5;
      lo = best_t - width;
      hi = best_t + width;
    }
    return center + (along_re ? Complex(best_t, 0.0) : Complex(0.0, best_t));
  };

  // Plateau filter: grid cells whose gap ties the largest finite value are
  // background, not candidate collisions.
  double plateau = 0.0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      if (std::isfinite(gaps[i][j])) plateau = std::max(plateau, gaps[i][j]);

  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double g = gaps[i][j];
      if (!std::isfinite(g) || g > 0.999 * plateau) continue;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ni = i + di, nj = j + dj;
          if (ni < 0 || nj < 0 || ni >= grid || nj >= grid || (di == 0 && dj == 0)) continue;
          if (gaps[ni][nj] < g) { is_min = false; break; }
        }
      if (!is_min) continue;

      Complex p(region.re_min + i * dre, region.im_min + j * dim);
      for (int sweep = 0; sweep < 2; ++sweep) {
        const double stop = sweep == 0 ? 1e-8 : 4e-15;
        p = line_min(p, true, dre, stop);
        p = line_min(p, false, dim, stop);
      }
      const double refined = gap_at(p);
      if (refined >= options.accept_gap) continue;

      double resultant = std::numeric_limits<double>::quiet_NaN();
      if (particles == 2) {
        resultant = min_sector_resultant(sites, p);
        if (!(resultant < options.resultant_tolerance)) continue;
      }
      bool duplicate = false;
      for (const auto& e : report.events)
        if (std::abs(e.p_r - p) < 1e-6) { duplicate = true; break; }
      if (duplicate) continue;

      // colliding classes at p_r; the fine cluster keeps the collided pair
      // as two entries
      RamificationEvent event;
      event.p_r = p;
      event.gap_at_detection = refined;
      event.sector_resultant = resultant;
      const bethe::SolutionSet classes = bethe::dedup_up_to_permutation(
          solve_at(sites, particles, p, options.seed, options.budget, options.thresholds),
          gap_cluster);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < classes.roots.size(); ++a)
        for (std::size_t b = a + 1; b < classes.roots.size(); ++b) {
          const double d =
              bethe::multiset_distance(classes.roots[a].first.xi, classes.roots[b].first.xi);
          if (d < best) {
            best = d;
            event.colliding_indices = {int(a), int(b)};
          }
        }
      report.events.push_back(std::move(event));
    }
  }
  std::sort(report.events.begin(), report.events.end(), [](const auto& a, const auto& b) {
    return a.p_r.real() != b.p_r.real() ? a.p_r.real() < b.p_r.real()
                                        : a.p_r.imag() < b.p_r.imag();
  });
  return report;
}

namespace {

// generalized vector from central differences at t_r +- h
ComplexVector generalized_at_step(const SpectralBranch& bi, const SpectralBranch& bj,
                                  Complex t_r, double h, const ChainOptions& options) {
  const ComplexVector du_plus = [&] {
    ComplexVector a = bj.eigenvector(t_r + h), b = bi.eigenvector(t_r + h);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
    return a;
  }();
  const ComplexVector du_minus = [&] {
    ComplexVector a = bj.eigenvector(t_r - h), b = bi.eigenvector(t_r - h);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
    return a;
  }();
  const Complex de =
      (bj.eigenvalue(t_r + h) - bi.eigenvalue(t_r + h)) -
      (bj.eigenvalue(t_r - h) - bi.eigenvalue(t_r - h));
  if (std::abs(de) < options.degenerate_threshold)
    throw ChainDegenerate("jordan_chain: eigenvalue branches do not split");
  ComplexVector g(du_plus.size());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = (du_plus[k] - du_minus[k]) / de;
  return g;
}

}  // namespace

JordanChain jordan_chain_from_family(const std::function<ComplexMatrix(Complex)>& matrix_at,
                                     const SpectralBranch& branch_i,
                                     const SpectralBranch& branch_j, Complex t_r,
                                     const ChainOptions& options) {
  const ComplexVector g_coarse =
      generalized_at_step(branch_i, branch_j, t_r, options.step, options);
  const ComplexVector g_fine =
      generalized_at_step(branch_i, branch_j, t_r, options.step / 2.0, options);

  // the construction carries no scale freedom, so the two steps compare raw
  double diff = 0.0;
  for (std::size_t k = 0; k < g_coarse.size(); ++k)
    diff = std::max(diff, std::abs(g_coarse[k] - g_fine[k]));
  const double g_scale = std::max(numerics::inf_norm(g_coarse), 1e-300);
  if (diff / g_scale > options.richardson_tolerance)
    throw NoConvergence("jordan_chain: Richardson check failed at h/2");

  JordanChain chain;
  // Richardson extrapolation removes the O(h) error that a square-root
  // branch structure leaves in either single-step estimate
  chain.generalized_vector.resize(g_fine.size());
  for (std::size_t k = 0; k < g_fine.size(); ++k)
    chain.generalized_vector[k] = 2.0 * g_fine[k] - g_coarse[k];

  chain.eigenvalue = 0.5 * (branch_i.eigenvalue(t_r) + branch_j.eigenvalue(t_r));
  chain.eigenvector = branch_i.eigenvector(t_r);

  const ComplexMatrix h_matrix = matrix_at(t_r);
  const std::size_t n = chain.eigenvector.size();
  auto apply_shifted = [&](const ComplexVector& x) {
    ComplexVector y = numerics::matvec(h_matrix, x);
    for (std::size_t k = 0; k < n; ++k) y[k] -= chain.eigenvalue * x[k];
    return y;
  };
  const ComplexVector hg = apply_shifted(chain.generalized_vector);
  Complex dot_vh = 0.0, dot_vv = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    dot_vh += std::conj(chain.eigenvector[k]) * hg[k];
    dot_vv += std::conj(chain.eigenvector[k]) * chain.eigenvector[k];
  }
  chain.coupling = dot_vh / dot_vv;

  const double g_norm = numerics::inf_norm(chain.generalized_vector);
  ComplexVector defect(n);
  for (std::size_t k = 0; k < n; ++k) defect[k] = hg[k] - chain.coupling * chain.eigenvector[k];
  chain.first_order_residual = numerics::inf_norm(defect) / g_norm;
  chain.second_order_residual = numerics::inf_norm(apply_shifted(hg)) / g_norm;

  if (std::abs(chain.coupling) < options.coupling_floor)
    throw ChainDegenerate("jordan_chain: fitted coupling below floor");
  return chain;
}

JordanChain jordan_chain(int sites, const RamificationEvent& event, const ChainOptions& options) {
  if (event.colliding_indices.size() > 2)
    throw ClusterTooLarge("jordan_chain: more than two colliding roots");
  const int L = sites;
  const Complex p_r = event.p_r;
  const bethe::Thresholds thresholds;

  // locate the collided pair at p_r directly: the globally closest pair of
  // classes under a cluster fine enough not to merge them
  const bethe::SolutionSet at_event = bethe::dedup_up_to_permutation(
      bethe::solve_two_particle(L, HoppingRate{p_r}, thresholds), options.class_cluster);
  double pair_gap = std::numeric_limits<double>::infinity();
  std::size_t pair_a = 0;
  for (std::size_t a = 0; a < at_event.roots.size(); ++a)
    for (std::size_t b = a + 1; b < at_event.roots.size(); ++b) {
      const double d = bethe::multiset_distance(at_event.roots[a].first.xi,
                                                at_event.roots[b].first.xi);
      if (d < pair_gap) { pair_gap = d; pair_a = a; }
    }
  if (!(pair_gap < 1e-4))
    throw PathLost("jordan_chain: no collided class pair at the event parameter");
  const ComplexVector anchor = at_event.roots[pair_a].first.xi;

  const asep::StateSpace space = asep::enumerate_states(L, 2);

  // the two roots nearest the anchor at parameter p, components matched to
  // the anchor's ordering so the raw eigenvector scale varies analytically
  auto branch_roots = [&, anchor](Complex p) {
    const bethe::SolutionSet classes = bethe::dedup_up_to_permutation(
        bethe::solve_two_particle(L, HoppingRate{p}, thresholds), options.class_cluster);
    std::vector<std::pair<double, ComplexVector>> ranked;
    for (const auto& [root, tag] : classes.roots)
      ranked.emplace_back(bethe::multiset_distance(root.xi, anchor), root.xi);
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (ranked.size() < 2)
      throw PathLost("jordan_chain: fewer than two classes near the event");
    std::array<ComplexVector, 2> out{ranked[0].second, ranked[1].second};
    for (ComplexVector& xi : out) {
      // match component order to the anchor
      const double direct = std::abs(xi[0] - anchor[0]) + std::abs(xi[1] - anchor[1]);
      const double swapped = std::abs(xi[1] - anchor[0]) + std::abs(xi[0] - anchor[1]);
      if (swapped < direct) std::swap(xi[0], xi[1]);
    }
    std::sort(out.begin(), out.end(), [](const ComplexVector& a, const ComplexVector& b) {
      return a[0].real() != b[0].real() ? a[0].real() < b[0].real()
                                        : a[0].imag() < b[0].imag();
    });
    return out;
  };

  auto make_branch = [&](int which) {
    SpectralBranch branch;
    branch.eigenvalue = [=](Complex p) {
      return spectrum::eigenvalue(bethe::BetheRoot{branch_roots(p)[which]}, HoppingRate{p});
    };
    branch.eigenvector = [=, &space](Complex p) {
      return spectrum::build_eigenvector_raw(bethe::BetheRoot{branch_roots(p)[which]}, space,
                                             HoppingRate{p});
    };
    return branch;
  };

  auto matrix_at = [&space](Complex p) {
    return asep::build_generator(space, HoppingRate{p}).entries;
  };

  const JordanChain chain =
      jordan_chain_from_family(matrix_at, make_branch(0), make_branch(1), p_r, options);
  if (chain.first_order_residual > options.first_order_bound ||
      chain.second_order_residual > options.second_order_bound)
    throw NoConvergence("jordan_chain: residual bounds not met");
  return chain;
}

}  // namespace betheasep::ramify
