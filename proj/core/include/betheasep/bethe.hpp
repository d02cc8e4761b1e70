#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "betheasep/asep.hpp"
#include "betheasep/numerics.hpp"
#include "betheasep/types.hpp"

namespace betheasep::bethe {

using asep::HoppingRate;
using numerics::ComplexMatrix;

/// One solution of the Bethe ansatz equations.
struct BetheRoot {
  ComplexVector xi;
  double residual_norm = 0.0;  // cleared-polynomial residual at acceptance
  int multiplicity = 1;
};

enum class AdmissibilityTag {
  Admissible,
  CoincidentPair,
  ZeroOrInfiniteComponent,
  SpuriousDenominator,
};

struct Admissibility {
  AdmissibilityTag tag = AdmissibilityTag::Admissible;
  int index_i = -1;  // CoincidentPair: i < j; ZeroOrInfiniteComponent: the component
  int index_j = -1;
};

enum class DedupMode { raw, up_to_permutation };

/// Every threshold the solver and classifier use. Defaults are the working
/// values; override per call when probing edge regimes.
struct Thresholds {
  double coincidence = 1e-6;
  double zero_magnitude = 1e-8;
  double infinite_magnitude = 1e8;
  double spurious_denominator = 1e-10;
  double uncleared_tolerance = 1e-7;
  double cleared_acceptance = 1e-9;
  double cluster = 1e-6;
  double annulus_min = 0.3;
  double annulus_max = 3.0;
  double degenerate_sector = 1e-10;
  double stationary_snap = 0.02;  // capture radius around (1,...,1); see solve_general
  double hopping_margin = 1e-6;   // distance p must keep from {0, 1/2, 1}
};

struct SolutionSet {
  std::vector<std::pair<BetheRoot, Admissibility>> roots;
  HoppingRate hopping;
  int sites = 0;
  int particles = 0;
  DedupMode dedup_mode = DedupMode::raw;
  // Completeness status: solve_general reports whether the admissible count
  // reached the falling-factorial target within budget. solve_two_particle
  // always reaches it.
  bool target_reached = true;
  std::uint64_t admissible_found = 0;
  std::uint64_t admissible_expected = 0;
  std::size_t starts_used = 0;

  std::uint64_t count(AdmissibilityTag tag) const;  // sums multiplicities
  std::uint64_t raw_total() const;
};

/// L(L-1)...(L-N+1) as a 64-bit count (desk scale).
std::uint64_t falling_factorial_count(int sites, int particles);

/// Cleared Bethe polynomials f_j evaluated at xi:
/// f_j = xi_j^L prod_i (p + q xi_j xi_i - xi_i) + (-1)^N prod_i (p + q xi_j xi_i - xi_j).
ComplexVector cleared_residual(const ComplexVector& xi, HoppingRate hopping, int sites);

/// Analytic Jacobian d f_j / d xi_k of cleared_residual.
ComplexMatrix bethe_jacobian(const ComplexVector& xi, HoppingRate hopping, int sites);

/// Residual of the original (uncleared) Bethe equations,
/// |xi_j^L - (-1)^{N-1} prod_i num/den|, max over j, relative to the
/// magnitudes of the two sides. NaN-safe: an undefined ratio reports +inf.
double uncleared_residual(const ComplexVector& xi, HoppingRate hopping, int sites);

/// Newton system on the cleared polynomials with residual and Jacobian
/// divided by prod_i max(1, |xi_i|)^L evaluated at a fixed reference point
/// (the continuation predictor). The constant scaling leaves Newton steps
/// and the damping merit intact but makes the stopping tolerance meaningful
/// for roots far from the unit circle, whose raw residuals cannot reach a
/// small absolute tolerance in double precision.
numerics::NewtonSystem scaled_newton_system(HoppingRate hopping, int sites,
                                            const ComplexVector& reference);

/// The degenerate all-ones root (1,...,1). It solves the cleared system
/// identically for every p and carries the stationary eigenstate as a
/// limiting Bethe state; the classifier treats it as Admissible (see
/// classify).
bool is_stationary_root(const ComplexVector& xi, double tolerance = 1e-9);

/// Classification per the inadmissibility conditions. The exact stationary
/// root is Admissible (its limiting eigenstate is the nonzero uniform
/// vector); otherwise: CoincidentPair when two components are within the
/// coincidence threshold, ZeroOrInfiniteComponent on magnitude violations,
/// SpuriousDenominator for clearing artifacts (roots of the polynomial
/// system whose uncleared-equation residual fails, the denominator-vanishing
/// case included), else Admissible.
Admissibility classify(const BetheRoot& root, HoppingRate hopping, int sites,
                       const Thresholds& thresholds = {});

/// Exact N = 2 solver: for each of the L sector values epsilon (epsilon^L=1)
/// solves the degree-L polynomial
///   (p + q eps) xi^L - eps xi^{L-1} - xi + (p + q eps),
/// returning all L^2 raw roots (xi, eps/xi) with multiplicity. Exactly L of
/// them are CoincidentPair; the degenerate (1,1) double root is the
/// stationary root (Admissible, multiplicity 2).
SolutionSet solve_two_particle(int sites, HoppingRate hopping, const Thresholds& thresholds = {});

struct SolveOptions {
  std::uint64_t seed = 0;
  std::size_t budget = 8000;  // Newton starts
  Thresholds thresholds;
  numerics::NewtonConfig newton{.max_iterations = 80, .residual_tolerance = 1e-11};
};

/// Multistart Newton on the cleared system from deterministic annulus
/// samples. The stationary root is seeded a priori with multiplicity N!;
/// every found root is expanded to its permutation orbit (the system is
/// symmetric). Stops once the admissible count reaches the falling
/// factorial; a shortfall is reported in the returned set, not thrown.
SolutionSet solve_general(int sites, int particles, HoppingRate hopping,
                          const SolveOptions& options = {});

/// Merges roots that are component permutations of each other. Admissible
/// classes keep the summed multiplicity of their orbit.
SolutionSet dedup_up_to_permutation(const SolutionSet& set, double cluster_threshold = 1e-6);

/// Canonical order for a root vector: components sorted by (re, im).
ComplexVector canonical_components(const ComplexVector& xi);

/// Distance between component multisets (greedy nearest matching); the
/// order-independent metric clustering and gap scans use.
double multiset_distance(const ComplexVector& a, const ComplexVector& b);

}  // namespace betheasep::bethe
