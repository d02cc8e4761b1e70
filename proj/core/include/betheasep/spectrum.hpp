#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "betheasep/asep.hpp"
#include "betheasep/bethe.hpp"
#include "betheasep/types.hpp"

namespace betheasep::spectrum {

using asep::HoppingRate;
using asep::StateSpace;
using bethe::BetheRoot;

/// Permutations in one-line notation, 0-based; key order is lexicographic.
using AmplitudeMap = std::map<std::vector<int>, Complex>;

/// A Bethe eigenstate: root, the N! amplitudes A_sigma, the eigenvector in
/// state-space order, and its eigenvalue.
struct BetheState {
  BetheRoot root;
  AmplitudeMap amplitudes;
  ComplexVector vector;  // normalized: unit max-magnitude component, rotated real-positive
  Complex eigenvalue;
};

/// Inversion-product amplitudes: for an inversion of sigma
/// with value pair a < b the factor is
///   -(p + q xi_a xi_b - xi_b) / (p + q xi_a xi_b - xi_a),
/// the convention fixed by the two-particle boundary condition (the
/// alternative sign of the subscripts violates it at O(1)). A_identity = 1.
/// The stationary all-ones root gets its limiting amplitudes, identically 1.
/// Throws AmplitudeSingularity when a denominator magnitude drops below
/// 1e-12 on a non-stationary root.
AmplitudeMap amplitudes(const BetheRoot& root, HoppingRate hopping);

/// Ansatz value u(x) = sum_sigma A_sigma prod_i xi_{sigma(i)}^{x_i} at an
/// arbitrary integer tuple (the analytic extension; coordinates need not be
/// ordered or distinct). Exponents must be >= 0.
Complex ansatz_value(const ComplexVector& xi, const AmplitudeMap& amps,
                     const std::vector<int>& x);

/// Unnormalized eigenvector (A_identity = 1 scale), analytic in the root and
/// p; the ramification module differentiates this one.
ComplexVector build_eigenvector_raw(const BetheRoot& root, const StateSpace& space,
                                    HoppingRate hopping);

/// Normalized eigenvector; throws ZeroVector when every component magnitude
/// is below 1e-10 (exactly the inadmissible case).
ComplexVector build_eigenvector(const BetheRoot& root, const StateSpace& space,
                                HoppingRate hopping);

/// E = sum_i (p / xi_i + q xi_i - 1). Throws ZeroComponent if any |xi_i| <= 1e-8.
Complex eigenvalue(const BetheRoot& root, HoppingRate hopping);

/// Builds the full state (amplitudes, normalized vector, eigenvalue).
BetheState build_state(const BetheRoot& root, const StateSpace& space, HoppingRate hopping);

/// Max violation of p u(..,x,x,..) + q u(..,x+1,x+1,..) - u(..,x,x+1,..)
/// over x in [1, L] and every adjacent coordinate pair, on the analytic
/// extension of the ansatz (spectators pinned at fixed sample values).
/// 0 by convention for N = 1.
double boundary_check(const BetheState& state, HoppingRate hopping, int sites);

struct TraceCheck {
  Complex sum;        // sum of eigenvalue moments over the eigenstates
  Complex reference;  // trace of H (or H^2)
  double difference;  // |sum - reference|
};

enum class Verdict { Complete, Incomplete };

struct Certificate {
  int sites = 0;
  int particles = 0;
  HoppingRate hopping;
  std::size_t eigenstate_count = 0;
  double min_singular_proxy = 0.0;  // smallest accepted pivot of the rank elimination
  double max_residual = 0.0;        // max |H u - E u|_inf over unit-inf-norm eigenvectors
  TraceCheck trace_check;
  TraceCheck trace_sq_check;
  Verdict verdict = Verdict::Incomplete;
  std::string reason;  // empty when Complete
};

struct CertifyOptions {
  std::uint64_t seed = 0;
  std::size_t budget = 8000;
  double residual_tolerance = 1e-8;
  double trace_tolerance = 1e-6;  // relative: |diff| <= tol * (1 + |reference|)
  double rank_tolerance = 1e-8;
  bethe::Thresholds thresholds;
};

/// Solves, deduplicates, builds all admissible eigenstates, and certifies
/// completeness: eigenstate count = C(L,N), full eigenvector-matrix rank,
/// residuals within tolerance, and first and second spectral moments equal
/// to trace H and trace H^2. Solver shortfalls land in verdict Incomplete
/// with a reason instead of throwing.
Certificate certify(int sites, int particles, HoppingRate hopping,
                    const CertifyOptions& options = {});

/// The deduplicated admissible eigenstates certify builds (exposed for the
/// CLI and for cross-checks).
std::vector<BetheState> build_eigenstates(const bethe::SolutionSet& deduped,
                                          const StateSpace& space);

}  // namespace betheasep::spectrum
