#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "betheasep/bethe.hpp"
#include "betheasep/numerics.hpp"
#include "betheasep/types.hpp"

namespace betheasep::ramify {

using asep::HoppingRate;
using numerics::ComplexMatrix;

/// Tracked solution set at one parameter value along a path.
struct PathSample {
  Complex p;
  bethe::SolutionSet roots;      // matched to the previous sample by Newton continuation
  double min_pairwise_gap = 0.0; // over admissible roots
};

struct TrackOptions {
  std::uint64_t seed = 0;
  std::size_t budget = 8000;
  int max_step_halvings = 10;
  double excluded_margin = 1e-3;  // distance samples must keep from {0, 1/2, 1}
  bethe::Thresholds thresholds;
  numerics::NewtonConfig newton{.max_iterations = 60, .residual_tolerance = 1e-11};
};

/// Continuation along the segment p_start -> p_end with `steps` intervals:
/// previous roots are the predictor, newton_solve the corrector. Failed
/// steps are halved up to max_step_halvings before PathLost.
std::vector<PathSample> track_path(int sites, int particles, Complex p_start, Complex p_end,
                                   int steps, const TrackOptions& options = {});

struct SearchRegion {
  double re_min = 0.05;
  double re_max = 0.95;
  double im_min = -0.6;
  double im_max = 0.6;
};

struct RamificationEvent {
  Complex p_r;
  std::vector<int> colliding_indices;  // into the deduplicated solution set at p_r
  double gap_at_detection = 0.0;
  double sector_resultant = 0.0;  // N = 2 cross-check value; NaN for general N
};

struct ScanReport {
  std::vector<RamificationEvent> events;
  double min_gap_over_grid = 0.0;  // over grid points where the solver succeeded
  SearchRegion region;
  int grid = 0;
};

struct ScanOptions {
  double accept_gap = 1e-6;
  double resultant_tolerance = 1e-8;
  std::uint64_t seed = 0;       // general-N solves
  std::size_t budget = 8000;
  bethe::Thresholds thresholds;
};

/// Grid scan of the minimal pairwise gap between deduplicated solution
/// classes, golden-section refinement of local minima (coordinate-wise in
/// re/im), acceptance at gap < accept_gap. For N = 2 every event is
/// cross-validated against the vanishing sector discriminant (the eps = 1
/// sector is deflated by its permanent stationary factor first). An empty
/// event list is a valid outcome; the report carries the gap floor.
ScanReport find_ramification(int sites, int particles, SearchRegion region, int grid,
                             const ScanOptions& options = {});

struct JordanChain {
  Complex eigenvalue;
  ComplexVector eigenvector;
  ComplexVector generalized_vector;
  Complex coupling = 0.0;  // fitted c in (H - E) g = c v
  double first_order_residual = 0.0;
  double second_order_residual = 0.0;
};

/// One analytically-scaled spectral branch of a matrix family.
struct SpectralBranch {
  std::function<Complex(Complex)> eigenvalue;
  std::function<ComplexVector(Complex)> eigenvector;
};

struct ChainOptions {
  double step = 1e-4;                    // finite-difference h; Richardson-checked at h/2
  double degenerate_threshold = 1e-10;   // floor for dE_j/dp - dE_i/dp
  double coupling_floor = 1e-6;          // |c| below this is a degenerate chain
  double richardson_tolerance = 1e-3;
  double first_order_bound = 1e-4;
  double second_order_bound = 1e-6;
  double class_cluster = 1e-9;  // class merging while locating the collided pair
};

/// Limit construction at a two-branch collision of an analytic family:
/// generalized vector (du_j/dp - du_i/dp) / (dE_j/dp - dE_i/dp) by central
/// differences at t_r +- h. Returns the chain with both residuals; throws
/// ChainDegenerate when the eigenvalue branches do not split.
JordanChain jordan_chain_from_family(const std::function<ComplexMatrix(Complex)>& matrix_at,
                                     const SpectralBranch& branch_i,
                                     const SpectralBranch& branch_j, Complex t_r,
                                     const ChainOptions& options = {});

/// Jordan chain at an N = 2 ramification event: tracks the two colliding
/// Bethe branches through p_r +- h on raw (analytically scaled) eigenvectors
/// and applies the limit construction. Enforces the residual bounds; throws
/// ClusterTooLarge for events with more than two colliding classes.
JordanChain jordan_chain(int sites, const RamificationEvent& event,
                         const ChainOptions& options = {});

}  // namespace betheasep::ramify
