#pragma once

#include <vector>

#include "betheasep/numerics.hpp"
#include "betheasep/types.hpp"

namespace betheasep::asep {

using numerics::ComplexMatrix;

/// One N-particle state on the ring: occupied sites, 1-based, strictly
/// increasing.
struct Configuration {
  std::vector<int> occupied_sites;

  bool operator==(const Configuration&) const = default;
  auto operator<=>(const Configuration&) const = default;
};

/// All C(L, N) configurations in lexicographic order with O(N) rank lookup.
class StateSpace {
 public:
  StateSpace(int sites, int particles, std::vector<Configuration> configurations);

  int sites() const { return sites_; }
  int particles() const { return particles_; }
  std::size_t size() const { return configurations_.size(); }
  const std::vector<Configuration>& configurations() const { return configurations_; }
  const Configuration& at(std::size_t index) const { return configurations_[index]; }

  /// Ordinal of a configuration in lexicographic order (combinatorial rank).
  std::size_t index_of(const Configuration& c) const;

 private:
  int sites_;
  int particles_;
  std::vector<Configuration> configurations_;
  std::vector<std::vector<std::size_t>> binomial_;  // Pascal table for ranking
};

/// Hopping rate p with q = 1 - p derived. p may be any complex number; the
/// probabilistic invariants only apply for real p in [0, 1].
struct HoppingRate {
  Complex p;
  Complex q() const { return Complex(1.0, 0.0) - p; }
};

struct GeneratorMatrix {
  StateSpace space;
  ComplexMatrix entries;  // column X holds the outflow of state X
  HoppingRate hopping;
};

/// Largest admissible state space; beyond this the dense generator is no
/// longer desk scale.
inline constexpr std::size_t kMaxConfigurations = 5000;

/// All C(L, N) particle configurations, sorted. Throws InvalidDimensions for
/// N < 1 or N > L, TooLarge past kMaxConfigurations.
StateSpace enumerate_states(int sites, int particles);

/// Markov generator of the N-particle ASEP on the ring: entry (X', X) is p
/// when X' is X with one particle moved one site clockwise into a vacancy,
/// q for counter-clockwise, and the diagonal carries minus the total outflow.
GeneratorMatrix build_generator(const StateSpace& space, HoppingRate hopping);

ComplexVector apply_generator(const GeneratorMatrix& gen, const ComplexVector& vector);

Complex trace(const GeneratorMatrix& gen);
Complex trace_squared(const GeneratorMatrix& gen);  // trace of H^2

}  // namespace betheasep::asep
