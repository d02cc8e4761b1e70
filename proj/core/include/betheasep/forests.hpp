#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "betheasep/types.hpp"

namespace betheasep::forests {

using BigInt = mpz_class;

/// Exact integer-coefficient polynomial in the formal ring-size variable L,
/// ascending coefficients, normalized (no trailing zero coefficients).
class CountPolynomial {
 public:
  CountPolynomial() = default;
  explicit CountPolynomial(std::vector<BigInt> ascending_coefficients);
  static CountPolynomial monomial(int degree, BigInt coefficient = 1);

  int degree() const { return int(coeffs_.size()) - 1; }  // -1 for the zero polynomial
  bool is_zero() const { return coeffs_.empty(); }
  const BigInt& coefficient(int k) const;
  const std::vector<BigInt>& coefficients() const { return coeffs_; }

  void add_term(int degree, const BigInt& coefficient);
  CountPolynomial& operator+=(const CountPolynomial& other);
  CountPolynomial& operator-=(const CountPolynomial& other);
  CountPolynomial operator*(const CountPolynomial& other) const;
  CountPolynomial operator*(const BigInt& scalar) const;
  bool operator==(const CountPolynomial& other) const = default;

  BigInt evaluate(const BigInt& value) const;
  /// Descending-power display, e.g. "L^3 - 3L^2 + 2L".
  std::string pretty() const;

 private:
  void normalize();
  std::vector<BigInt> coeffs_;
};

inline CountPolynomial operator+(CountPolynomial a, const CountPolynomial& b) {
  a += b;
  return a;
}
inline CountPolynomial operator-(CountPolynomial a, const CountPolynomial& b) {
  a -= b;
  return a;
}

/// prod_{k=0}^{N-1} (L - k) as an exact polynomial.
CountPolynomial falling_factorial(int n);

struct ForestVertex {
  std::string label;
  int size = 1;            // #(v): cardinality of the underlying set
  bool root_only = false;  // vertex may never have a parent
};

/// Planted forest over a fixed vertex list: parent[v] is the vertex index of
/// v's parent, or -1 when v is a root. Edges are oriented away from roots.
struct PlantedForest {
  std::vector<int> parent;

  int components() const;
  std::vector<int> roots() const;
  std::vector<std::pair<int, int>> edges() const;  // (parent, child)
};

/// Streams every planted forest on the given vertices (root_only vertices
/// are forced to be roots). Throws TooLarge past 8 vertices.
void for_each_planted_forest(const std::vector<ForestVertex>& vertices,
                             const std::function<void(const PlantedForest&)>& fn);

/// Materialized variant of for_each_planted_forest.
std::vector<PlantedForest> enumerate_planted_forests(const std::vector<ForestVertex>& vertices);

/// m(f) = product over edges (a, b) of #(a), the size of the parent vertex.
BigInt multiplicity(const std::vector<ForestVertex>& vertices, const PlantedForest& forest);

/// Lefschetz coincidence total: sum over planted forests on [N] of L^{n(f)}.
/// N <= 7.
CountPolynomial lefschetz_total(int n);

/// One (B, B-bar) condition pair: elements pinned to zeros resp. poles. Both
/// parts are non-empty (the reading that reproduces the two-particle count
/// and the falling factorial; a one-sided reading over-counts).
struct BTriple {
  std::vector<int> zeros;  // B
  std::vector<int> poles;  // B-bar

  bool operator==(const BTriple&) const = default;
};

/// Partition of [N] into coincidence sets (a_sets) and zero/pole pairs.
struct EnhancedPartition {
  std::vector<std::vector<int>> a_sets;
  std::vector<BTriple> b_triples;

  bool operator==(const EnhancedPartition&) const = default;
  bool is_trivial(int n) const;  // all singletons in a_sets, no b_triples
};

/// All enhanced partitions of [N] (including the trivial one). N <= 7.
std::vector<EnhancedPartition> enumerate_enhanced_partitions(int n);

/// omega(A, B) = prod over blocks of (-1)^{|S|-1} (|S|-1)!.
long weight(const EnhancedPartition& partition);

/// lambda(A, B) = sum over forests on the blocks (B-blocks root-only) of
/// m(f) L^{n(f)}.
CountPolynomial lambda_count(const EnhancedPartition& partition);

/// Labeled variant: exponent n(f) - |B| (per-label count).
CountPolynomial lambda_count_labeled(const EnhancedPartition& partition);

/// Inclusion-exclusion total sum_{(A,B)} omega * lambda. Checked against the
/// falling factorial; a mismatch throws IdentityViolation. N <= 6.
CountPolynomial admissible_count(int n);

/// Signed Stirling numbers of the first kind.
BigInt stirling_first(int n, int k);

/// Sum of omega over all enhanced partitions >= base in the refinement
/// order (each set-partition refinement of base's merged blocks maps to a
/// unique enhanced partition; blocks inside the zero-support become a_sets).
/// 1 for the trivial base, 0 otherwise. N <= 6.
long weight_sum_check(const EnhancedPartition& base, int n);

/// The two-particle inadmissibility table: per-condition counts over the L
/// zero/pole labels, assembled from the labeled solution structure (a zero
/// condition on one component forces the matching pole on the other, so a
/// single condition and the matched pair both count 1 per label while
/// mismatched pairs count 0).
struct TwoParticleInadmissibleReport {
  CountPolynomial coincident;       // lambda(xi1 = xi2) = L
  CountPolynomial single_condition; // per label, each of the four single conditions = 1
  CountPolynomial matched_pair;     // per label, (alpha_i, beta_i) = 1; mismatches are 0
  CountPolynomial total;            // inclusion-exclusion: L + 4L - 2L = 3L
};
TwoParticleInadmissibleReport two_particle_inadmissible_report();

struct InvolutionReport {
  int n = 0;
  std::uint64_t object_count = 0;
  std::uint64_t survivor_count = 0;
  std::uint64_t cancelled_count = 0;
  CountPolynomial survivor_total;
  CountPolynomial grand_total;
  bool passed = false;
};

/// Exhaustive check of the sign-reversing involution on cycle-labeled
/// forests (vertices = cycles of a permutation, edge labels from the parent
/// cycle, roots carry non-empty marked subsets of their cycle). Fully-marked
/// objects survive and total sum_k s(N,k) L^k; everything else cancels in
/// pairs under the contract/extend move on the smallest unmarked element.
/// Throws InvolutionBroken with a counterexample on any violation. N <= 5.
InvolutionReport involution_check(int n);

}  // namespace betheasep::forests
