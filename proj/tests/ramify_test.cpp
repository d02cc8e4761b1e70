#include <doctest.h>

#include <cmath>

#include "betheasep/ramify.hpp"
#include "betheasep/spectrum.hpp"
#include "test_util.hpp"

using namespace betheasep;
using namespace betheasep::ramify;

namespace {

const HoppingRate kP07{0.7};

// H(t) = [[t, 1], [0, -t]]: eigenvalues +-t collide at t = 0 with
// analytically scaled eigenvectors (1, 0) and (1, -2t).
const std::function<numerics::ComplexMatrix(Complex)> kToyMatrix = [](Complex t) {
  numerics::ComplexMatrix h(2, 2);
  h(0, 0) = t;
  h(0, 1) = 1.0;
  h(1, 1) = -t;
  return h;
};

SpectralBranch toy_branch_plus() {
  return {[](Complex t) { return t; }, [](Complex) { return ComplexVector{1.0, 0.0}; }};
}

SpectralBranch toy_branch_minus() {
  return {[](Complex t) { return -t; },
          [](Complex t) { return ComplexVector{1.0, -2.0 * t}; }};
}

}  // namespace

TEST_CASE("track_path: constant path returns identical samples") {
  const auto samples = track_path(4, 2, Complex(0.7), Complex(0.7), 3);
  REQUIRE(samples.size() == 4);
  for (const auto& s : samples) {
    CHECK(s.p == Complex(0.7));
    CHECK(s.roots.raw_total() == 16);
    for (std::size_t r = 0; r < s.roots.roots.size(); ++r) {
      const auto& a = samples.front().roots.roots[r].first.xi;
      const auto& b = s.roots.roots[r].first.xi;
      for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-10);
    }
  }
}

TEST_CASE("track_path: N=1 roots are independent of p") {
  const auto samples = track_path(5, 1, Complex(0.3), Complex(0.8), 7);
  const double gap0 = samples.front().min_pairwise_gap;
  for (const auto& s : samples) {
    CHECK(s.roots.count(bethe::AdmissibilityTag::Admissible) == 5);
    CHECK(std::abs(s.min_pairwise_gap - gap0) < 1e-9);
    for (const auto& [root, adm] : s.roots.roots)
      if (adm.tag == bethe::AdmissibilityTag::Admissible)
        CHECK(std::abs(std::pow(root.xi[0], 5) - 1.0) < 1e-9);
  }
}

TEST_CASE("track_path: N=2 count conservation along a real path") {
  // 15 intervals keep every sample clear of p = 1/2
  const auto samples = track_path(4, 2, Complex(0.9), Complex(0.1), 15);
  REQUIRE(samples.size() == 16);
  for (const auto& s : samples)
    CHECK(s.roots.count(bethe::AdmissibilityTag::Admissible) == 12);
}

TEST_CASE("track_path rejects samples on the excluded points") {
  // 16 intervals from 0.9 to 0.1 land exactly on p = 1/2
  CHECK_THROWS_AS(track_path(4, 2, Complex(0.9), Complex(0.1), 16), InvalidHoppingRate);
}

TEST_CASE("find_ramification: N=1 never ramifies") {
  const ScanReport report = find_ramification(5, 1, {0.1, 0.9, -0.2, 0.2}, 7);
  CHECK(report.events.empty());
  CHECK(report.min_gap_over_grid > 1e-3);
}

TEST_CASE("find_ramification: N=2, L=4 events in the default region") {
  const ScanReport report = find_ramification(4, 2, {}, 41);
  REQUIRE(!report.events.empty());
  for (const auto& e : report.events) {
    CHECK(e.gap_at_detection < 1e-6);
    CHECK(e.sector_resultant < 1e-8);  // discriminant oracle
    CHECK(e.colliding_indices.size() == 2);
  }
  // the known real ramification points of the eps = -1 sector
  bool near_low = false, near_high = false;
  for (const auto& e : report.events) {
    if (std::abs(e.p_r - Complex(0.3232233)) < 1e-3) near_low = true;
    if (std::abs(e.p_r - Complex(0.6767767)) < 1e-3) near_high = true;
  }
  CHECK(near_low);
  CHECK(near_high);
}

TEST_CASE("perturbing away from a ramification point restores the gap") {
  const ScanReport report = find_ramification(4, 2, {}, 41);
  REQUIRE(!report.events.empty());
  const Complex p_r = report.events.front().p_r;
  const bethe::SolutionSet classes = bethe::dedup_up_to_permutation(
      bethe::solve_two_particle(4, HoppingRate{p_r + Complex(1e-2, 0.0)}), 1e-9);
  double gap = 1e300;
  for (std::size_t i = 0; i < classes.roots.size(); ++i)
    for (std::size_t j = i + 1; j < classes.roots.size(); ++j)
      gap = std::min(gap, bethe::multiset_distance(classes.roots[i].first.xi,
                                                   classes.roots[j].first.xi));
  CHECK(gap > 1e-3);
}

TEST_CASE("jordan_chain_from_family recovers the toy Jordan block") {
  const JordanChain chain =
      jordan_chain_from_family(kToyMatrix, toy_branch_plus(), toy_branch_minus(), 0.0);
  // (H - E) g = c v with c = 1: the off-diagonal of the Jordan block
  CHECK(std::abs(chain.coupling - 1.0) <= 1e-6);
  CHECK(chain.first_order_residual <= 1e-10);
  CHECK(chain.second_order_residual <= 1e-10);
  CHECK(std::abs(chain.eigenvalue) <= 1e-12);
}

TEST_CASE("jordan_chain_from_family flags branches that never split") {
  const SpectralBranch same_val{[](Complex t) { return t; },
                                [](Complex) { return ComplexVector{1.0, 0.0}; }};
  const SpectralBranch same_val2{[](Complex t) { return t; },
                                 [](Complex t) { return ComplexVector{1.0, t}; }};
  CHECK_THROWS_AS(
      jordan_chain_from_family(kToyMatrix, same_val, same_val2, 0.0),
      ChainDegenerate);
}

TEST_CASE("jordan_chain at a real N=2 ramification event") {
  const ScanReport report = find_ramification(4, 2, {}, 41);
  REQUIRE(!report.events.empty());
  const JordanChain chain = jordan_chain(4, report.events.front());
  CHECK(chain.first_order_residual <= 1e-4);
  CHECK(chain.second_order_residual <= 1e-6);
  CHECK(std::abs(chain.coupling) > 1e-6);

  // rank-2 nilpotency witness: applying (H - E) twice collapses the norm by
  // four orders relative to one application
  {
    const asep::StateSpace space = asep::enumerate_states(4, 2);
    const auto h =
        asep::build_generator(space, HoppingRate{report.events.front().p_r}).entries;
    auto shifted = [&](const ComplexVector& x) {
      ComplexVector y = numerics::matvec(h, x);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= chain.eigenvalue * x[i];
      return y;
    };
    const ComplexVector once = shifted(chain.generalized_vector);
    const ComplexVector twice = shifted(once);
    CHECK(numerics::inf_norm(twice) <= 1e-4 * numerics::inf_norm(once));
  }

  // Richardson consistency: the default-step chain and the half-step chain
  // agree within 1e-3 (the construction has no scale freedom, so compare raw
  // relative to the vector size)
  ChainOptions halved;
  halved.step = 5e-5;
  const JordanChain c2 = jordan_chain(4, report.events.front(), halved);
  const double scale = numerics::inf_norm(chain.generalized_vector);
  for (std::size_t i = 0; i < chain.generalized_vector.size(); ++i)
    CHECK(std::abs(chain.generalized_vector[i] - c2.generalized_vector[i]) <= 1e-3 * scale);
}

TEST_CASE("jordan_chain rejects larger clusters") {
  RamificationEvent event;
  event.p_r = 0.7;
  event.colliding_indices = {0, 1, 2};
  CHECK_THROWS_AS(jordan_chain(4, event), ClusterTooLarge);
}
