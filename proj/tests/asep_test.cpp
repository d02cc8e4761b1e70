#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "betheasep/asep.hpp"
#include "test_util.hpp"

using namespace betheasep;
using namespace betheasep::asep;

TEST_CASE("enumerate_states basic censuses") {
  const StateSpace s42 = enumerate_states(4, 2);
  CHECK(s42.size() == 6);
  CHECK(s42.at(0).occupied_sites == std::vector<int>{1, 2});
  CHECK(s42.at(5).occupied_sites == std::vector<int>{3, 4});

  CHECK(enumerate_states(3, 1).size() == 3);
  CHECK(enumerate_states(5, 3).size() == 10);
}

TEST_CASE("enumerate_states index map inverts positional lookup") {
  const StateSpace s = enumerate_states(7, 3);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.index_of(s.at(i)) == i);
}

TEST_CASE("enumerate_states rejects bad dimensions and oversize spaces") {
  CHECK_THROWS_AS(enumerate_states(2, 3), InvalidDimensions);
  CHECK_THROWS_AS(enumerate_states(4, 0), InvalidDimensions);
  CHECK_THROWS_AS(enumerate_states(20, 10), TooLarge);  // C(20,10) = 184756
}

TEST_CASE("build_generator smallest rings by hand") {
  const HoppingRate hopping{0.7};

  // L=2, N=1: both hop directions from each site land on the single other
  // site, so rates add to p + q = 1
  const GeneratorMatrix g21 = build_generator(enumerate_states(2, 1), hopping);
  CHECK(std::abs(g21.entries(0, 0) + 1.0) < 1e-15);
  CHECK(std::abs(g21.entries(1, 0) - 1.0) < 1e-15);
  CHECK(std::abs(g21.entries(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(g21.entries(1, 1) + 1.0) < 1e-15);

  // full ring: no vacancies, no moves
  const GeneratorMatrix full = build_generator(enumerate_states(3, 3), hopping);
  CHECK(full.entries.max_magnitude() == 0.0);

  // L=3, N=1: circulant, p clockwise, q counter-clockwise
  const GeneratorMatrix g31 = build_generator(enumerate_states(3, 1), hopping);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(g31.entries(j, j) + 1.0) < 1e-15);
    CHECK(std::abs(g31.entries((j + 1) % 3, j) - 0.7) < 1e-15);
    CHECK(std::abs(g31.entries((j + 2) % 3, j) - 0.3) < 1e-15);
  }
}

TEST_CASE("apply_generator") {
  const HoppingRate hopping{0.7};
  const GeneratorMatrix gen = build_generator(enumerate_states(5, 2), hopping);

  const ComplexVector zero(gen.space.size(), 0.0);
  CHECK(numerics::inf_norm(apply_generator(gen, zero)) == 0.0);

  // uniform stationarity on the ring
  const ComplexVector ones(gen.space.size(), 1.0);
  CHECK(numerics::inf_norm(apply_generator(gen, ones)) <= 1e-12);

  const GeneratorMatrix g21 = build_generator(enumerate_states(2, 1), hopping);
  const ComplexVector hu = apply_generator(g21, {1.0, 0.0});
  CHECK(std::abs(hu[0] + 1.0) < 1e-15);
  CHECK(std::abs(hu[1] - 1.0) < 1e-15);

  CHECK_THROWS_AS(apply_generator(gen, {1.0}), DimensionMismatch);
}

namespace {

int movable_pairs(const StateSpace& space, std::size_t index) {
  // particles with an empty clockwise neighbor; equals the count of
  // occupied-empty adjacencies around the ring
  const auto& sites = space.at(index).occupied_sites;
  std::vector<char> occ(space.sites() + 1, 0);
  for (int s : sites) occ[s] = 1;
  int count = 0;
  for (int s : sites)
    if (!occ[s % space.sites() + 1]) ++count;
  return count;
}

}  // namespace

TEST_CASE("generator structure for real hopping rates") {
  for (double p : {0.3, 0.7, 0.9}) {
    const HoppingRate hopping{p};
    const StateSpace space = enumerate_states(6, 3);
    const GeneratorMatrix gen = build_generator(space, hopping);
    const double q = 1.0 - p;

    Complex trace_direct = 0.0;
    int total_movable = 0;
    for (std::size_t col = 0; col < space.size(); ++col) {
      Complex colsum = 0.0;
      for (std::size_t row = 0; row < space.size(); ++row) {
        const Complex e = gen.entries(row, col);
        colsum += e;
        if (row != col && std::abs(e) > 0.0)
          CHECK((std::abs(e - p) < 1e-15 || std::abs(e - q) < 1e-15 ||
                 std::abs(e - 1.0) < 1e-15));
      }
      CHECK(std::abs(colsum) <= 1e-12);
      const int m = movable_pairs(space, col);
      // ring symmetry: right- and left-movable counts agree
      CHECK(std::abs(gen.entries(col, col) + double(m) * (p + q)) < 1e-13);
      trace_direct += gen.entries(col, col);
      total_movable += m;
    }
    CHECK(std::abs(trace(gen) - trace_direct) < 1e-12);
    CHECK(std::abs(trace(gen).imag()) < 1e-14);
    CHECK(std::abs(trace(gen).real() + double(total_movable)) < 1e-11);
  }
}

TEST_CASE("generator commutes with the cyclic site shift") {
  const HoppingRate hopping{Complex(0.7, 0.1)};
  const StateSpace space = enumerate_states(5, 2);
  const GeneratorMatrix gen = build_generator(space, hopping);
  const int L = space.sites();

  // permutation on states induced by shifting every site by one
  std::vector<std::size_t> shift(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    Configuration c = space.at(i);
    for (int& s : c.occupied_sites) s = s % L + 1;
    std::sort(c.occupied_sites.begin(), c.occupied_sites.end());
    shift[i] = space.index_of(c);
  }
  // exact entry equality after conjugation by the shift permutation
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = 0; j < space.size(); ++j)
      CHECK(gen.entries(shift[i], shift[j]) == gen.entries(i, j));
}
