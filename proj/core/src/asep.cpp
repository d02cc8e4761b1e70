#include "betheasep/asep.hpp"

#include <algorithm>

namespace betheasep::asep {

namespace {

std::vector<std::vector<std::size_t>> pascal_table(int n) {
  std::vector<std::vector<std::size_t>> c(n + 1);
  for (int i = 0; i <= n; ++i) {
    c[i].assign(i + 1, 1);
    for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

}  // namespace

StateSpace::StateSpace(int sites, int particles, std::vector<Configuration> configurations)
    : sites_(sites),
      particles_(particles),
      configurations_(std::move(configurations)),
      binomial_(pascal_table(sites)) {}

std::size_t StateSpace::index_of(const Configuration& c) const {
  // Count strictly-increasing N-tuples lexicographically before c.
  std::size_t rank = 0;
  int prev = 0;
  const int n = particles_;
  for (int i = 0; i < n; ++i) {
    for (int v = prev + 1; v < c.occupied_sites[i]; ++v) {
      const int remaining = sites_ - v;
      const int need = n - i - 1;
      if (need <= remaining) rank += binomial_[remaining][need];
    }
    prev = c.occupied_sites[i];
  }
  return rank;
}

StateSpace enumerate_states(int sites, int particles) {
  if (particles < 1 || particles > sites)
    throw InvalidDimensions("enumerate_states: need 1 <= N <= L");
  // C(L, N) with overflow-free early cap check
  std::size_t count = 1;
  for (int i = 0; i < particles; ++i) {
    count = count * std::size_t(sites - i) / std::size_t(i + 1);
    if (count > 100 * kMaxConfigurations) break;
  }
  if (count > kMaxConfigurations)
    throw TooLarge("enumerate_states: C(L,N) exceeds the 5000-configuration cap");

  std::vector<Configuration> configs;
  configs.reserve(count);
  std::vector<int> cur(particles);
  for (int i = 0; i < particles; ++i) cur[i] = i + 1;
  while (true) {
    configs.push_back({cur});
    int i = particles - 1;
    while (i >= 0 && cur[i] == sites - (particles - 1 - i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < particles; ++j) cur[j] = cur[j - 1] + 1;
  }
  return StateSpace(sites, particles, std::move(configs));
}

GeneratorMatrix build_generator(const StateSpace& space, HoppingRate hopping) {
  const std::size_t m = space.size();
  const int L = space.sites();
  ComplexMatrix h(m, m);
  const Complex p = hopping.p;
  const Complex q = hopping.q();

  std::vector<char> occupied(L + 1);
  for (std::size_t col = 0; col < m; ++col) {
    const auto& sites = space.at(col).occupied_sites;
    std::fill(occupied.begin(), occupied.end(), 0);
    for (int s : sites) occupied[s] = 1;
    int right_moves = 0, left_moves = 0;
    for (int s : sites) {
      const int right = s % L + 1;
      const int left = (s + L - 2) % L + 1;
      if (!occupied[right]) {
        Configuration target = space.at(col);
        std::replace(target.occupied_sites.begin(), target.occupied_sites.end(), s, right);
        std::sort(target.occupied_sites.begin(), target.occupied_sites.end());
        h(space.index_of(target), col) += p;
        ++right_moves;
      }
      if (!occupied[left]) {
        Configuration target = space.at(col);
        std::replace(target.occupied_sites.begin(), target.occupied_sites.end(), s, left);
        std::sort(target.occupied_sites.begin(), target.occupied_sites.end());
        h(space.index_of(target), col) += q;
        ++left_moves;
      }
    }
    // diagonal as counts times rates, so translated configurations get
    // bit-identical entries
    h(col, col) = -(double(right_moves) * p + double(left_moves) * q);
  }
  return GeneratorMatrix{space, std::move(h), hopping};
}

ComplexVector apply_generator(const GeneratorMatrix& gen, const ComplexVector& vector) {
  if (vector.size() != gen.space.size())
    throw DimensionMismatch("apply_generator: vector length != C(L,N)");
  return numerics::matvec(gen.entries, vector);
}

Complex trace(const GeneratorMatrix& gen) {
  Complex t = 0.0;
  for (std::size_t i = 0; i < gen.entries.rows(); ++i) t += gen.entries(i, i);
  return t;
}

Complex trace_squared(const GeneratorMatrix& gen) {
  const auto& h = gen.entries;
  Complex t = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) t += h(i, j) * h(j, i);
  return t;
}

}  // namespace betheasep::asep
