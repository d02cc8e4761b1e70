#include "betheasep/forests.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace betheasep::forests {

// --- CountPolynomial ---------------------------------------------------

CountPolynomial::CountPolynomial(std::vector<BigInt> ascending) : coeffs_(std::move(ascending)) {
  normalize();
}

CountPolynomial CountPolynomial::monomial(int degree, BigInt coefficient) {
  std::vector<BigInt> c(degree + 1, 0);
  c[degree] = std::move(coefficient);
  return CountPolynomial(std::move(c));
}

void CountPolynomial::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const BigInt& CountPolynomial::coefficient(int k) const {
  static const BigInt zero = 0;
  if (k < 0 || k >= int(coeffs_.size())) return zero;
  return coeffs_[k];
}

void CountPolynomial::add_term(int degree, const BigInt& coefficient) {
  if (degree >= int(coeffs_.size())) coeffs_.resize(degree + 1, 0);
  coeffs_[degree] += coefficient;
  normalize();
}

CountPolynomial& CountPolynomial::operator+=(const CountPolynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  normalize();
  return *this;
}

CountPolynomial& CountPolynomial::operator-=(const CountPolynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  normalize();
  return *this;
}

CountPolynomial CountPolynomial::operator*(const CountPolynomial& other) const {
  if (is_zero() || other.is_zero()) return {};
  std::vector<BigInt> c(coeffs_.size() + other.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * other.coeffs_[j];
  return CountPolynomial(std::move(c));
}

CountPolynomial CountPolynomial::operator*(const BigInt& scalar) const {
  std::vector<BigInt> c = coeffs_;
  for (BigInt& v : c) v *= scalar;
  return CountPolynomial(std::move(c));
}

BigInt CountPolynomial::evaluate(const BigInt& value) const {
  BigInt acc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * value + coeffs_[i];
  return acc;
}

std::string CountPolynomial::pretty() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const BigInt& c = coeffs_[k];
    if (c == 0) continue;
    const BigInt mag = abs(c);
    if (first) {
      if (c < 0) out << "-";
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    const bool unit = (mag == 1);
    if (k == 0) {
      out << mag.get_str();
    } else {
      if (!unit) out << mag.get_str();
      out << (k == 1 ? "L" : "L^" + std::to_string(k));
    }
  }
  return out.str();
}

CountPolynomial falling_factorial(int n) {
  CountPolynomial result = CountPolynomial::monomial(0, 1);
  for (int k = 0; k < n; ++k) {
    CountPolynomial factor({BigInt(-k), BigInt(1)});  // L - k
    result = result * factor;
  }
  return result;
}

// --- planted forests ----------------------------------------------------

int PlantedForest::components() const {
  int c = 0;
  for (int p : parent) c += (p < 0);
  return c;
}

std::vector<int> PlantedForest::roots() const {
  std::vector<int> r;
  for (std::size_t v = 0; v < parent.size(); ++v)
    if (parent[v] < 0) r.push_back(int(v));
  return r;
}

std::vector<std::pair<int, int>> PlantedForest::edges() const {
  std::vector<std::pair<int, int>> e;
  for (std::size_t v = 0; v < parent.size(); ++v)
    if (parent[v] >= 0) e.emplace_back(parent[v], int(v));
  return e;
}

namespace {

constexpr int kUnassigned = -2;

void forest_rec(int v, int n, const std::vector<ForestVertex>& vertices,
                std::vector<int>& parent, const std::function<void(const PlantedForest&)>& fn) {
  if (v == n) {
    fn(PlantedForest{parent});
    return;
  }
  parent[v] = -1;
  forest_rec(v + 1, n, vertices, parent, fn);
  if (!vertices[v].root_only) {
    for (int u = 0; u < n; ++u) {
      if (u == v) continue;
      // reject if u's assigned ancestor chain comes back to v
      bool cycle = false;
      int w = u;
      while (true) {
        if (w == v) { cycle = true; break; }
        const int pw = parent[w];
        if (pw == kUnassigned || pw < 0) break;
        w = pw;
      }
      if (cycle) continue;
      parent[v] = u;
      forest_rec(v + 1, n, vertices, parent, fn);
    }
  }
  parent[v] = kUnassigned;
}

}  // namespace

void for_each_planted_forest(const std::vector<ForestVertex>& vertices,
                             const std::function<void(const PlantedForest&)>& fn) {
  const int n = int(vertices.size());
  if (n > 8) throw TooLarge("for_each_planted_forest: more than 8 vertices");
  if (n == 0) return;
  std::vector<int> parent(n, kUnassigned);
  forest_rec(0, n, vertices, parent, fn);
}

std::vector<PlantedForest> enumerate_planted_forests(const std::vector<ForestVertex>& vertices) {
  std::vector<PlantedForest> out;
  for_each_planted_forest(vertices, [&](const PlantedForest& f) { out.push_back(f); });
  return out;
}

BigInt multiplicity(const std::vector<ForestVertex>& vertices, const PlantedForest& forest) {
  BigInt m = 1;
  for (std::size_t v = 0; v < forest.parent.size(); ++v)
    if (forest.parent[v] >= 0) m *= vertices[forest.parent[v]].size;
  return m;
}

CountPolynomial lefschetz_total(int n) {
  if (n < 1 || n > 7) throw TooLarge("lefschetz_total: need 1 <= N <= 7");
  std::vector<ForestVertex> vertices(n);
  for (int i = 0; i < n; ++i) vertices[i] = {std::to_string(i + 1), 1, false};
  CountPolynomial total;
  for_each_planted_forest(vertices,
                          [&](const PlantedForest& f) { total.add_term(f.components(), 1); });
  return total;
}

// --- enhanced partitions -------------------------------------------------

bool EnhancedPartition::is_trivial(int n) const {
  if (!b_triples.empty() || int(a_sets.size()) != n) return false;
  for (const auto& a : a_sets)
    if (a.size() != 1) return false;
  return true;
}

namespace {

// Set partitions of `elements`, blocks ordered by smallest member.
void partitions_rec(const std::vector<int>& elements, std::size_t index,
                    std::vector<std::vector<int>>& blocks,
                    const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
  if (index == elements.size()) {
    fn(blocks);
    return;
  }
  const int e = elements[index];
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    blocks[b].push_back(e);
    partitions_rec(elements, index + 1, blocks, fn);
    blocks[b].pop_back();
  }
  blocks.push_back({e});
  partitions_rec(elements, index + 1, blocks, fn);
  blocks.pop_back();
}

void for_each_set_partition(const std::vector<int>& elements,
                            const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
  std::vector<std::vector<int>> blocks;
  partitions_rec(elements, 0, blocks, fn);
}

// All ways of typing the blocks of one partition: each block is an A-set or,
// when it has >= 2 elements, an ordered (B, B-bar) split with both parts
// non-empty.
void type_blocks_rec(const std::vector<std::vector<int>>& blocks, std::size_t index,
                     EnhancedPartition& current,
                     const std::function<void(const EnhancedPartition&)>& fn) {
  if (index == blocks.size()) {
    fn(current);
    return;
  }
  const std::vector<int>& block = blocks[index];
  current.a_sets.push_back(block);
  type_blocks_rec(blocks, index + 1, current, fn);
  current.a_sets.pop_back();

  const int m = int(block.size());
  if (m >= 2) {
    for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
      BTriple t;
      for (int b = 0; b < m; ++b)
        (mask >> b & 1u ? t.zeros : t.poles).push_back(block[b]);
      current.b_triples.push_back(std::move(t));
      type_blocks_rec(blocks, index + 1, current, fn);
      current.b_triples.pop_back();
    }
  }
}

void for_each_enhanced_partition(int n, const std::function<void(const EnhancedPartition&)>& fn) {
  std::vector<int> elements(n);
  std::iota(elements.begin(), elements.end(), 1);
  for_each_set_partition(elements, [&](const std::vector<std::vector<int>>& blocks) {
    EnhancedPartition ep;
    type_blocks_rec(blocks, 0, ep, fn);
  });
}

long block_weight(std::size_t size) {
  long w = (size % 2 == 1) ? 1 : -1;  // (-1)^{|S|-1}
  for (std::size_t i = 2; i < size; ++i) w *= (long)(i);
  return w;
}

}  // namespace

std::vector<EnhancedPartition> enumerate_enhanced_partitions(int n) {
  if (n < 1 || n > 7) throw TooLarge("enumerate_enhanced_partitions: need 1 <= N <= 7");
  std::vector<EnhancedPartition> out;
  for_each_enhanced_partition(n, [&](const EnhancedPartition& ep) { out.push_back(ep); });
  return out;
}

long weight(const EnhancedPartition& partition) {
  long w = 1;
  for (const auto& a : partition.a_sets) w *= block_weight(a.size());
  for (const auto& t : partition.b_triples) w *= block_weight(t.zeros.size() + t.poles.size());
  return w;
}

namespace {

std::vector<ForestVertex> partition_vertices(const EnhancedPartition& partition) {
  std::vector<ForestVertex> vertices;
  for (const auto& a : partition.a_sets) vertices.push_back({"A", int(a.size()), false});
  for (const auto& t : partition.b_triples)
    vertices.push_back({"B", int(t.zeros.size() + t.poles.size()), true});
  return vertices;
}

}  // namespace

CountPolynomial lambda_count(const EnhancedPartition& partition) {
  const auto vertices = partition_vertices(partition);
  CountPolynomial total;
  for_each_planted_forest(vertices, [&](const PlantedForest& f) {
    total.add_term(f.components(), multiplicity(vertices, f));
  });
  return total;
}

CountPolynomial lambda_count_labeled(const EnhancedPartition& partition) {
  const auto vertices = partition_vertices(partition);
  const int b = int(partition.b_triples.size());
  CountPolynomial total;
  for_each_planted_forest(vertices, [&](const PlantedForest& f) {
    total.add_term(f.components() - b, multiplicity(vertices, f));
  });
  return total;
}

CountPolynomial admissible_count(int n) {
  if (n < 1 || n > 6) throw TooLarge("admissible_count: need 1 <= N <= 6");
  CountPolynomial total;
  for_each_enhanced_partition(n, [&](const EnhancedPartition& ep) {
    total += lambda_count(ep) * BigInt(weight(ep));
  });
  if (!(total == falling_factorial(n)))
    throw IdentityViolation("admissible_count: inclusion-exclusion total " + total.pretty() +
                            " != falling factorial " + falling_factorial(n).pretty());
  return total;
}

BigInt stirling_first(int n, int k) {
  if (k < 0 || k > n) throw InvalidDimensions("stirling_first: need 0 <= k <= n");
  std::vector<std::vector<BigInt>> s(n + 1);
  for (int i = 0; i <= n; ++i) {
    s[i].assign(i + 1, 0);
    if (i == 0) { s[0][0] = 1; continue; }
    for (int j = 1; j <= i; ++j)
      s[i][j] = (j <= i - 1 ? -BigInt(i - 1) * s[i - 1][j] : BigInt(0)) +
                (j - 1 <= i - 1 ? s[i - 1][j - 1] : BigInt(0));
  }
  return s[n][k];
}

long weight_sum_check(const EnhancedPartition& base, int n) {
  if (n < 1 || n > 6) throw TooLarge("weight_sum_check: need 1 <= N <= 6");
  // merged blocks of the base, and the zero-support B'
  std::vector<std::vector<int>> blocks = base.a_sets;
  std::vector<bool> in_bprime(n + 1, false);
  for (const auto& t : base.b_triples) {
    std::vector<int> merged = t.zeros;
    merged.insert(merged.end(), t.poles.begin(), t.poles.end());
    std::sort(merged.begin(), merged.end());
    blocks.push_back(std::move(merged));
    for (int e : t.zeros) in_bprime[e] = true;
  }

  // walk the cartesian product of per-block set partitions
  long total = 0;
  std::vector<std::vector<std::vector<int>>> refinement(blocks.size());
  const std::function<void(std::size_t)> rec = [&](std::size_t index) {
    if (index == blocks.size()) {
      EnhancedPartition mapped;
      for (const auto& part : refinement)
        for (const auto& s : part) {
          bool any = false, all = true;
          for (int e : s) {
            if (in_bprime[e]) any = true;
            else all = false;
          }
          if (!any || all) {
            mapped.a_sets.push_back(s);
          } else {
            BTriple t;
            for (int e : s) (in_bprime[e] ? t.zeros : t.poles).push_back(e);
            mapped.b_triples.push_back(std::move(t));
          }
        }
      total += weight(mapped);
      return;
    }
    for_each_set_partition(blocks[index], [&](const std::vector<std::vector<int>>& part) {
      refinement[index] = part;
      rec(index + 1);
    });
  };
  rec(0);
  return total;
}

TwoParticleInadmissibleReport two_particle_inadmissible_report() {
  TwoParticleInadmissibleReport report;
  const EnhancedPartition merged{{{1, 2}}, {}};
  const EnhancedPartition zero_pole{{}, {BTriple{{1}, {2}}}};
  report.coincident = lambda_count(merged);
  report.single_condition = lambda_count_labeled(zero_pole);
  report.matched_pair = lambda_count_labeled(zero_pole);
  const CountPolynomial ell = CountPolynomial::monomial(1);  // sum over the L labels
  report.total = report.coincident + ell * report.single_condition * BigInt(4) -
                 ell * report.matched_pair * BigInt(2);
  return report;
}

// --- sign-reversing involution -------------------------------------------

namespace {

// A forest on the cycles of a permutation: edge labels come from the parent
// cycle, every root carries a non-empty marked subset of its own cycle.
struct CycleForest {
  std::vector<std::vector<int>> cycles;  // each rotated smallest-first; sorted by first element
  std::vector<int> parent;               // -1 for roots
  std::vector<int> edge_label;           // element of the parent's cycle; -1 for roots
  std::vector<std::vector<int>> marks;   // sorted; non-empty exactly on roots

  bool operator==(const CycleForest&) const = default;

  int vertex_of(int element) const {
    for (std::size_t v = 0; v < cycles.size(); ++v)
      for (int e : cycles[v])
        if (e == element) return int(v);
    return -1;
  }

  int root_count() const {
    int r = 0;
    for (int p : parent) r += (p < 0);
    return r;
  }

  // 0 when fully marked (a survivor), else the smallest unmarked element
  int smallest_unmarked(int n) const {
    for (int e = 1; e <= n; ++e) {
      const int v = vertex_of(e);
      if (!std::binary_search(marks[v].begin(), marks[v].end(), e)) return e;
    }
    return 0;
  }
};

void canonicalize(CycleForest& obj) {
  for (auto& cyc : obj.cycles) {
    const auto min_it = std::min_element(cyc.begin(), cyc.end());
    std::rotate(cyc.begin(), min_it, cyc.end());
  }
  const std::size_t c = obj.cycles.size();
  std::vector<int> order(c);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return obj.cycles[a][0] < obj.cycles[b][0]; });
  std::vector<int> rank(c);
  for (std::size_t i = 0; i < c; ++i) rank[order[i]] = int(i);

  CycleForest out;
  out.cycles.resize(c);
  out.parent.resize(c);
  out.edge_label.resize(c);
  out.marks.resize(c);
  for (std::size_t i = 0; i < c; ++i) {
    const int old = order[i];
    out.cycles[i] = obj.cycles[old];
    out.parent[i] = obj.parent[old] < 0 ? -1 : rank[obj.parent[old]];
    out.edge_label[i] = obj.edge_label[old];
    out.marks[i] = obj.marks[old];
    std::sort(out.marks[i].begin(), out.marks[i].end());
  }
  obj = std::move(out);
}

bool valid_object(const CycleForest& obj, int n) {
  std::vector<bool> seen(n + 1, false);
  for (const auto& cyc : obj.cycles) {
    if (cyc.empty()) return false;
    for (int e : cyc) {
      if (e < 1 || e > n || seen[e]) return false;
      seen[e] = true;
    }
    if (*std::min_element(cyc.begin(), cyc.end()) != cyc[0]) return false;
  }
  for (int e = 1; e <= n; ++e)
    if (!seen[e]) return false;
  const int c = int(obj.cycles.size());
  if (int(obj.parent.size()) != c || int(obj.edge_label.size()) != c ||
      int(obj.marks.size()) != c)
    return false;
  for (int v = 0; v < c; ++v) {
    if (obj.parent[v] == v || obj.parent[v] >= c || obj.parent[v] < -1) return false;
    // acyclic parent chains
    int w = v, steps = 0;
    while (obj.parent[w] >= 0) {
      w = obj.parent[w];
      if (++steps > c) return false;
    }
    if (obj.parent[v] >= 0) {
      const auto& pc = obj.cycles[obj.parent[v]];
      if (std::find(pc.begin(), pc.end(), obj.edge_label[v]) == pc.end()) return false;
      if (!obj.marks[v].empty()) return false;
    } else {
      if (obj.edge_label[v] != -1) return false;
      if (obj.marks[v].empty()) return false;
      for (int e : obj.marks[v])
        if (std::find(obj.cycles[v].begin(), obj.cycles[v].end(), e) == obj.cycles[v].end())
          return false;
    }
  }
  return true;
}

// Contract/extend on the smallest unmarked element s: a 1-cycle s merges
// into its parent's cycle just after the edge label; an s inside a longer
// cycle is extruded to a new child 1-cycle whose edge carries s's cycle
// predecessor, taking the s-labeled subtrees along.
CycleForest involute(const CycleForest& input, int n) {
  CycleForest obj = input;
  const int s = obj.smallest_unmarked(n);
  if (s == 0) throw InvolutionBroken("involute called on a survivor");
  const int v = obj.vertex_of(s);

  if (obj.cycles[v].size() == 1) {
    const int u = obj.parent[v];
    if (u < 0) throw InvolutionBroken("unmarked root 1-cycle cannot occur");
    const int t = obj.edge_label[v];
    auto& pc = obj.cycles[u];
    const auto t_it = std::find(pc.begin(), pc.end(), t);
    pc.insert(t_it + 1, s);
    for (std::size_t w = 0; w < obj.parent.size(); ++w)
      if (int(w) != v && obj.parent[w] == v) obj.parent[w] = u;
    for (std::size_t w = 0; w < obj.parent.size(); ++w)
      if (obj.parent[w] > v) --obj.parent[w];
    obj.cycles.erase(obj.cycles.begin() + v);
    obj.parent.erase(obj.parent.begin() + v);
    obj.edge_label.erase(obj.edge_label.begin() + v);
    obj.marks.erase(obj.marks.begin() + v);
  } else {
    auto& cyc = obj.cycles[v];
    const auto s_it = std::find(cyc.begin(), cyc.end(), s);
    const std::size_t pos = std::size_t(s_it - cyc.begin());
    const int t = cyc[(pos + cyc.size() - 1) % cyc.size()];
    cyc.erase(s_it);
    const int fresh = int(obj.cycles.size());
    obj.cycles.push_back({s});
    obj.parent.push_back(v);
    obj.edge_label.push_back(t);
    obj.marks.push_back({});
    for (int w = 0; w < fresh; ++w)
      if (obj.parent[w] == v && obj.edge_label[w] == s) obj.parent[w] = fresh;
  }
  canonicalize(obj);
  return obj;
}

}  // namespace

InvolutionReport involution_check(int n) {
  if (n < 1 || n > 5) throw TooLarge("involution_check: need 1 <= N <= 5");
  InvolutionReport report;
  report.n = n;

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);

  do {
    // cycles of the permutation, scanned in ascending order so each cycle
    // starts at its smallest element and cycles sort themselves
    std::vector<std::vector<int>> cycles;
    std::vector<bool> visited(n + 1, false);
    for (int e = 1; e <= n; ++e) {
      if (visited[e]) continue;
      std::vector<int> cyc;
      int w = e;
      while (!visited[w]) {
        visited[w] = true;
        cyc.push_back(w);
        w = perm[w - 1];
      }
      cycles.push_back(std::move(cyc));
    }
    const int c = int(cycles.size());
    const long sign = ((n - c) % 2 == 0) ? 1 : -1;

    std::vector<ForestVertex> vertices(c);
    for (int v = 0; v < c; ++v) vertices[v] = {"", int(cycles[v].size()), false};

    for_each_planted_forest(vertices, [&](const PlantedForest& forest) {
      // enumerate edge labels (elements of the parent cycle) by mixed radix
      std::vector<int> labeled;  // non-root vertices
      for (int v = 0; v < c; ++v)
        if (forest.parent[v] >= 0) labeled.push_back(v);
      std::vector<std::size_t> label_idx(labeled.size(), 0);
      while (true) {
        // enumerate root marks: non-empty subsets of each root cycle
        std::vector<int> root_list;
        for (int v = 0; v < c; ++v)
          if (forest.parent[v] < 0) root_list.push_back(v);
        std::vector<unsigned> mark_mask(root_list.size(), 1);
        while (true) {
          CycleForest obj;
          obj.cycles = cycles;
          obj.parent = forest.parent;
          obj.edge_label.assign(c, -1);
          obj.marks.assign(c, {});
          for (std::size_t i = 0; i < labeled.size(); ++i) {
            const int v = labeled[i];
            obj.edge_label[v] = cycles[forest.parent[v]][label_idx[i]];
          }
          for (std::size_t i = 0; i < root_list.size(); ++i) {
            const int v = root_list[i];
            for (std::size_t b = 0; b < cycles[v].size(); ++b)
              if (mark_mask[i] >> b & 1u) obj.marks[v].push_back(cycles[v][b]);
            std::sort(obj.marks[v].begin(), obj.marks[v].end());
          }
          canonicalize(obj);

          ++report.object_count;
          const int nroots = obj.root_count();
          report.grand_total.add_term(nroots, sign);

          if (obj.smallest_unmarked(n) == 0) {
            ++report.survivor_count;
            report.survivor_total.add_term(nroots, sign);
          } else {
            ++report.cancelled_count;
            const CycleForest partner = involute(obj, n);
            if (!valid_object(partner, n))
              throw InvolutionBroken("involution image invalid at n=" + std::to_string(n));
            if (partner.smallest_unmarked(n) == 0)
              throw InvolutionBroken("involution image is a survivor");
            const int dc = int(partner.cycles.size()) - int(obj.cycles.size());
            if (dc != 1 && dc != -1)
              throw InvolutionBroken("involution does not change the cycle count by one");
            if (partner.root_count() != nroots)
              throw InvolutionBroken("involution changed the root count");
            if (!(involute(partner, n) == obj))
              throw InvolutionBroken("involution does not square to the identity");
          }

          // advance marks
          std::size_t k = 0;
          for (; k < root_list.size(); ++k) {
            const unsigned full = (1u << cycles[root_list[k]].size()) - 1u;
            if (mark_mask[k] < full) { ++mark_mask[k]; break; }
            mark_mask[k] = 1;
          }
          if (k == root_list.size()) break;
        }
        // advance labels
        std::size_t k = 0;
        for (; k < labeled.size(); ++k) {
          const std::size_t radix = cycles[forest.parent[labeled[k]]].size();
          if (label_idx[k] + 1 < radix) { ++label_idx[k]; break; }
          label_idx[k] = 0;
        }
        if (k == labeled.size()) break;
      }
    });
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::uint64_t nfact = 1;
  for (int i = 2; i <= n; ++i) nfact *= std::uint64_t(i);
  if (report.survivor_count != nfact)
    throw InvolutionBroken("expected one survivor per permutation, got " +
                           std::to_string(report.survivor_count));
  CountPolynomial stirling_poly;
  for (int k = 0; k <= n; ++k) stirling_poly.add_term(k, stirling_first(n, k));
  if (!(report.survivor_total == stirling_poly))
    throw InvolutionBroken("survivor total " + report.survivor_total.pretty() +
                           " != Stirling polynomial " + stirling_poly.pretty());
  if (!(report.grand_total == falling_factorial(n)))
    throw InvolutionBroken("grand total " + report.grand_total.pretty() +
                           " != falling factorial");
  report.passed = true;
  return report;
}

}  // namespace betheasep::forests
