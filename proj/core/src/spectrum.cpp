#include "betheasep/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "betheasep/parallel.hpp"

namespace betheasep::spectrum {

namespace {

// xi_k^e tables for e in [0, max_exp]
std::vector<ComplexVector> power_table(const ComplexVector& xi, int max_exp) {
  std::vector<ComplexVector> pw(xi.size(), ComplexVector(max_exp + 1));
  for (std::size_t k = 0; k < xi.size(); ++k) {
    pw[k][0] = 1.0;
    for (int e = 1; e <= max_exp; ++e) pw[k][e] = pw[k][e - 1] * xi[k];
  }
  return pw;
}

}  // namespace

AmplitudeMap amplitudes(const BetheRoot& root, HoppingRate hopping) {
  const ComplexVector& xi = root.xi;
  const int n = int(xi.size());
  const Complex p = hopping.p, q = hopping.q();

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  AmplitudeMap out;

  if (bethe::is_stationary_root(xi)) {
    // limiting amplitudes at the degenerate stationary root: every A_sigma
    // tends to 1 along the solution family, and the ansatz value becomes the
    // uniform vector
    do out[perm] = 1.0;
    while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }

  // pair factors: factor(a, b) for a < b multiplies A_sigma once per
  // inversion whose value pair is {a, b}
  std::vector<std::vector<Complex>> factor(n, std::vector<Complex>(n, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const Complex common = p + q * xi[a] * xi[b];
      const Complex den = common - xi[a];
      if (std::abs(den) < 1e-12)
        throw AmplitudeSingularity("amplitudes: vanishing denominator");
      factor[a][b] = -(common - xi[b]) / den;
    }

  do {
    Complex amp = 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) amp *= factor[perm[j]][perm[i]];
    out[perm] = amp;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Complex ansatz_value(const ComplexVector& xi, const AmplitudeMap& amps,
                     const std::vector<int>& x) {
  int max_exp = 0;
  for (int v : x) max_exp = std::max(max_exp, v);
  const auto pw = power_table(xi, max_exp);
  Complex u = 0.0;
  for (const auto& [perm, amp] : amps) {
    Complex term = amp;
    for (std::size_t i = 0; i < x.size(); ++i) term *= pw[perm[i]][x[i]];
    u += term;
  }
  return u;
}

ComplexVector build_eigenvector_raw(const BetheRoot& root, const StateSpace& space,
                                    HoppingRate hopping) {
  const AmplitudeMap amps = amplitudes(root, hopping);
  const auto pw = power_table(root.xi, space.sites());
  ComplexVector u(space.size(), 0.0);
  for (std::size_t s = 0; s < space.size(); ++s) {
    const auto& sites = space.at(s).occupied_sites;
    Complex acc = 0.0;
    for (const auto& [perm, amp] : amps) {
      Complex term = amp;
      for (std::size_t i = 0; i < sites.size(); ++i) term *= pw[perm[i]][sites[i]];
      acc += term;
    }
    u[s] = acc;
  }
  return u;
}

namespace {

ComplexVector normalize_vector(ComplexVector u) {
  double best = 0.0;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double m = std::abs(u[i]);
    if (m > best) { best = m; best_index = i; }
  }
  if (best < 1e-10) throw ZeroVector("build_eigenvector: vector vanishes");
  const Complex scale = std::conj(u[best_index]) / (std::abs(u[best_index]) * best);
  for (Complex& z : u) z *= scale;
  return u;
}

}  // namespace

ComplexVector build_eigenvector(const BetheRoot& root, const StateSpace& space,
                                HoppingRate hopping) {
  return normalize_vector(build_eigenvector_raw(root, space, hopping));
}

Complex eigenvalue(const BetheRoot& root, HoppingRate hopping) {
  const Complex p = hopping.p, q = hopping.q();
  Complex e = 0.0;
  for (Complex z : root.xi) {
    if (std::abs(z) <= 1e-8) throw ZeroComponent("eigenvalue: component too close to zero");
    e += p / z + q * z - 1.0;
  }
  return e;
}

BetheState build_state(const BetheRoot& root, const StateSpace& space, HoppingRate hopping) {
  BetheState state;
  state.root = root;
  state.amplitudes = amplitudes(root, hopping);
  state.vector = build_eigenvector(root, space, hopping);
  state.eigenvalue = eigenvalue(root, hopping);
  return state;
}

double boundary_check(const BetheState& state, HoppingRate hopping, int sites) {
  const int n = int(state.root.xi.size());
  if (n < 2) return 0.0;
  const Complex p = hopping.p, q = hopping.q();
  double worst = 0.0;
  std::vector<int> x(n);
  for (int pair = 0; pair + 1 < n; ++pair) {
    // spectators pinned at deterministic sample positions
    for (int k = 0; k < n; ++k) x[k] = (k < pair) ? k + 1 : sites + k;
    for (int pos = 1; pos <= sites; ++pos) {
      x[pair] = pos;
      x[pair + 1] = pos;
      const Complex at_equal = ansatz_value(state.root.xi, state.amplitudes, x);
      x[pair] = pos + 1;
      x[pair + 1] = pos + 1;
      const Complex at_shifted = ansatz_value(state.root.xi, state.amplitudes, x);
      x[pair] = pos;
      x[pair + 1] = pos + 1;
      const Complex at_ordered = ansatz_value(state.root.xi, state.amplitudes, x);
      worst = std::max(worst, std::abs(p * at_equal + q * at_shifted - at_ordered));
    }
  }
  return worst;
}

std::vector<BetheState> build_eigenstates(const bethe::SolutionSet& deduped,
                                          const StateSpace& space) {
  std::vector<const bethe::BetheRoot*> admissible;
  for (const auto& [root, adm] : deduped.roots)
    if (adm.tag == bethe::AdmissibilityTag::Admissible) admissible.push_back(&root);

  std::vector<BetheState> states(admissible.size());
  parallel::for_each_chunk(admissible.size(), [&](std::size_t lo, std::size_t hi, std::size_t) {
    for (std::size_t i = lo; i < hi; ++i)
      states[i] = build_state(*admissible[i], space, deduped.hopping);
  });
  return states;
}

Certificate certify(int sites, int particles, HoppingRate hopping,
                    const CertifyOptions& options) {
  Certificate cert;
  cert.sites = sites;
  cert.particles = particles;
  cert.hopping = hopping;

  const StateSpace space = asep::enumerate_states(sites, particles);
  const asep::GeneratorMatrix gen = asep::build_generator(space, hopping);
  const std::size_t expected = space.size();

  bethe::SolutionSet solution;
  if (particles == 2) {
    solution = bethe::solve_two_particle(sites, hopping, options.thresholds);
  } else {
    bethe::SolveOptions so;
    so.seed = options.seed;
    so.budget = options.budget;
    so.thresholds = options.thresholds;
    solution = bethe::solve_general(sites, particles, hopping, so);
  }
  const bethe::SolutionSet deduped =
      bethe::dedup_up_to_permutation(solution, options.thresholds.cluster);
  const std::vector<BetheState> states = build_eigenstates(deduped, space);
  cert.eigenstate_count = states.size();

  if (!solution.target_reached) {
    cert.verdict = Verdict::Incomplete;
    cert.reason = "solver budget exhausted: found " +
                  std::to_string(solution.admissible_found) + " of " +
                  std::to_string(solution.admissible_expected) + " admissible roots";
    return cert;
  }

  // residuals
  double max_res = 0.0;
  for (const BetheState& st : states) {
    const ComplexVector hu = asep::apply_generator(gen, st.vector);
    double r = 0.0;
    for (std::size_t i = 0; i < hu.size(); ++i)
      r = std::max(r, std::abs(hu[i] - st.eigenvalue * st.vector[i]));
    max_res = std::max(max_res, r);
  }
  cert.max_residual = max_res;

  // rank of the eigenvector matrix
  numerics::ComplexMatrix basis(space.size(), states.size());
  for (std::size_t j = 0; j < states.size(); ++j)
    for (std::size_t i = 0; i < space.size(); ++i) basis(i, j) = states[j].vector[i];
  const numerics::RankProfile rp = numerics::rank_profile(basis, options.rank_tolerance);
  cert.min_singular_proxy = rp.smallest_accepted_pivot;

  // spectral moments against the generator traces
  Complex sum1 = 0.0, sum2 = 0.0;
  for (const BetheState& st : states) {
    sum1 += st.eigenvalue;
    sum2 += st.eigenvalue * st.eigenvalue;
  }
  const Complex tr = asep::trace(gen);
  const Complex tr2 = asep::trace_squared(gen);
  cert.trace_check = {sum1, tr, std::abs(sum1 - tr)};
  cert.trace_sq_check = {sum2, tr2, std::abs(sum2 - tr2)};

  std::string reason;
  if (cert.eigenstate_count != expected)
    reason = "eigenstate count " + std::to_string(cert.eigenstate_count) + " != C(L,N) = " +
             std::to_string(expected);
  else if (rp.rank != expected)
    reason = "eigenvector matrix rank " + std::to_string(rp.rank) + " < " +
             std::to_string(expected);
  else if (max_res > options.residual_tolerance)
    reason = "max eigen-residual " + std::to_string(max_res) + " above tolerance";
  else if (cert.trace_check.difference >
           options.trace_tolerance * (1.0 + std::abs(tr)))
    reason = "first spectral moment mismatch";
  else if (cert.trace_sq_check.difference >
           options.trace_tolerance * (1.0 + std::abs(tr2)))
    reason = "second spectral moment mismatch";

  cert.verdict = reason.empty() ? Verdict::Complete : Verdict::Incomplete;
  cert.reason = reason;
  return cert;
}

}  // namespace betheasep::spectrum
