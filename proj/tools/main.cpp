// Command-line front end: certification, solving, exact counting, and
// ramification scans with machine-readable output.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "betheasep/serialize.hpp"

namespace {

using namespace betheasep;
using serialize::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIncomplete = 2;

struct CommonOptions {
  int sites = 0;
  int particles = 0;
  double hopping_re = 0.0;
  double hopping_im = 0.0;
  std::uint64_t seed = 0;
  std::size_t budget = 8000;
  std::string output_path;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool needs_dims) {
  if (needs_dims) {
    cmd->add_option("-L,--sites", opts.sites, "ring size L")->required();
    cmd->add_option("-N,--particles", opts.particles, "particle count N")->required();
    cmd->add_option("-p,--hopping", opts.hopping_re, "hopping rate p (real part)")->required();
    cmd->add_option("--hopping-im", opts.hopping_im, "imaginary part of p");
  }
  cmd->add_option("--seed", opts.seed, "pseudo-random seed");
  cmd->add_option("--budget", opts.budget, "Newton start budget");
  cmd->add_option("-o,--output", opts.output_path, "write the result here instead of stdout");
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
}

void emit(const CommonOptions& opts, const std::string& payload) {
  if (opts.output_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(opts.output_path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + opts.output_path);
  out << payload;
}

std::string certificate_text(const spectrum::Certificate& cert) {
  std::ostringstream out;
  out << "verdict: "
      << (cert.verdict == spectrum::Verdict::Complete ? "Complete" : "Incomplete") << "\n"
      << "eigenstate_count: " << cert.eigenstate_count << "\n"
      << "max_residual: " << cert.max_residual << "\n"
      << "min_singular_proxy: " << cert.min_singular_proxy << "\n"
      << "trace_difference: " << cert.trace_check.difference << "\n"
      << "trace_sq_difference: " << cert.trace_sq_check.difference << "\n";
  if (!cert.reason.empty()) out << "reason: " << cert.reason << "\n";
  return out.str();
}

int run_certify(const CommonOptions& opts) {
  spectrum::CertifyOptions co;
  co.seed = opts.seed;
  co.budget = opts.budget;
  const spectrum::Certificate cert =
      spectrum::certify(opts.sites, opts.particles,
                        asep::HoppingRate{Complex(opts.hopping_re, opts.hopping_im)}, co);
  if (opts.format == "json")
    emit(opts, serialize::dump(serialize::to_json(cert)));
  else if (opts.format == "csv")
    emit(opts, serialize::csv_certificate(cert));
  else
    emit(opts, certificate_text(cert));
  return cert.verdict == spectrum::Verdict::Complete ? kExitOk : kExitIncomplete;
}

int run_solve(const CommonOptions& opts, bool dedup) {
  const asep::HoppingRate hopping{Complex(opts.hopping_re, opts.hopping_im)};
  bethe::SolutionSet set;
  if (opts.particles == 2) {
    set = bethe::solve_two_particle(opts.sites, hopping);
  } else {
    bethe::SolveOptions so;
    so.seed = opts.seed;
    so.budget = opts.budget;
    set = bethe::solve_general(opts.sites, opts.particles, hopping, so);
  }
  if (dedup) set = bethe::dedup_up_to_permutation(set);
  if (opts.format == "json") {
    emit(opts, serialize::dump(serialize::to_json(set)));
  } else if (opts.format == "csv") {
    emit(opts, serialize::csv_solution_set(set));
  } else {
    std::ostringstream out;
    out << "raw_total: " << set.raw_total() << "\n"
        << "admissible: " << set.admissible_found << " of " << set.admissible_expected << "\n"
        << "coincident: " << set.count(bethe::AdmissibilityTag::CoincidentPair) << "\n"
        << "spurious: " << set.count(bethe::AdmissibilityTag::SpuriousDenominator) << "\n"
        << "target_reached: " << (set.target_reached ? "yes" : "no") << "\n";
    emit(opts, out.str());
  }
  return set.target_reached ? kExitOk : kExitIncomplete;
}

int run_count(const CommonOptions& opts) {
  const forests::CountPolynomial poly = forests::admissible_count(opts.particles);
  if (opts.format == "json")
    emit(opts, serialize::dump(serialize::to_json(poly)));
  else if (opts.format == "csv") {
    std::ostringstream out;
    out << serialize::csv_row({"degree", "coefficient"});
    for (int k = 0; k <= poly.degree(); ++k)
      out << serialize::csv_row({std::to_string(k), poly.coefficient(k).get_str()});
    emit(opts, out.str());
  } else {
    emit(opts, poly.pretty() + "\n");
  }
  return kExitOk;
}

int run_ramify(const CommonOptions& opts, const ramify::SearchRegion& region, int grid) {
  ramify::ScanOptions so;
  so.seed = opts.seed;
  so.budget = opts.budget;
  const ramify::ScanReport report =
      ramify::find_ramification(opts.sites, opts.particles, region, grid, so);

  json j = serialize::to_json(report);
  if (opts.particles == 2 && !report.events.empty()) {
    try {
      const ramify::JordanChain chain = ramify::jordan_chain(opts.sites, report.events.front());
      j["jordan_chain"] = serialize::to_json(chain);
    } catch (const Error& e) {
      j["jordan_chain_error"] = e.what();
    }
  }
  if (opts.format == "json") {
    emit(opts, serialize::dump(j));
  } else if (opts.format == "csv") {
    std::ostringstream out;
    out << serialize::csv_row({"p_r_re", "p_r_im", "gap", "sector_resultant"});
    for (const auto& e : report.events)
      out << serialize::csv_row({std::to_string(e.p_r.real()), std::to_string(e.p_r.imag()),
                                 std::to_string(e.gap_at_detection),
                                 std::to_string(e.sector_resultant)});
    emit(opts, out.str());
  } else {
    std::ostringstream out;
    if (report.events.empty()) {
      out << "NoneFound (min gap over grid: " << report.min_gap_over_grid << ")\n";
    } else {
      for (const auto& e : report.events)
        out << "p_r = " << e.p_r << "  gap = " << e.gap_at_detection
            << "  resultant = " << e.sector_resultant << "\n";
    }
    emit(opts, out.str());
  }
  return kExitOk;
}

int run_identity_suite(const CommonOptions& opts, int max_n) {
  struct Line {
    std::string name;
    bool passed;
    std::string detail;
  };
  std::vector<Line> lines;
  auto check = [&](const std::string& name, auto&& fn) {
    try {
      fn();
      lines.push_back({name, true, ""});
    } catch (const Error& e) {
      lines.push_back({name, false, e.what()});
    }
  };

  check("lefschetz_total(2) == L^2 + 2L", [] {
    if (!(forests::lefschetz_total(2) == forests::CountPolynomial({0, 2, 1})))
      throw IdentityViolation("lefschetz_total(2) mismatch");
  });
  for (int n = 1; n <= std::min(max_n, 7); ++n)
    check("lefschetz_total(" + std::to_string(n) + ") at L=1 == (N+1)^(N-1)", [n] {
      forests::BigInt expected = 1;
      for (int i = 0; i < n - 1; ++i) expected *= (n + 1);
      if (forests::lefschetz_total(n).evaluate(1) != expected)
        throw IdentityViolation("forest total mismatch");
    });
  for (int n = 1; n <= std::min(max_n, 6); ++n)
    check("admissible_count(" + std::to_string(n) + ") == falling factorial",
          [n] { forests::admissible_count(n); });
  for (int n = 1; n <= std::min(max_n, 6); ++n)
    check("weight_sum_check vanishes on non-trivial bases, N=" + std::to_string(n), [n] {
      for (const auto& ep : forests::enumerate_enhanced_partitions(n)) {
        const long sum = forests::weight_sum_check(ep, n);
        const long expected = ep.is_trivial(n) ? 1 : 0;
        if (sum != expected)
          throw IdentityViolation("weight sum " + std::to_string(sum) + " != " +
                                  std::to_string(expected));
      }
    });
  for (int n = 1; n <= std::min(max_n, 5); ++n)
    check("involution_check(" + std::to_string(n) + ")", [n] { forests::involution_check(n); });

  bool all = true;
  for (const auto& l : lines) all = all && l.passed;
  if (opts.format == "json") {
    json j = json::array();
    for (const auto& l : lines) {
      json e{{"identity", l.name}, {"passed", l.passed}};
      if (!l.detail.empty()) e["detail"] = l.detail;
      j.push_back(std::move(e));
    }
    emit(opts, serialize::dump(j));
  } else {
    std::ostringstream out;
    for (const auto& l : lines) {
      out << (l.passed ? "PASS " : "FAIL ") << l.name;
      if (!l.detail.empty()) out << "  (" << l.detail << ")";
      out << "\n";
    }
    emit(opts, out.str());
  }
  return all ? kExitOk : kExitIncomplete;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bethe ansatz verification engine for the periodic ASEP"};
  app.require_subcommand(1);

  CommonOptions opts;
  bool dedup = false;
  int grid = 41;
  int max_n = 7;
  ramify::SearchRegion region;

  CLI::App* certify = app.add_subcommand("certify", "solve and certify completeness");
  add_common(certify, opts, true);

  CLI::App* solve = app.add_subcommand("solve", "solve the Bethe ansatz equations");
  add_common(solve, opts, true);
  solve->add_flag("--dedup", dedup, "merge roots that are permutations of each other");

  CLI::App* count = app.add_subcommand("count", "exact admissible-solution count polynomial");
  count->add_option("-N,--particles", opts.particles, "particle count N")->required();
  count->add_option("-o,--output", opts.output_path, "write the result here instead of stdout");
  opts.format = "json";
  count->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));

  CLI::App* ram = app.add_subcommand("ramify", "scan for ramification points");
  add_common(ram, opts, true);
  ram->add_option("--grid", grid, "grid resolution per axis");
  ram->add_option("--re-min", region.re_min, "search region left edge");
  ram->add_option("--re-max", region.re_max, "search region right edge");
  ram->add_option("--im-min", region.im_min, "search region bottom edge");
  ram->add_option("--im-max", region.im_max, "search region top edge");

  CLI::App* suite =
      app.add_subcommand("identity-suite", "run the exact combinatorial identities");
  suite->add_option("--max-n", max_n, "largest N to check");
  suite->add_option("-o,--output", opts.output_path, "write the result here instead of stdout");
  suite->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));

  CLI11_PARSE(app, argc, argv);

  // count and identity-suite default to text (the polynomial/PASS lines)
  if ((app.got_subcommand(count) && count->count("--format") == 0) ||
      (app.got_subcommand(suite) && suite->count("--format") == 0))
    opts.format = "text";

  try {
    if (app.got_subcommand(certify)) return run_certify(opts);
    if (app.got_subcommand(solve)) return run_solve(opts, dedup);
    if (app.got_subcommand(count)) return run_count(opts);
    if (app.got_subcommand(ram)) return run_ramify(opts, region, grid);
    if (app.got_subcommand(suite)) return run_identity_suite(opts, max_n);
  } catch (const IdentityViolation& e) {
    std::cerr << "identity violation: " << e.what() << "\n";
    return kExitIncomplete;
  } catch (const InvalidDimensions& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidHoppingRate& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TooLarge& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
