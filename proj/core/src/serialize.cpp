#include "betheasep/serialize.hpp"

#include <sstream>

namespace betheasep::serialize {

json to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const ComplexVector& v) {
  json arr = json::array();
  for (Complex z : v) arr.push_back(to_json(z));
  return arr;
}

std::string admissibility_name(bethe::AdmissibilityTag tag) {
  switch (tag) {
    case bethe::AdmissibilityTag::Admissible: return "admissible";
    case bethe::AdmissibilityTag::CoincidentPair: return "coincident_pair";
    case bethe::AdmissibilityTag::ZeroOrInfiniteComponent: return "zero_or_infinite_component";
    case bethe::AdmissibilityTag::SpuriousDenominator: return "spurious_denominator";
  }
  return "unknown";
}

json to_json(const bethe::BetheRoot& root, const bethe::Admissibility& adm) {
  json j;
  j["xi"] = to_json(root.xi);
  j["residual"] = root.residual_norm;
  j["multiplicity"] = root.multiplicity;
  j["classification"] = admissibility_name(adm.tag);
  if (adm.tag == bethe::AdmissibilityTag::CoincidentPair)
    j["pair"] = json::array({adm.index_i, adm.index_j});
  if (adm.tag == bethe::AdmissibilityTag::ZeroOrInfiniteComponent)
    j["component"] = adm.index_i;
  return j;
}

json to_json(const bethe::SolutionSet& set) {
  json j;
  j["sites"] = set.sites;
  j["particles"] = set.particles;
  j["hopping"] = to_json(set.hopping.p);
  j["dedup_mode"] =
      set.dedup_mode == bethe::DedupMode::raw ? "raw" : "up_to_permutation";
  j["raw_total"] = set.raw_total();
  j["admissible_found"] = set.admissible_found;
  j["admissible_expected"] = set.admissible_expected;
  j["target_reached"] = set.target_reached;
  j["starts_used"] = set.starts_used;
  json roots = json::array();
  for (const auto& [root, adm] : set.roots) roots.push_back(to_json(root, adm));
  j["roots"] = std::move(roots);
  return j;
}

json to_json(const forests::CountPolynomial& poly) {
  json j;
  j["pretty"] = poly.pretty();
  json coeffs = json::array();
  for (const auto& c : poly.coefficients()) coeffs.push_back(c.get_str());
  j["coefficients"] = std::move(coeffs);
  return j;
}

json to_json(const spectrum::Certificate& cert) {
  json j;
  j["sites"] = cert.sites;
  j["particles"] = cert.particles;
  j["hopping"] = to_json(cert.hopping.p);
  j["eigenstate_count"] = cert.eigenstate_count;
  j["min_singular_proxy"] = cert.min_singular_proxy;
  j["max_residual"] = cert.max_residual;
  j["trace_check"] = json{{"sum", to_json(cert.trace_check.sum)},
                          {"trace", to_json(cert.trace_check.reference)},
                          {"difference", cert.trace_check.difference}};
  j["trace_sq_check"] = json{{"sum", to_json(cert.trace_sq_check.sum)},
                             {"trace", to_json(cert.trace_sq_check.reference)},
                             {"difference", cert.trace_sq_check.difference}};
  j["verdict"] = cert.verdict == spectrum::Verdict::Complete ? "Complete" : "Incomplete";
  if (!cert.reason.empty()) j["reason"] = cert.reason;
  return j;
}

json to_json(const ramify::ScanReport& report) {
  json j;
  j["region"] = json{{"re_min", report.region.re_min},
                     {"re_max", report.region.re_max},
                     {"im_min", report.region.im_min},
                     {"im_max", report.region.im_max}};
  j["grid"] = report.grid;
  j["min_gap_over_grid"] = report.min_gap_over_grid;
  json events = json::array();
  for (const auto& e : report.events) {
    json je;
    je["p_r"] = to_json(e.p_r);
    je["colliding_indices"] = e.colliding_indices;
    je["gap_at_detection"] = e.gap_at_detection;
    if (std::isfinite(e.sector_resultant)) je["sector_resultant"] = e.sector_resultant;
    events.push_back(std::move(je));
  }
  j["events"] = std::move(events);
  j["verdict"] = report.events.empty() ? "NoneFound" : "EventsFound";
  return j;
}

json to_json(const ramify::JordanChain& chain) {
  json j;
  j["eigenvalue"] = to_json(chain.eigenvalue);
  j["eigenvector"] = to_json(chain.eigenvector);
  j["generalized_vector"] = to_json(chain.generalized_vector);
  j["coupling"] = to_json(chain.coupling);
  j["first_order_residual"] = chain.first_order_residual;
  j["second_order_residual"] = chain.second_order_residual;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string csv_row(const std::vector<std::string>& fields) {
  std::ostringstream out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string& f = fields[i];
    const bool quote = f.find_first_of(",\"\r\n") != std::string::npos;
    if (i) out << ',';
    if (quote) {
      out << '"';
      for (char c : f) {
        if (c == '"') out << '"';
        out << c;
      }
      out << '"';
    } else {
      out << f;
    }
  }
  out << "\r\n";
  return out.str();
}

namespace {

std::string number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

std::string csv_solution_set(const bethe::SolutionSet& set) {
  std::ostringstream out;
  std::vector<std::string> header = {"classification", "multiplicity", "residual"};
  for (int i = 1; i <= set.particles; ++i) {
    header.push_back("xi" + std::to_string(i) + "_re");
    header.push_back("xi" + std::to_string(i) + "_im");
  }
  out << csv_row(header);
  for (const auto& [root, adm] : set.roots) {
    std::vector<std::string> row = {admissibility_name(adm.tag),
                                    std::to_string(root.multiplicity),
                                    number(root.residual_norm)};
    for (Complex z : root.xi) {
      row.push_back(number(z.real()));
      row.push_back(number(z.imag()));
    }
    out << csv_row(row);
  }
  return out.str();
}

std::string csv_certificate(const spectrum::Certificate& cert) {
  std::ostringstream out;
  out << csv_row({"field", "value"});
  out << csv_row({"sites", std::to_string(cert.sites)});
  out << csv_row({"particles", std::to_string(cert.particles)});
  out << csv_row({"eigenstate_count", std::to_string(cert.eigenstate_count)});
  out << csv_row({"max_residual", number(cert.max_residual)});
  out << csv_row({"min_singular_proxy", number(cert.min_singular_proxy)});
  out << csv_row({"trace_difference", number(cert.trace_check.difference)});
  out << csv_row({"trace_sq_difference", number(cert.trace_sq_check.difference)});
  out << csv_row(
      {"verdict", cert.verdict == spectrum::Verdict::Complete ? "Complete" : "Incomplete"});
  return out.str();
}

}  // namespace betheasep::serialize
