#pragma once

#include <string>

#include "betheasep/bethe.hpp"
#include "betheasep/forests.hpp"
#include "betheasep/ramify.hpp"
#include "betheasep/spectrum.hpp"
#include "betheasep/types.hpp"

#include <json.hpp>

namespace betheasep::serialize {

using json = nlohmann::ordered_json;

/// Complex numbers serialize as {"re": x, "im": y}; roots as arrays of such
/// objects; exact polynomials as ascending decimal-string coefficient
/// arrays. Doubles round-trip losslessly through nlohmann's shortest-
/// representation dump, so identical inputs give byte-identical text.
json to_json(Complex z);
json to_json(const ComplexVector& v);
json to_json(const bethe::BetheRoot& root, const bethe::Admissibility& adm);
json to_json(const bethe::SolutionSet& set);
json to_json(const forests::CountPolynomial& poly);
json to_json(const spectrum::Certificate& cert);
json to_json(const ramify::ScanReport& report);
json to_json(const ramify::JordanChain& chain);

std::string admissibility_name(bethe::AdmissibilityTag tag);

/// Canonical text form: 2-space indent, trailing newline.
std::string dump(const json& j);

/// RFC 4180 CSV: fields containing comma, quote, CR or LF are quoted with
/// doubled inner quotes; rows end in CRLF.
std::string csv_row(const std::vector<std::string>& fields);

std::string csv_solution_set(const bethe::SolutionSet& set);
std::string csv_certificate(const spectrum::Certificate& cert);

}  // namespace betheasep::serialize
