#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "e510/verma.hpp"

namespace e510 {

using Json = nlohmann::ordered_json;

Json to_json(const Scalar& s);  // "p/q" or "p"
Json to_json(const Weight& w);  // [a,b,c,d]
Json to_json(const UMonomial& m);  // {"del":[..5],"pairs":[[i,j],...]}
Json to_json(const UElement& u);   // [{"monomial":..,"coeff":..}]

/// Parsers throw std::invalid_argument on malformed input.
Scalar scalar_from_json(const Json& j);
Weight weight_from_json(const Json& j);
UMonomial umonomial_from_json(const Json& j);
UElement uelement_from_json(const Json& j);

/// One singular vector with the outcome of every check. F-indices refer to
/// the canonical basis produced by build_irreducible.
struct Certificate {
  Weight mu;
  Weight lambda;
  int degree = 0;
  VermaElement vector;
  UElement leading;
  SingularChecks checks;
  std::optional<bool> equations;  // unset above degree 3
  std::string family;             // family name, "ANOMALY" or "exploratory"
};

Certificate make_certificate(const Weight& mu, const Weight& lambda, const VermaElement& w);
Json to_json(const Certificate& c);
/// Rebuilds the vector inside F(mu); recorded checks are read back verbatim.
Certificate certificate_from_json(const Json& j);

struct VerifyOutcome {
  bool ok = true;
  std::vector<std::string> problems;
};
/// Recomputes every check and the family label and compares with the record.
VerifyOutcome verify_certificate(const Json& j);

}  // namespace e510
