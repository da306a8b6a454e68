#include "e510/certificate.hpp"

#include <map>
#include <stdexcept>

namespace e510 {

Json to_json(const Scalar& s) { return s.str(); }

Json to_json(const Weight& w) { return Json::array({w[0], w[1], w[2], w[3]}); }

Json to_json(const UMonomial& m) {
  Json pairs = Json::array();
  for (const auto& p : m.pairs()) pairs.push_back(Json::array({p.i, p.j}));
  auto d = m.dels();
  return Json{{"del", Json::array({d[0], d[1], d[2], d[3], d[4]})}, {"pairs", pairs}};
}

Json to_json(const UElement& u) {
  Json out = Json::array();
  for (const auto& [m, c] : u) out.push_back(Json{{"monomial", to_json(m)}, {"coeff", to_json(c)}});
  return out;
}

Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return Scalar::parse(j.get<std::string>());
  if (j.is_number_integer()) return Scalar(j.get<long long>());
  throw std::invalid_argument("scalar must be a string or an integer");
}

Weight weight_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("weight must be an array of 4 integers");
  Weight w;
  for (int k = 0; k < 4; ++k) {
    if (!j[k].is_number_integer()) throw std::invalid_argument("weight must be an array of 4 integers");
    w.c[k] = j[k].get<int>();
  }
  return w;
}

UMonomial umonomial_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("del") || !j.contains("pairs"))
    throw std::invalid_argument("monomial needs 'del' and 'pairs'");
  const Json& d = j.at("del");
  if (!d.is_array() || d.size() != 5) throw std::invalid_argument("'del' must have 5 entries");
  std::array<int, 5> del{};
  for (int k = 0; k < 5; ++k) del[k] = d[k].get<int>();
  std::vector<PairIndex> pairs;
  for (const auto& p : j.at("pairs")) {
    if (!p.is_array() || p.size() != 2) throw std::invalid_argument("pair must have 2 entries");
    pairs.push_back({p[0].get<int>(), p[1].get<int>()});
  }
  return UMonomial::make(del, pairs);
}

UElement uelement_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("element must be an array");
  std::vector<UElement::Entry> e;
  for (const auto& t : j) e.emplace_back(umonomial_from_json(t.at("monomial")), scalar_from_json(t.at("coeff")));
  return UElement::from_unsorted(std::move(e));
}

namespace {

std::string label_for(const Weight& mu, const Weight& lambda, int d, const UElement& leading) {
  if (d > 3) return "exploratory";
  auto f = family_label(mu, lambda, d, leading);
  return f ? family_name(*f) : "ANOMALY";
}

std::optional<bool> run_equations(const Weight& mu, const Weight& lambda, const VermaElement& w) {
  if (w.degree() > 3) return std::nullopt;
  try {
    MorphismData phi = morphism_from_singular(w, lambda, mu);
    return verify_degree_equations(phi).ok();
  } catch (const std::invalid_argument&) {
    return false;
  }
}

}  // namespace

Certificate make_certificate(const Weight& mu, const Weight& lambda, const VermaElement& w) {
  Certificate c;
  c.mu = mu;
  c.lambda = lambda;
  c.degree = w.degree();
  c.vector = w;
  c.leading = leading_u_part(w);
  c.checks = check_singular(w);
  c.equations = c.checks.ok() ? run_equations(mu, lambda, w) : std::optional<bool>(false);
  if (c.degree > 3) c.equations.reset();
  c.family = label_for(mu, lambda, c.degree, c.leading);
  return c;
}

Json to_json(const Certificate& c) {
  std::map<UMonomial, Json> groups;
  for (const auto& [k, v] : c.vector.terms) {
    auto& g = groups[k.u];
    if (g.is_null()) g = Json::array();
    g.push_back(Json{{"index", k.f}, {"coeff", to_json(v)}});
  }
  Json vec = Json::array();
  for (auto& [u, f] : groups) vec.push_back(Json{{"monomial", to_json(u)}, {"fcoeffs", f}});
  Json checks{{"l0_highest", c.checks.l0_highest},
              {"x5d45", c.checks.x5d45},
              {"full_l1", c.checks.full_l1},
              {"equations", c.equations ? Json(*c.equations) : Json(nullptr)}};
  return Json{{"mu", to_json(c.mu)},       {"lambda", to_json(c.lambda)},
              {"degree", c.degree},        {"vector", vec},
              {"leading_term", to_json(c.leading)}, {"checks", checks},
              {"family", c.family}};
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  c.mu = weight_from_json(j.at("mu"));
  c.lambda = weight_from_json(j.at("lambda"));
  c.degree = j.at("degree").get<int>();
  if (!c.mu.is_dominant()) throw std::invalid_argument("certificate: mu is not dominant");
  if (c.degree < 1) throw std::invalid_argument("certificate: degree must be positive");
  std::vector<VTerms::Entry> terms;
  std::size_t max_index = 0;
  for (const auto& g : j.at("vector")) {
    UMonomial u = umonomial_from_json(g.at("monomial"));
    if (u.degree() != c.degree) throw std::invalid_argument("certificate: monomial of wrong degree");
    for (const auto& f : g.at("fcoeffs")) {
      auto idx = f.at("index").get<std::size_t>();
      max_index = std::max(max_index, idx);
      terms.emplace_back(VKey{u, static_cast<std::uint32_t>(idx)}, scalar_from_json(f.at("coeff")));
    }
  }
  // deep enough for every index and for the L_1 images
  int depth = 0;
  for (const auto& u : pbw_monomials(c.degree)) {
    auto dep = depth_below(c.lambda - u.weight(), c.mu);
    if (dep) depth = std::max(depth, *dep);
  }
  auto M = irreducible(c.mu, depth + 4);
  if (max_index >= M->dim()) M = irreducible(c.mu);
  if (!terms.empty() && max_index >= M->dim()) throw std::invalid_argument("certificate: F-index out of range");
  c.vector = VermaElement(M, VTerms::from_unsorted(std::move(terms)));
  c.leading = uelement_from_json(j.at("leading_term"));
  const Json& ch = j.at("checks");
  c.checks.l0_highest = ch.at("l0_highest").get<bool>();
  c.checks.x5d45 = ch.at("x5d45").get<bool>();
  c.checks.full_l1 = ch.at("full_l1").get<bool>();
  if (ch.contains("equations") && !ch.at("equations").is_null()) c.equations = ch.at("equations").get<bool>();
  c.family = j.at("family").get<std::string>();
  return c;
}

VerifyOutcome verify_certificate(const Json& j) {
  VerifyOutcome out;
  auto fail = [&](const std::string& s) {
    out.ok = false;
    out.problems.push_back(s);
  };
  Certificate rec;
  try {
    rec = certificate_from_json(j);
  } catch (const std::exception& e) {
    fail(std::string("parse error: ") + e.what());
    return out;
  }
  const VermaElement& w = rec.vector;
  if (w.is_zero()) {
    fail("vector is zero");
    return out;
  }
  if (!w.is_homogeneous() || w.degree() != rec.degree) fail("vector is not homogeneous of the stated degree");
  if (!w.is_weight_vector() || *w.weight() != rec.lambda) fail("vector does not have weight lambda");
  Certificate now;
  try {
    now = make_certificate(rec.mu, rec.lambda, w);
  } catch (const std::exception& e) {
    fail(std::string("recomputation failed: ") + e.what());
    return out;
  }
  if (!now.checks.l0_highest) fail("raising operators do not kill the vector");
  if (!now.checks.x5d45) fail("x5d45 does not kill the vector");
  if (!now.checks.full_l1) fail("L1 does not kill the vector");
  if (now.equations && !*now.equations) fail("degree equations fail");
  if (now.checks.l0_highest != rec.checks.l0_highest || now.checks.x5d45 != rec.checks.x5d45 ||
      now.checks.full_l1 != rec.checks.full_l1 || now.equations != rec.equations)
    fail("recorded checks differ from recomputed checks");
  if (!(now.leading == rec.leading)) fail("recorded leading term differs");
  if (now.leading.empty() || !now.leading.front().second.is_one()) fail("vector is not normalized");
  if (now.family != rec.family) fail("recorded family '" + rec.family + "' differs from '" + now.family + "'");
  return out;
}

}  // namespace e510
