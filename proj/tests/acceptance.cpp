// Runs the end-to-end acceptance checks and prints one PASS/FAIL line each.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "e510/verma.hpp"

using namespace e510;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Fail {
  std::ostringstream msg;
  bool any = false;
  template <class T>
  Fail& operator<<(const T& v) {
    msg << v;
    return *this;
  }
  void note(bool cond, const std::string& what) {
    if (!cond && !any) {
      any = true;
      msg << what;
    }
  }
};

UElement nf(std::vector<UGenerator> w) { return normal_form(w); }
UGenerator d(int i, int j) { return UGenerator::d(i, j); }
UGenerator p(int t) { return UGenerator::partial(t); }
UMonomial dmono(std::vector<PairIndex> pairs) { return UMonomial::make({0, 0, 0, 0, 0}, pairs); }

std::vector<Weight> box(int max_entry) {
  std::vector<Weight> out;
  for (int a = 0; a <= max_entry; ++a)
    for (int b = 0; b <= max_entry; ++b)
      for (int c = 0; c <= max_entry; ++c)
        for (int e = 0; e <= max_entry; ++e) out.emplace_back(a, b, c, e);
  return out;
}

bool in_box(const Weight& w, int max_entry) {
  for (int k = 0; k < 4; ++k)
    if (w[k] < 0 || w[k] > max_entry) return false;
  return true;
}

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Hook-content formula for the partition with columns given by the fundamental coordinates.
long long hook_content(const Weight& w) {
  std::vector<int> rows{w[0] + w[1] + w[2] + w[3], w[1] + w[2] + w[3], w[2] + w[3], w[3]};
  std::vector<int> cols(rows[0], 0);
  for (int r : rows)
    for (int c = 0; c < r; ++c) cols[c]++;
  long long num = 1, den = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < rows[i]; ++j) {
      num *= 5 + j - i;
      den *= (rows[i] - j - 1) + (cols[j] - i - 1) + 1;
    }
  return num / den;
}

// Expected degree-d hits (mu, lambda) with their leading monomial, from the closed-form families.
std::map<std::pair<Weight, Weight>, UMonomial> expected_hits(int d, int max_entry) {
  std::map<std::pair<Weight, Weight>, UMonomial> out;
  auto put = [&](Weight mu, Weight lambda, std::vector<PairIndex> lead) {
    if (in_box(mu, max_entry) && lambda.is_dominant()) out[{mu, lambda}] = dmono(lead);
  };
  for (int m = 0; m <= max_entry + 1; ++m)
    for (int n = 0; n <= max_entry + 1; ++n) {
      if (d == 1) {
        put(Weight(m, n, 0, 0), Weight(m, n + 1, 0, 0), {{1, 2}});
        put(Weight(m, 0, 0, n + 1), Weight(m + 1, 0, 0, n), {{1, 5}});
        put(Weight(0, 0, m + 1, n), Weight(0, 0, m, n), {{4, 5}});
      } else if (d == 2) {
        put(Weight(n, 0, 0, 1), Weight(n + 1, 1, 0, 0), {{1, 2}, {1, 5}});
        put(Weight(0, 0, 1, n + 1), Weight(1, 0, 0, n), {{1, 5}, {4, 5}});
      }
    }
  if (d == 2) put(Weight(0, 0, 1, 0), Weight(0, 1, 0, 0), {{1, 2}, {4, 5}});
  if (d == 3) put(Weight(0, 0, 1, 1), Weight(1, 1, 0, 0), {{1, 2}, {1, 5}, {4, 5}});
  return out;
}

Outcome check_classification(int d, int max_entry) {
  Fail f;
  auto rows = classify(d, max_entry, 4);
  auto expected = expected_hits(d, max_entry);
  std::set<std::pair<Weight, Weight>> seen;
  std::size_t anomalies = 0;
  for (const auto& row : rows) {
    seen.insert({row.mu, row.lambda});
    if (row.label == "ANOMALY") ++anomalies;
    auto it = expected.find({row.mu, row.lambda});
    f.note(it != expected.end(), "unexpected hit mu=" + row.mu.str() + " lambda=" + row.lambda.str());
    f.note(row.dimension == 1, "solution space of dimension " + std::to_string(row.dimension) + " at " + row.mu.str());
    if (it == expected.end() || row.vectors.empty()) continue;
    const auto& w = row.vectors.front();
    VermaElement lead = leading_term(w);
    bool lead_ok = lead.terms.nnz() == 1 && lead.terms.front().first.u == it->second &&
                   lead.terms.front().first.f == w.module->hw_index && lead.terms.front().second.is_one();
    f.note(lead_ok, "leading term " + lead.str() + " at " + row.mu.str());
    f.note(check_singular(w).ok(), "vector fails the singular checks at " + row.mu.str());
  }
  for (const auto& [key, lead] : expected)
    f.note(seen.count(key) == 1, "missing hit mu=" + key.first.str() + " lambda=" + key.second.str());
  f.note(anomalies == 0, std::to_string(anomalies) + " anomalies");
  Outcome o;
  o.ok = !f.any;
  o.detail = o.ok ? std::to_string(rows.size()) + " hits, all predicted, 0 anomalies" : f.msg.str();
  return o;
}

struct Catalogued {
  std::string chain;
  MorphismData phi;
};

// Every family instance whose source and target have entries <= 2.
const std::vector<Catalogued>& catalogue() {
  static const std::vector<Catalogued> cat = [] {
    std::vector<Catalogued> out;
    for (std::string chain : {"A", "B", "C", "BA", "CB", "CA", "CBA"}) {
      for (const Weight& lambda : box(2)) {
        std::optional<Weight> w = lambda;
        for (auto it = chain.rbegin(); it != chain.rend() && w; ++it) w = step_target(*it, *w);
        if (!w || !in_box(*w, 2)) continue;
        out.push_back({chain, nabla_chain(chain, lambda)});
      }
    }
    return out;
  }();
  return cat;
}

Scalar random_scalar(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  int n = 0;
  while (n == 0) n = num(rng);
  return Scalar(n, den(rng));
}

// ---------------------------------------------------------------- criteria

Outcome c1_omega_example() {
  IndexTuple I{{2, 1}, {1, 3}, {4, 5}, {2, 5}};
  UElement rhs = nf({d(2, 1), d(1, 3), d(4, 5), d(2, 5)});
  rhs.axpy(Scalar(-1, 2), nf({p(3), d(1, 3), d(2, 5)}));
  rhs.axpy(Scalar(1, 2), nf({p(2), d(2, 1), d(2, 5)}));
  rhs.axpy(Scalar(1, 2), nf({p(4), d(2, 1), d(4, 5)}));
  rhs.axpy(Scalar(1, 4), nf({p(3), p(4)}));
  UElement lhs = omega(I);
  return {lhs == rhs, to_string(lhs)};
}

Outcome c2_sign_equivariance() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> letter(1, 5);
  std::bernoulli_distribution coin(0.5);
  std::size_t checked = 0;
  for (int dd = 2; dd <= 4; ++dd) {
    for (int it = 0; it < 200; ++it) {
      IndexTuple I;
      while (static_cast<int>(I.size()) < dd) {
        int i = letter(rng), j = letter(rng);
        if (i != j) I.push_back({i, j});
      }
      SignedPermutation g = SignedPermutation::identity(dd);
      std::shuffle(g.sigma.begin(), g.sigma.end(), rng);
      for (auto& e : g.eta) e = coin(rng) ? 1 : -1;
      UElement lhs = omega(bd_act(g, I));
      UElement rhs = omega(I);
      rhs.scale(Scalar(sign_character(g)));
      if (!(lhs == rhs)) return {false, "mismatch at degree " + std::to_string(dd)};
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " random (g, I)"};
}

Outcome c3_action_identity() {
  std::size_t checked = 0;
  for (int dd = 0; dd <= 3; ++dd) {
    // representatives up to B_d: nondecreasing tuples of canonical pairs
    std::vector<IndexTuple> reps{{}};
    for (int k = 0; k < dd; ++k) {
      std::vector<IndexTuple> next;
      for (const auto& I : reps) {
        int start = I.empty() ? 0 : I.back().id();
        for (int id = start; id < kNumPairs; ++id) {
          IndexTuple J = I;
          J.push_back(PairIndex::from_id(id));
          next.push_back(J);
        }
      }
      reps = std::move(next);
    }
    for (const auto& I : reps) {
      UElement w = omega(I);
      for (int s = 1; s <= 5; ++s)
        for (int r = 1; r <= 5; ++r) {
          if (s == r) continue;
          if (!(l0_adjoint(s, r, w) == d_arrow(s, r, I))) return {false, "mismatch at degree " + std::to_string(dd)};
          ++checked;
        }
    }
  }
  return {true, std::to_string(checked) + " (I, s, r) triples"};
}

Outcome c4_basis_dimensions() {
  std::ostringstream dims;
  for (int dd = 0; dd <= 6; ++dd) {
    long long expect = 0;
    for (int k = 0; 2 * k <= dd; ++k) expect += binom(k + 4, 4) * binom(10, dd - 2 * k);
    const OmegaBasis& b = omega_basis_cached(dd);
    if (static_cast<long long>(b.labels.size()) != expect) return {false, "size mismatch at degree " + std::to_string(dd)};
    if (static_cast<long long>(pbw_dimension(dd)) != expect) return {false, "PBW count mismatch"};
    if (rank(b.change_of_basis()) != b.labels.size()) return {false, "singular change of basis at " + std::to_string(dd)};
    dims << (dd ? "," : "") << expect;
  }
  return {true, "dimensions " + dims.str()};
}

Outcome c5_module_dimensions() {
  std::size_t count = 0;
  for (const Weight& w : box(3)) {
    if (w[0] + w[1] + w[2] + w[3] > 3) continue;
    IrreducibleModule M = build_irreducible(w);
    if (static_cast<long long>(M.dim()) != hook_content(w) || M.dim() != weyl_dimension(w))
      return {false, "dimension mismatch at " + w.str()};
    ++count;
  }
  if (build_irreducible(Weight(1, 1, 0, 0)).dim() != 40) return {false, "F(1,1,0,0) is not 40-dimensional"};
  return {true, std::to_string(count) + " weights"};
}

Outcome c9_composition() {
  Fail f;
  std::size_t zeros = 0, nonzeros = 0;
  for (std::string sq : {"AA", "BB", "CC"}) {
    for (const Weight& lambda : box(2)) {
      auto mid = step_target(sq[1], lambda);
      if (!mid || !step_target(sq[0], *mid)) continue;
      f.note(nabla_chain(sq, lambda).is_zero(), "nabla_" + sq + " nonzero on " + lambda.str());
      ++zeros;
    }
  }
  std::map<std::string, UMonomial> leads{{"BA", dmono({{1, 2}, {1, 5}})},
                                         {"CB", dmono({{1, 5}, {4, 5}})},
                                         {"CA", dmono({{1, 2}, {4, 5}})},
                                         {"CBA", dmono({{1, 2}, {1, 5}, {4, 5}})}};
  for (const auto& [chain, lead] : leads) {
    for (const Weight& lambda : box(2)) {
      std::optional<Weight> w = lambda;
      for (auto it = chain.rbegin(); it != chain.rend() && w; ++it) w = step_target(*it, *w);
      if (!w) continue;
      auto phi = nabla_chain(chain, lambda);
      f.note(!phi.is_zero(), "nabla_" + chain + " vanishes on " + lambda.str());
      if (phi.is_zero()) continue;
      UElement l = leading_u_part(phi.image(phi.source->hw_index));
      f.note(l.nnz() == 1 && l.front().first == lead, "nabla_" + chain + " leading term " + to_string(l));
      ++nonzeros;
    }
  }
  Outcome o{!f.any, f.any ? f.msg.str() : ""};
  if (o.ok) o.detail = std::to_string(zeros) + " squares vanish, " + std::to_string(nonzeros) + " composites nonzero";
  return o;
}

Outcome c10_duality() {
  Fail f;
  const auto& cat = catalogue();
  for (const auto& c : cat) {
    std::string where = "nabla_" + c.chain + " on " + c.phi.lambda.str();
    auto psi = dual_morphism(c.phi);
    f.note(check_morphism(psi).ok, "dual fails the morphism check: " + where);
    auto back = dual_morphism(psi);
    f.note(back.lambda == c.phi.lambda && back.mu == c.phi.mu, "double dual changes weights: " + where);
    VermaElement w0 = c.phi.image(c.phi.source->hw_index);
    VermaElement w2 = back.image(back.source->hw_index);
    UElement l0 = leading_u_part(w0), l2 = leading_u_part(w2);
    bool prop = l0.nnz() == l2.nnz() && !l0.empty();
    if (prop) {
      Scalar r = l2.front().second / l0.front().second;
      UElement t = l0;
      t.scale(r);
      prop = t == l2;
    }
    f.note(prop, "double dual changes the leading term: " + where);
  }
  return {!f.any, f.any ? f.msg.str() : std::to_string(cat.size()) + " catalogued morphisms"};
}

Outcome c11_check_equivalence() {
  Fail f;
  const auto& cat = catalogue();
  for (const auto& c : cat) {
    bool a = check_morphism(c.phi).ok, b = verify_degree_equations(c.phi).ok();
    f.note(a && b, "catalogued nabla_" + c.chain + " on " + c.phi.lambda.str() + " rejected");
  }
  std::mt19937 rng(99);
  std::map<int, int> rejected;
  auto control = [&](const MorphismData& phi) {
    bool a = check_morphism(phi).ok;
    bool b = verify_degree_equations(phi).ok();
    f.note(a == b, "checks disagree on a control of degree " + std::to_string(phi.degree));
    if (!a && !b) ++rejected[phi.degree];
  };
  // L0-invariant controls: extensions of highest weight vectors that are not singular
  struct Site {
    Weight mu, lambda;
    int d;
  };
  for (const Site& s : {Site{Weight(1, 1, 0, 0), Weight(0, 1, 1, 0), 1}, Site{Weight(1, 1, 0, 0), Weight(1, 0, 0, 1), 1},
                        Site{Weight(1, 1, 0, 0), Weight(2, 0, 1, 0), 1}, Site{Weight(0, 0, 0, 1), Weight(0, 0, 1, 0), 2},
                        Site{Weight(0, 0, 1, 0), Weight(0, 1, 0, 0), 2}, Site{Weight(0, 0, 1, 1), Weight(1, 1, 0, 0), 3},
                        Site{Weight(0, 0, 1, 1), Weight(1, 0, 1, 1), 3}}) {
    auto basis = l0_highest_space(s.mu, s.lambda, s.d);
    for (int k = 0; k < 12; ++k) {
      VermaElement w = basis[0];
      w.terms.scale(random_scalar(rng));
      for (std::size_t b = 1; b < basis.size(); ++b) w.terms.axpy(random_scalar(rng), basis[b].terms);
      if (check_singular(w).ok()) continue;
      control(equivariant_extension(w, s.lambda, s.mu));
    }
  }
  // weight-preserving perturbations of catalogued morphisms
  for (const auto& c : cat) {
    MorphismData phi = c.phi;
    if (phi.coeffs.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick_u(0, phi.coeffs.size() - 1), pick_j(0, phi.source->dim() - 1);
    for (int attempt = 0; attempt < 50; ++attempt) {
      auto it = std::next(phi.coeffs.begin(), static_cast<long>(pick_u(rng)));
      std::size_t j = pick_j(rng);
      Weight target = phi.source->weights[j] - it->first.weight();
      auto sp = phi.target->spaces.find(target);
      if (sp == phi.target->spaces.end()) continue;
      std::uniform_int_distribution<std::size_t> pick_f(0, sp->second.size() - 1);
      it->second[j].axpy(random_scalar(rng), SparseVector(sp->second[pick_f(rng)], Scalar(1)));
      control(phi);
      break;
    }
  }
  for (int dd = 1; dd <= 3; ++dd)
    f.note(rejected[dd] >= 20, "only " + std::to_string(rejected[dd]) + " controls rejected at degree " + std::to_string(dd));
  std::ostringstream os;
  os << cat.size() << " catalogued accepted; controls rejected d1=" << rejected[1] << " d2=" << rejected[2]
     << " d3=" << rejected[3];
  return {!f.any, f.any ? f.msg.str() : os.str()};
}

Outcome c12_dominance() {
  auto weight_of = [](const IndexTuple& I) {
    std::array<int, 5> e{};
    for (auto q : I) {
      e[q.i - 1]++;
      e[q.j - 1]++;
    }
    return Weight::from_epsilon(e);
  };
  auto sorted_entries = [](const IndexTuple& I) {
    std::vector<int> v;
    for (auto q : I) {
      v.push_back(q.i);
      v.push_back(q.j);
    }
    std::sort(v.begin(), v.end());
    return v;
  };
  std::vector<IndexTuple> all;
  for (int a = 0; a < kNumPairs; ++a)
    for (int b = 0; b < kNumPairs; ++b) all.push_back({PairIndex::from_id(a), PairIndex::from_id(b)});
  std::size_t n = 0;
  for (const auto& I : all)
    for (const auto& K : all) {
      auto cmp = dominance_compare(weight_of(I), weight_of(K));
      bool ge = cmp == Dominance::GreaterEqual || cmp == Dominance::Equal;
      auto si = sorted_entries(I), sk = sorted_entries(K);
      bool entrywise = true;
      for (std::size_t k = 0; k < si.size(); ++k) entrywise = entrywise && si[k] <= sk[k];
      if (ge != entrywise) return {false, "mismatch"};
      ++n;
    }
  return {true, std::to_string(n) + " pairs"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {1, "omega expansion of (21,13,45,25)", 1, c1_omega_example},
      {2, "sign equivariance of omega", 10, c2_sign_equivariance},
      {3, "adjoint action equals d_arrow on omega", 60, c3_action_identity},
      {4, "omega basis dimensions and invertibility", 60, c4_basis_dimensions},
      {5, "irreducible module dimensions", 120, c5_module_dimensions},
      {6, "degree-1 classification", 300, [] { return check_classification(1, 2); }},
      {7, "degree-2 classification", 600, [] { return check_classification(2, 2); }},
      {8, "degree-3 classification", 600, [] { return check_classification(3, 1); }},
      {9, "composition algebra", 120, c9_composition},
      {10, "duality", 300, c10_duality},
      {11, "equation checks agree with direct checks", 300, c11_check_equivalence},
      {12, "dominance of d_I weights", 5, c12_dominance},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && secs > c.budget_s) {
      o.ok = false;
      o.detail += " (over the time budget)";
    }
    if (!o.ok) ++failures;
    std::printf("[%s] %2d %-44s %8.2fs / %4.0fs  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, c.budget_s,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
