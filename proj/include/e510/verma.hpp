#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "e510/modules.hpp"
#include "e510/sl5.hpp"
#include "e510/sparse.hpp"
#include "e510/uminus.hpp"

namespace e510 {

/// Basis element u ⊗ b_f of U(L_-) ⊗ F.
struct VKey {
  UMonomial u;
  std::uint32_t f = 0;
  friend auto operator<=>(const VKey&, const VKey&) = default;
};

using VTerms = BasicSparseVector<VKey>;

/// Element of the Verma module M(F) = U(L_-) ⊗ F for a weight module F.
class VermaElement {
 public:
  VermaElement() = default;
  VermaElement(std::shared_ptr<const WeightModule> m, VTerms t) : module(std::move(m)), terms(std::move(t)) {}

  std::shared_ptr<const WeightModule> module;
  VTerms terms;

  bool is_zero() const { return terms.empty(); }
  /// Degree of the first term, -1 for zero.
  int degree() const { return terms.empty() ? -1 : terms.front().first.u.degree(); }
  bool is_homogeneous() const;
  /// Weight of the first term; nullopt for zero.
  std::optional<Weight> weight() const;
  bool is_weight_vector() const;
  std::string str() const;  // "d12 (x) v0 + ..."

  friend bool operator==(const VermaElement& a, const VermaElement& b) { return a.terms == b.terms; }
};

/// An element of L_0 = sl5 written as sum c_rs x_r∂_s; the diagonal must be traceless.
struct L0Element {
  std::array<Scalar, 25> c{};
  Scalar& at(int r, int s) { return c[gen_slot(r, s)]; }
  const Scalar& at(int r, int s) const { return c[gen_slot(r, s)]; }
  bool is_zero() const;
  static L0Element generator(int r, int s);
};

/// Action of an L_0 element on M(F). Throws std::invalid_argument for a diagonal with nonzero trace.
VermaElement act_l0(const L0Element& x, const VermaElement& w);
/// Action of x_r∂_s, r != s.
VermaElement act_l0(int r, int s, const VermaElement& w);

/// Element of L_1 (closed 2-forms with linear coefficients): key (p-1)*10 + pair id
/// stands for x_p d_ij.
using L1Element = BasicSparseVector<int>;
int l1_key(int p, PairIndex pair);
L1Element l1_generator(int p, PairIndex pair);  // pair may be non-canonical
/// [x_r∂_s, X] for X in L_1.
L1Element l1_adjoint(int r, int s, const L1Element& x);
/// [X, d_kl] in L_0 and [X, ∂_q] in L_{-1}.
L0Element l1_bracket_d(const L1Element& x, PairIndex kl);
UElement l1_bracket_partial(const L1Element& x, int q);
/// Basis of L_1 obtained from x5 d45 by repeated raising; 40 elements.
const std::vector<L1Element>& l1_spanning_set();

VermaElement act_l1(const L1Element& x, const VermaElement& w);
VermaElement act_x5d45(const VermaElement& w);

/// Candidate weights mu + wt(u), u of degree d, that are dominant.
std::vector<Weight> candidate_weights(const Weight& mu, int d);

/// Weight-lambda part of (U_-)_d ⊗ F(mu) killed by the raising operators.
std::vector<VermaElement> l0_highest_space(const Weight& mu, const Weight& lambda, int d);
/// Singular vectors of weight lambda and degree d in M(mu), each normalized so
/// that the least monomial of its leading term has coefficient 1.
std::vector<VermaElement> singular_space(const Weight& mu, const Weight& lambda, int d);

struct SingularChecks {
  bool l0_highest = false;
  bool x5d45 = false;
  bool full_l1 = false;
  bool ok() const { return l0_highest && x5d45 && full_l1; }
};
SingularChecks check_singular(const VermaElement& w);

struct SingularResult {
  Weight lambda;
  std::vector<VermaElement> basis;
};
/// Solutions grouped by lambda, sorted by lambda; output does not depend on threads.
std::vector<SingularResult> singular_vectors(const Weight& mu, int d, int threads = 1);

/// Terms whose F-part lies in the highest weight line.
VermaElement leading_term(const VermaElement& w);
/// U-part of the leading term, as coefficient of the highest weight vector.
UElement leading_u_part(const VermaElement& w);
/// Scales w so that the least monomial of its leading term has coefficient 1.
VermaElement normalize(const VermaElement& w);

/// Column j is the image of source basis vector j.
using LinearMap = std::vector<SparseVector>;

struct MorphismData {
  int degree = 0;
  Weight lambda;  // source
  Weight mu;      // target
  std::map<UMonomial, LinearMap> coeffs;
  std::shared_ptr<const WeightModule> source;
  std::shared_ptr<const WeightModule> target;

  bool is_zero() const { return coeffs.empty(); }
  /// Φ(b_j) in M(target).
  VermaElement image(std::size_t j) const;
  VermaElement image(const SparseVector& v) const;
};

/// Extends hw ↦ w equivariantly using the stored lowering words of F(lambda).
/// Requires w to be killed by the raising operators (std::invalid_argument otherwise).
MorphismData equivariant_extension(const VermaElement& w, const Weight& lambda, const Weight& mu);
/// Throws std::invalid_argument("not singular") unless w is a singular vector.
MorphismData morphism_from_singular(const VermaElement& w, const Weight& lambda, const Weight& mu);

/// u Φ(v).
VermaElement apply_morphism(const MorphismData& phi, const UElement& u, const SparseVector& v);
/// phi2 ∘ phi1. Throws std::invalid_argument("weight mismatch") or ("module mismatch").
MorphismData compose(const MorphismData& phi2, const MorphismData& phi1);

/// Φ = sum over labels ∂^T d_I of ∂_T ω_I ⊗ θ_I^T.
std::map<UMonomial, LinearMap> theta_decomposition(const MorphismData& phi);
/// Ψ = sum ∂_T ω_I ⊗ (-1)^|T| (θ_I^T)^*, between the dual modules.
MorphismData dual_morphism(const MorphismData& phi);

struct CheckResult {
  bool ok = true;
  std::string diagnostic;
};
/// (a) x.Φ = 0 for all 20 root vectors and (b) x5d45 Φ(hw) = 0.
CheckResult check_morphism(const MorphismData& phi);
CheckResult check_l0_invariance(const MorphismData& phi);

struct EquationFamily {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::string first_failure;
};
struct EquationReport {
  bool precondition = true;  // L_0 invariance
  std::string diagnostic;
  std::vector<EquationFamily> families;
  bool ok() const;
};
/// Characterizing equations of morphisms in degrees 1, 2 and 3.
/// Throws std::invalid_argument("unsupported degree") otherwise.
EquationReport verify_degree_equations(const MorphismData& phi);

enum class Family { A, B, C, BA, CB, CA, CBA };
std::string family_name(Family f);  // "nabla_A", ...
std::optional<Family> family_from_name(const std::string& s);
int family_degree(Family f);

/// Label for a degree-d hit (lambda, mu, leading term), or nullopt.
std::optional<Family> family_label(const Weight& mu, const Weight& lambda, int d, const UElement& leading);

/// Source weight of a single-step family morphism ending at mu, if defined.
std::optional<Weight> step_source(char step, const Weight& target);
/// Target weight of a single-step morphism (A, B or C) starting at lambda, if defined.
std::optional<Weight> step_target(char step, const Weight& source);
/// The degree-1 morphism of the given type with source lambda, found by search.
MorphismData nabla(char step, const Weight& lambda);
/// Composite of steps applied right to left, e.g. "CBA" on M(1,1,0,0).
MorphismData nabla_chain(const std::string& steps, const Weight& lambda);

struct ClassifyRow {
  Weight mu;
  Weight lambda;
  int degree = 0;
  std::size_t dimension = 0;
  std::string label;  // family name, "ANOMALY" or "exploratory"
  std::vector<VermaElement> vectors;
};
/// All hits for dominant mu with entries <= max_entry, sorted by (mu, lambda).
std::vector<ClassifyRow> classify(int d, int max_entry, int threads = 1);

}  // namespace e510
