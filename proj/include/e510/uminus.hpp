#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "e510/sl5.hpp"
#include "e510/sparse.hpp"

namespace e510 {

/// Ordered index pair (i, j) standing for d_ij; i == j is the zero generator.
struct PairIndex {
  int i = 1;
  int j = 2;

  bool is_zero() const { return i == j; }
  bool is_canonical() const { return i < j; }
  PairIndex bar() const { return {j, i}; }
  /// Position of the canonical pair in (1,2) < (1,3) < ... < (4,5); requires i < j.
  int id() const;
  static PairIndex from_id(int id);
  friend auto operator<=>(const PairIndex&, const PairIndex&) = default;
};

constexpr int kNumPairs = 10;

struct EpsT {
  int sign;  // -1, 0, +1
  int t;     // the missing index, or 1 when sign == 0
};

/// Sign of the permutation (i,j,k,l,t) with t the missing index.
EpsT eps_t(int i, int j, int k, int l);
inline EpsT eps_t(PairIndex a, PairIndex b) { return eps_t(a.i, a.j, b.i, b.j); }

/// PBW monomial ∂^del (∂_1..∂_5) times an increasing product of distinct odd
/// pairs. Monomials are totally ordered by degree, then ∂-count, then the
/// nondecreasing ∂ tuple T lexicographically, then the pair list
/// lexicographically; the packed key realizes exactly this order.
class UMonomial {
 public:
  UMonomial() : UMonomial(pack({}, 0)) {}
  /// Throws std::invalid_argument unless pairs are canonical and strictly increasing.
  static UMonomial make(const std::array<int, 5>& del, const std::vector<PairIndex>& pairs);
  static UMonomial from_parts(const std::array<int, 5>& del, std::uint16_t mask);
  static UMonomial from_key(std::uint64_t key) { return UMonomial(key); }

  std::uint64_t key() const { return key_; }
  /// Bit k set when the pair with id k is present.
  std::uint16_t mask() const;
  int del(int t) const { return 15 - static_cast<int>((key_ >> (10 + 4 * (5 - t))) & 0xF); }
  std::array<int, 5> dels() const;
  std::vector<PairIndex> pairs() const;
  int num_pairs() const { return degree() - 2 * num_del(); }
  int num_del() const { return static_cast<int>((key_ >> 30) & 0x7F); }
  int degree() const { return static_cast<int>(key_ >> 37); }

  /// d_ij carries e_i + e_j, ∂_t carries -e_t.
  std::array<int, 5> epsilon_weight() const;
  Weight weight() const { return Weight::from_epsilon(epsilon_weight()); }

  /// ∂ multidegree shifted by +delta at index t; throws on overflow/underflow.
  UMonomial add_del(int t, int delta) const;

  std::string str() const;    // "D3^2*d12*d45", "1" for the unit
  std::string latex() const;  // "\partial_{3}^{2}d_{12}d_{45}"

  friend auto operator<=>(const UMonomial&, const UMonomial&) = default;

 private:
  explicit UMonomial(std::uint64_t k) : key_(k) {}
  static std::uint64_t pack(const std::array<int, 5>& del, std::uint16_t mask);
  std::uint64_t key_;
};

using UElement = BasicSparseVector<UMonomial>;

std::string to_string(const UElement& u);
std::string to_latex(const UElement& u);

/// A letter of a word in U(L_-): either d_{pair} or ∂_t.
struct UGenerator {
  bool is_del = false;
  int t = 0;
  PairIndex pair{};
  static UGenerator d(int i, int j) { return {false, 0, {i, j}}; }
  static UGenerator partial(int t) { return {true, t, {}}; }
};

/// PBW normal form of a word of generators.
UElement normal_form(const std::vector<UGenerator>& word);
UElement multiply(const UMonomial& a, const UMonomial& b);
UElement multiply(const UElement& a, const UElement& b);
UElement monomial_element(const UMonomial& m);

using IndexTuple = std::vector<PairIndex>;
/// A set of disjoint position pairs {k,l}, 1-based with k < l.
using SifSet = std::vector<std::pair<int, int>>;

std::vector<SifSet> sif_subsets(int d);
int crossing_number(const SifSet& s);
/// 1/2 (-1)^{k+l} eps(I_k, I_l) ∂_t, positions 1-based.
UElement contraction(const IndexTuple& I, int k, int l);
UElement omega(const IndexTuple& I);

/// Signed permutation: J_j = I_{sigma_j}, barred when eta_j = -1.
struct SignedPermutation {
  std::vector<int> sigma;  // 1-based images
  std::vector<int> eta;    // ±1

  static SignedPermutation identity(int d);
  int rank() const { return static_cast<int>(sigma.size()); }
  /// Throws std::invalid_argument unless sigma is a bijection and eta is ±1.
  void validate() const;
};

/// Throws std::invalid_argument on rank mismatch.
IndexTuple bd_act(const SignedPermutation& g, const IndexTuple& I);
int sign_character(const SignedPermutation& g);

/// Adjoint action of x_s ∂_r (s == r allowed) as an even derivation.
UElement l0_adjoint(int s, int r, const UElement& u);
UElement l0_adjoint(int s, int r, const UMonomial& m);
/// Sum over every occurrence of the letter r in I of omega with r replaced by s.
UElement d_arrow(int s, int r, const IndexTuple& I);

/// PBW monomials of degree d: ∂-count ascending, then the ∂ tuple and the
/// pair list lexicographically.
std::vector<UMonomial> pbw_monomials(int d);
std::size_t pbw_dimension(int d);

/// Basis {∂_T ω_I} of (U_-)_d. A label is the UMonomial ∂^T d_I; element k
/// is ∂_T ω_I for labels[k], expanded in PBW monomials.
struct OmegaBasis {
  int degree = 0;
  std::vector<UMonomial> labels;
  std::vector<UElement> elements;
  std::map<UMonomial, std::size_t> index;
  /// rows: labels, columns: PBW monomials in labels order.
  SparseMatrix change_of_basis() const;
};

/// ∂_T ω_I for the label ∂^T d_I.
UElement omega_of_label(const UMonomial& label);
OmegaBasis omega_basis(int d);
/// Cached, thread-safe.
const OmegaBasis& omega_basis_cached(int d);
const UElement& omega_of_label_cached(const UMonomial& label);

/// Rewrites sum_u u ⊗ c_u (PBW) as sum_b (∂_T ω_I)_b ⊗ C_b. The change of
/// basis is unitriangular in the ∂-count, so the terms are peeled off by
/// increasing ∂-count.
template <class C>
std::map<UMonomial, C> decompose_in_omega(std::map<UMonomial, C> terms,
                                          const std::function<void(C&, const Scalar&, const C&)>& axpy,
                                          const std::function<bool(const C&)>& is_zero) {
  std::map<UMonomial, C> out;
  while (!terms.empty()) {
    int k = 1 << 30;
    for (const auto& [m, c] : terms) k = std::min(k, m.num_del());
    std::vector<std::pair<UMonomial, C>> layer;
    for (const auto& [m, c] : terms)
      if (m.num_del() == k) layer.emplace_back(m, c);
    for (auto& [label, coeff] : layer) {
      const UElement& w = omega_of_label_cached(label);
      for (const auto& [m, s] : w) {
        auto it = terms.find(m);
        if (it == terms.end()) {
          C neg{};
          axpy(neg, -s, coeff);
          terms.emplace(m, std::move(neg));
        } else {
          axpy(it->second, -s, coeff);
          if (is_zero(it->second)) terms.erase(it);
        }
      }
      out.emplace(label, std::move(coeff));
    }
  }
  return out;
}

}  // namespace e510
