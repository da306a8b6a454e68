#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "e510/sl5.hpp"
#include "e510/sparse.hpp"
#include "e510/uminus.hpp"

namespace e510 {

// Generators of the ambient polynomial ring: x_i, x_ij, x*_ij, x*_i.
constexpr int kNumTensorGens = 30;
int gen_x(int i);
int gen_xx(PairIndex p);  // canonical pair
int gen_xs(PairIndex p);  // x*_ij, canonical pair
int gen_xs1(int i);       // x*_i

/// Monomial in the 30 generators, 4-bit exponents. The packing puts
/// generator 0 in the most significant nibble, so the built-in order is the
/// lexicographic order on exponent tuples.
class TensorMonomial {
 public:
  TensorMonomial() = default;
  int exp(int g) const;
  /// Throws std::out_of_range if the exponent leaves 0..15.
  TensorMonomial with_exp(int g, int e) const;
  TensorMonomial shifted(int g, int delta) const { return with_exp(g, exp(g) + delta); }

  std::array<int, 5> epsilon_weight() const;
  Weight weight() const { return Weight::from_epsilon(epsilon_weight()); }
  std::string str() const;

  friend auto operator<=>(const TensorMonomial&, const TensorMonomial&) = default;

 private:
  std::uint64_t hi_ = 0;
  std::uint64_t lo_ = 0;
};

using TensorVector = BasicSparseVector<TensorMonomial>;
std::string to_string(const TensorVector& v);

/// x_r ∂_s acting as a derivation; r == s gives the diagonal operator.
TensorVector act_generator(int r, int s, const TensorMonomial& m);
TensorVector act_generator(int r, int s, const TensorVector& v);

/// x1^a x12^b x*45^c x*5^d.
TensorMonomial highest_weight_monomial(const Weight& lambda);

/// Index of x_r ∂_s in per-generator tables.
inline int gen_slot(int r, int s) { return (r - 1) * 5 + (s - 1); }

/// A finite-dimensional weight module given by matrices of the 20 root
/// vectors x_r∂_s. A module may be truncated at some depth below the
/// highest weight; images that would leave the built range are unknown.
class WeightModule {
 public:
  Weight highest;
  std::vector<Weight> weights;
  std::vector<int> depth;  // height of highest - weight
  std::size_t hw_index = 0;
  bool complete = true;
  int max_depth = -1;  // -1: no truncation
  std::map<Weight, std::vector<std::size_t>> spaces;

  std::size_t dim() const { return weights.size(); }

  bool known(int r, int s, std::size_t j) const;
  /// Image of basis vector j under x_r∂_s (r != s). Throws std::logic_error if unknown.
  const SparseVector& act(int r, int s, std::size_t j) const;
  SparseVector act(int r, int s, const SparseVector& v) const;

  void set_action(int r, int s, std::size_t j, SparseVector image);
  void set_unknown(int r, int s, std::size_t j);
  void resize_actions();

 private:
  std::array<std::vector<SparseVector>, 25> action_;
  std::array<std::vector<char>, 25> known_;
};

/// One step b_j = sum c * f_i b_prev with f_i = x_{i+1} ∂_i.
struct RecipeTerm {
  std::size_t prev;
  int i;
  Scalar coeff;
};

class IrreducibleModule : public WeightModule {
 public:
  std::vector<TensorVector> basis;  // pivot coefficient 1, zero at other pivots of its weight
  std::vector<TensorMonomial> pivots;
  std::vector<std::vector<RecipeTerm>> recipes;

  /// Coordinates of v, or nullopt when v is not in the span of the basis.
  std::optional<SparseVector> coordinates(const TensorVector& v) const;

 private:
  friend IrreducibleModule build_irreducible(const Weight&, int);
  std::map<TensorMonomial, std::size_t> pivot_index_;
};

/// Closure of the highest weight monomial under the lowering operators.
/// max_depth < 0 builds the whole module and checks its dimension against
/// the Weyl formula (std::logic_error "dimension mismatch" on failure).
/// Throws std::invalid_argument for a non-dominant weight.
IrreducibleModule build_irreducible(const Weight& lambda, int max_depth = -1);

/// Abstract dual: negated transposed matrices on the dual basis. Requires a
/// complete module.
WeightModule dual_module(const WeightModule& m);

/// Shared, thread-safe cache. Returns a module built at least to min_depth
/// (min_depth < 0: complete).
std::shared_ptr<const IrreducibleModule> irreducible(const Weight& lambda, int min_depth = -1);

}  // namespace e510
