#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace e510 {

/// sl5 weight in fundamental-weight coordinates (l12, l23, l34, l45).
struct Weight {
  std::array<int, 4> c{0, 0, 0, 0};

  Weight() = default;
  constexpr Weight(int a, int b, int cc, int d) : c{a, b, cc, d} {}

  int operator[](int k) const { return c[k]; }
  /// l_ij = sum of coordinates k = i .. j-1 (1-based, i < j).
  int pair_value(int i, int j) const;

  /// Weight of the vector e in Z^5 of epsilon coordinates: l_k = e_k - e_{k+1}.
  static Weight from_epsilon(const std::array<int, 5>& e);

  Weight operator+(const Weight& o) const;
  Weight operator-(const Weight& o) const;
  Weight operator-() const;
  friend auto operator<=>(const Weight&, const Weight&) = default;

  bool is_dominant() const;
  std::string str() const;  // "[a,b,c,d]"
};

std::ostream& operator<<(std::ostream& os, const Weight& w);

/// Simple root alpha_{k,k+1} for k = 1..4.
Weight simple_root(int k);
/// The root e_i - e_j (i != j, 1-based).
Weight root(int i, int j);

enum class Dominance { LessEqual, GreaterEqual, Equal, Incomparable };
std::string to_string(Dominance d);

/// Coordinates of w in the simple-root basis when they are all integers.
std::optional<std::array<int, 4>> root_coordinates(const Weight& w);

/// If mu - lambda is a nonnegative integer root combination, its height.
std::optional<int> depth_below(const Weight& lambda, const Weight& mu);

Dominance dominance_compare(const Weight& lambda, const Weight& mu);

/// Throws std::invalid_argument("not dominant").
std::uint64_t weyl_dimension(const Weight& lambda);

Weight dual_weight(const Weight& lambda);

}  // namespace e510
