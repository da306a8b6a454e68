#include "e510/sl5.hpp"

#include <gmpxx.h>

#include <ostream>
#include <stdexcept>

namespace e510 {

int Weight::pair_value(int i, int j) const {
  if (i < 1 || j > 5 || i >= j) throw std::invalid_argument("Weight::pair_value: need 1 <= i < j <= 5");
  int s = 0;
  for (int k = i; k < j; ++k) s += c[k - 1];
  return s;
}

Weight Weight::from_epsilon(const std::array<int, 5>& e) {
  return Weight(e[0] - e[1], e[1] - e[2], e[2] - e[3], e[3] - e[4]);
}

Weight Weight::operator+(const Weight& o) const {
  return Weight(c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2], c[3] + o.c[3]);
}
Weight Weight::operator-(const Weight& o) const {
  return Weight(c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2], c[3] - o.c[3]);
}
Weight Weight::operator-() const { return Weight(-c[0], -c[1], -c[2], -c[3]); }

bool Weight::is_dominant() const { return c[0] >= 0 && c[1] >= 0 && c[2] >= 0 && c[3] >= 0; }

std::string Weight::str() const {
  return "[" + std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]) + "," +
         std::to_string(c[3]) + "]";
}

std::ostream& operator<<(std::ostream& os, const Weight& w) { return os << w.str(); }

Weight simple_root(int k) {
  switch (k) {
    case 1: return Weight(2, -1, 0, 0);
    case 2: return Weight(-1, 2, -1, 0);
    case 3: return Weight(0, -1, 2, -1);
    case 4: return Weight(0, 0, -1, 2);
    default: throw std::invalid_argument("simple_root: k must be 1..4");
  }
}

Weight root(int i, int j) {
  if (i < 1 || i > 5 || j < 1 || j > 5 || i == j) throw std::invalid_argument("root: bad indices");
  std::array<int, 5> e{};
  e[i - 1] += 1;
  e[j - 1] -= 1;
  return Weight::from_epsilon(e);
}

std::string to_string(Dominance d) {
  switch (d) {
    case Dominance::LessEqual: return "less-or-equal";
    case Dominance::GreaterEqual: return "greater-or-equal";
    case Dominance::Equal: return "equal";
    case Dominance::Incomparable: return "incomparable";
  }
  return "?";
}

std::optional<std::array<int, 4>> root_coordinates(const Weight& w) {
  // 5 * inverse Cartan matrix of A4
  static constexpr int M[4][4] = {{4, 3, 2, 1}, {3, 6, 4, 2}, {2, 4, 6, 3}, {1, 2, 3, 4}};
  std::array<int, 4> out{};
  for (int i = 0; i < 4; ++i) {
    int s = 0;
    for (int j = 0; j < 4; ++j) s += M[i][j] * w.c[j];
    if (s % 5 != 0) return std::nullopt;
    out[i] = s / 5;
  }
  return out;
}

std::optional<int> depth_below(const Weight& lambda, const Weight& mu) {
  auto rc = root_coordinates(mu - lambda);
  if (!rc) return std::nullopt;
  int h = 0;
  for (int x : *rc) {
    if (x < 0) return std::nullopt;
    h += x;
  }
  return h;
}

Dominance dominance_compare(const Weight& lambda, const Weight& mu) {
  if (lambda == mu) return Dominance::Equal;
  if (depth_below(lambda, mu)) return Dominance::LessEqual;
  if (depth_below(mu, lambda)) return Dominance::GreaterEqual;
  return Dominance::Incomparable;
}

std::uint64_t weyl_dimension(const Weight& lambda) {
  if (!lambda.is_dominant()) throw std::invalid_argument("not dominant");
  mpz_class num = 1, den = 1;
  for (int i = 1; i <= 5; ++i) {
    for (int j = i + 1; j <= 5; ++j) {
      num *= lambda.pair_value(i, j) + (j - i);
      den *= j - i;
    }
  }
  mpz_class q = num / den;
  if (!q.fits_ulong_p()) throw std::overflow_error("weyl_dimension: too large");
  return q.get_ui();
}

Weight dual_weight(const Weight& lambda) { return Weight(lambda.c[3], lambda.c[2], lambda.c[1], lambda.c[0]); }

}  // namespace e510
