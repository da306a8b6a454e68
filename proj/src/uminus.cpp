#include "e510/uminus.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace e510 {

namespace {

constexpr int kPairI[kNumPairs] = {1, 1, 1, 1, 2, 2, 2, 3, 3, 4};
constexpr int kPairJ[kNumPairs] = {2, 3, 4, 5, 3, 4, 5, 4, 5, 5};

void check_letter(int x) {
  if (x < 1 || x > 5) throw std::invalid_argument("index out of range 1..5");
}

// One term of a right multiplication by an odd generator: the new pair mask,
// an optional ∂_t (t = 0 for none) and a sign.
struct RTerm {
  std::uint16_t mask;
  int t;
  int sign;
};

using RTable = std::vector<std::vector<RTerm>>;  // [mask * 10 + pair]

std::vector<RTerm> rmul_rec(std::uint16_t mask, int b) {
  if (mask == 0) return {{static_cast<std::uint16_t>(1u << b), 0, 1}};
  int last = 15 - std::countl_zero(static_cast<std::uint16_t>(mask)) ;
  if (b > last) return {{static_cast<std::uint16_t>(mask | (1u << b)), 0, 1}};
  if (b == last) return {};
  auto rest = static_cast<std::uint16_t>(mask & ~(1u << last));
  std::vector<RTerm> out;
  for (const RTerm& r : rmul_rec(rest, b)) out.push_back({static_cast<std::uint16_t>(r.mask | (1u << last)), r.t, -r.sign});
  EpsT e = eps_t(PairIndex::from_id(last), PairIndex::from_id(b));
  if (e.sign != 0) out.push_back({rest, e.t, e.sign});
  return out;
}

const RTable& rtable() {
  static const RTable table = [] {
    RTable t(1024 * kNumPairs);
    for (int m = 0; m < 1024; ++m)
      for (int b = 0; b < kNumPairs; ++b) t[m * kNumPairs + b] = rmul_rec(static_cast<std::uint16_t>(m), b);
    return t;
  }();
  return table;
}

std::uint16_t bitrev10(std::uint16_t m) {
  static const auto table = [] {
    std::array<std::uint16_t, 1024> t{};
    for (unsigned x = 0; x < 1024; ++x)
      for (int b = 0; b < kNumPairs; ++b)
        if (x & (1u << b)) t[x] = static_cast<std::uint16_t>(t[x] | (1u << (9 - b)));
    return t;
  }();
  return table[m];
}

std::string coeff_prefix(const Scalar& c, bool first, bool unit_monomial) {
  std::string s;
  Scalar a = c;
  if (c.sign() < 0) {
    s = first ? "-" : " - ";
    a = -c;
  } else if (!first) {
    s = " + ";
  }
  if (!a.is_one() || unit_monomial) s += a.str() + (unit_monomial ? "" : "*");
  return s;
}

}  // namespace

int PairIndex::id() const {
  check_letter(i);
  check_letter(j);
  if (i >= j) throw std::invalid_argument("PairIndex::id: pair not canonical");
  static constexpr int base[5] = {0, 4, 7, 9, 10};
  return base[i - 1] + (j - i - 1);
}

PairIndex PairIndex::from_id(int id) {
  if (id < 0 || id >= kNumPairs) throw std::invalid_argument("PairIndex::from_id: out of range");
  return {kPairI[id], kPairJ[id]};
}

EpsT eps_t(int i, int j, int k, int l) {
  check_letter(i);
  check_letter(j);
  check_letter(k);
  check_letter(l);
  int seen = (1 << i) | (1 << j) | (1 << k) | (1 << l);
  if (std::popcount(static_cast<unsigned>(seen)) < 4) return {0, 1};
  int t = 1;
  while (seen & (1 << t)) ++t;
  int p[5] = {i, j, k, l, t};
  int inv = 0;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b)
      if (p[a] > p[b]) ++inv;
  return {inv % 2 == 0 ? 1 : -1, t};
}

UMonomial UMonomial::make(const std::array<int, 5>& del, const std::vector<PairIndex>& pairs) {
  std::uint16_t mask = 0;
  int prev = -1;
  for (const auto& p : pairs) {
    if (!p.is_canonical()) throw std::invalid_argument("UMonomial: pair not canonical");
    int id = p.id();
    if (id <= prev) throw std::invalid_argument("UMonomial: pairs must be strictly increasing");
    prev = id;
    mask = static_cast<std::uint16_t>(mask | (1u << id));
  }
  return from_parts(del, mask);
}

UMonomial UMonomial::from_parts(const std::array<int, 5>& del, std::uint16_t mask) {
  if (mask >= 1024) throw std::invalid_argument("UMonomial: bad pair mask");
  return UMonomial(pack(del, mask));
}

std::uint64_t UMonomial::pack(const std::array<int, 5>& del, std::uint16_t mask) {
  std::uint64_t k = 1023u - bitrev10(mask);
  int nd = 0;
  for (int t = 0; t < 5; ++t) {
    if (del[t] < 0 || del[t] > 15) throw std::out_of_range("UMonomial: ∂ exponent out of range 0..15");
    k |= static_cast<std::uint64_t>(15 - del[t]) << (10 + 4 * (4 - t));
    nd += del[t];
  }
  int deg = 2 * nd + std::popcount(static_cast<unsigned>(mask));
  k |= static_cast<std::uint64_t>(nd) << 30;
  k |= static_cast<std::uint64_t>(deg) << 37;
  return k;
}

std::uint16_t UMonomial::mask() const {
  return bitrev10(static_cast<std::uint16_t>(1023u - (key_ & 0x3FF)));
}

std::array<int, 5> UMonomial::dels() const {
  std::array<int, 5> d{};
  for (int t = 1; t <= 5; ++t) d[t - 1] = del(t);
  return d;
}

std::vector<PairIndex> UMonomial::pairs() const {
  std::vector<PairIndex> out;
  for (int b = 0; b < kNumPairs; ++b)
    if (mask() & (1u << b)) out.push_back(PairIndex::from_id(b));
  return out;
}

std::array<int, 5> UMonomial::epsilon_weight() const {
  std::array<int, 5> e{};
  for (int t = 1; t <= 5; ++t) e[t - 1] -= del(t);
  for (const auto& p : pairs()) {
    e[p.i - 1] += 1;
    e[p.j - 1] += 1;
  }
  return e;
}

UMonomial UMonomial::add_del(int t, int delta) const {
  check_letter(t);
  auto d = dels();
  d[t - 1] += delta;
  return from_parts(d, mask());
}

std::string UMonomial::str() const {
  std::vector<std::string> parts;
  for (int t = 1; t <= 5; ++t) {
    int e = del(t);
    if (e == 0) continue;
    parts.push_back("D" + std::to_string(t) + (e > 1 ? "^" + std::to_string(e) : ""));
  }
  for (const auto& p : pairs()) parts.push_back("d" + std::to_string(p.i) + std::to_string(p.j));
  if (parts.empty()) return "1";
  std::string s = parts[0];
  for (std::size_t k = 1; k < parts.size(); ++k) s += "*" + parts[k];
  return s;
}

std::string UMonomial::latex() const {
  std::string s;
  for (int t = 1; t <= 5; ++t) {
    int e = del(t);
    if (e == 0) continue;
    s += "\\partial_{" + std::to_string(t) + "}";
    if (e > 1) s += "^{" + std::to_string(e) + "}";
  }
  for (const auto& p : pairs()) s += "d_{" + std::to_string(p.i) + std::to_string(p.j) + "}";
  return s.empty() ? "1" : s;
}

std::string to_string(const UElement& u) {
  if (u.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : u) {
    bool unit = m == UMonomial();
    s += coeff_prefix(c, first, unit);
    if (!unit) s += m.str();
    first = false;
  }
  return s;
}

std::string to_latex(const UElement& u) {
  if (u.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : u) {
    Scalar a = c;
    if (c.sign() < 0) {
      s += first ? "-" : " - ";
      a = -c;
    } else if (!first) {
      s += " + ";
    }
    bool unit = m == UMonomial();
    if (!a.is_one() || unit) {
      if (a.is_integer()) {
        s += a.str();
      } else {
        auto q = a.to_mpq();
        s += "\\frac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
      }
    }
    if (!unit) s += m.latex();
    first = false;
  }
  return s;
}

UElement monomial_element(const UMonomial& m) { return UElement(m, Scalar(1)); }

UElement multiply(const UMonomial& a, const UMonomial& b) {
  const RTable& table = rtable();
  struct Work {
    std::uint16_t mask;
    std::array<int, 5> del;
    long long coeff;
  };
  std::vector<Work> cur{{a.mask(), a.dels(), 1}};
  for (int p = 0; p < kNumPairs; ++p) {
    if (!(b.mask() & (1u << p))) continue;
    std::vector<Work> next;
    for (const Work& w : cur) {
      for (const RTerm& r : table[w.mask * kNumPairs + p]) {
        Work n{r.mask, w.del, w.coeff * r.sign};
        if (r.t) n.del[r.t - 1] += 1;
        next.push_back(n);
      }
    }
    cur = std::move(next);
  }
  auto bd = b.dels();
  std::vector<UElement::Entry> entries;
  entries.reserve(cur.size());
  for (Work& w : cur) {
    for (int t = 0; t < 5; ++t) w.del[t] += bd[t];
    entries.emplace_back(UMonomial::from_parts(w.del, w.mask), Scalar(w.coeff));
  }
  return UElement::from_unsorted(std::move(entries));
}

UElement multiply(const UElement& a, const UElement& b) {
  std::vector<UElement::Entry> entries;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Scalar c = ca * cb;
      for (const auto& [m, s] : multiply(ma, mb)) entries.emplace_back(m, c * s);
    }
  }
  return UElement::from_unsorted(std::move(entries));
}

UElement normal_form(const std::vector<UGenerator>& word) {
  UElement acc = monomial_element(UMonomial());
  for (const auto& g : word) {
    UElement letter;
    if (g.is_del) {
      check_letter(g.t);
      std::array<int, 5> d{};
      d[g.t - 1] = 1;
      letter = monomial_element(UMonomial::from_parts(d, 0));
    } else {
      check_letter(g.pair.i);
      check_letter(g.pair.j);
      if (g.pair.is_zero()) return {};
      PairIndex c = g.pair.is_canonical() ? g.pair : g.pair.bar();
      letter = UElement(UMonomial::make({}, {c}), Scalar(g.pair.is_canonical() ? 1 : -1));
    }
    acc = multiply(acc, letter);
    if (acc.empty()) return acc;
  }
  return acc;
}

std::vector<SifSet> sif_subsets(int d) {
  if (d < 0) throw std::invalid_argument("sif_subsets: negative degree");
  std::vector<SifSet> out;
  SifSet cur;
  std::vector<bool> used(d + 1, false);
  std::function<void(int)> rec = [&](int pos) {
    while (pos <= d && used[pos]) ++pos;
    if (pos > d) {
      out.push_back(cur);
      return;
    }
    used[pos] = true;
    rec(pos + 1);  // pos unmatched
    for (int l = pos + 1; l <= d; ++l) {
      if (used[l]) continue;
      used[l] = true;
      cur.emplace_back(pos, l);
      rec(pos + 1);
      cur.pop_back();
      used[l] = false;
    }
    used[pos] = false;
  };
  rec(1);
  std::stable_sort(out.begin(), out.end(), [](const SifSet& a, const SifSet& b) { return a.size() < b.size(); });
  return out;
}

int crossing_number(const SifSet& s) {
  int c = 0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      auto [h, m] = s[a];
      if (h > m) std::swap(h, m);
      auto [k, l] = s[b];
      bool kin = h < k && k < m;
      bool lin = h < l && l < m;
      if (kin != lin) ++c;
    }
  }
  return c;
}

UElement contraction(const IndexTuple& I, int k, int l) {
  int d = static_cast<int>(I.size());
  if (k < 1 || l > d || k >= l) throw std::invalid_argument("contraction: need 1 <= k < l <= length");
  EpsT e = eps_t(I[k - 1], I[l - 1]);
  if (e.sign == 0) return {};
  Scalar c(((k + l) % 2 == 0 ? 1 : -1) * e.sign, 2);
  std::array<int, 5> del{};
  del[e.t - 1] = 1;
  return UElement(UMonomial::from_parts(del, 0), c);
}

UElement omega(const IndexTuple& I) {
  int d = static_cast<int>(I.size());
  for (const auto& p : I) {
    check_letter(p.i);
    check_letter(p.j);
  }
  std::vector<UElement::Entry> acc;
  for (const SifSet& s : sif_subsets(d)) {
    Scalar coeff(crossing_number(s) % 2 == 0 ? 1 : -1);
    std::vector<UGenerator> word;
    std::vector<bool> matched(d + 1, false);
    bool zero = false;
    for (auto [k, l] : s) {
      EpsT e = eps_t(I[k - 1], I[l - 1]);
      if (e.sign == 0) {
        zero = true;
        break;
      }
      coeff *= Scalar(((k + l) % 2 == 0 ? 1 : -1) * e.sign, 2);
      word.push_back(UGenerator::partial(e.t));
      matched[k] = matched[l] = true;
    }
    if (zero) continue;
    for (int p = 1; p <= d; ++p)
      if (!matched[p]) word.push_back(UGenerator{false, 0, I[p - 1]});
    for (const auto& [m, c] : normal_form(word)) acc.emplace_back(m, coeff * c);
  }
  return UElement::from_unsorted(std::move(acc));
}

SignedPermutation SignedPermutation::identity(int d) {
  SignedPermutation g;
  for (int k = 1; k <= d; ++k) {
    g.sigma.push_back(k);
    g.eta.push_back(1);
  }
  return g;
}

void SignedPermutation::validate() const {
  int d = rank();
  if (eta.size() != sigma.size()) throw std::invalid_argument("SignedPermutation: size mismatch");
  std::vector<bool> hit(d + 1, false);
  for (int s : sigma) {
    if (s < 1 || s > d || hit[s]) throw std::invalid_argument("SignedPermutation: not a bijection");
    hit[s] = true;
  }
  for (int e : eta)
    if (e != 1 && e != -1) throw std::invalid_argument("SignedPermutation: eta must be ±1");
}

IndexTuple bd_act(const SignedPermutation& g, const IndexTuple& I) {
  g.validate();
  if (static_cast<int>(I.size()) != g.rank()) throw std::invalid_argument("bd_act: rank mismatch");
  IndexTuple J(I.size());
  for (int j = 0; j < g.rank(); ++j) {
    const PairIndex& p = I[g.sigma[j] - 1];
    J[j] = g.eta[j] == 1 ? p : p.bar();
  }
  return J;
}

int sign_character(const SignedPermutation& g) {
  g.validate();
  int inv = 0;
  for (int a = 0; a < g.rank(); ++a)
    for (int b = a + 1; b < g.rank(); ++b)
      if (g.sigma[a] > g.sigma[b]) ++inv;
  int s = inv % 2 == 0 ? 1 : -1;
  for (int e : g.eta) s *= e;
  return s;
}

UElement l0_adjoint(int s, int r, const UMonomial& m) {
  check_letter(s);
  check_letter(r);
  std::vector<UElement::Entry> acc;
  // [x_s∂_r, ∂_t] = -δ_ts ∂_r
  int e = m.del(s);
  if (e > 0) acc.emplace_back(m.add_del(s, -1).add_del(r, 1), Scalar(-e));
  // [x_s∂_r, d_ij] = δ_ri d_sj + δ_rj d_is, applied factor by factor
  auto pairs = m.pairs();
  if (!pairs.empty()) {
    UMonomial dpart = UMonomial::from_parts(m.dels(), 0);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      PairIndex p = pairs[k];
      PairIndex images[2];
      int n = 0;
      if (p.i == r) images[n++] = {s, p.j};
      if (p.j == r) images[n++] = {p.i, s};
      if (n == 0) continue;
      std::vector<UGenerator> base;
      for (int t = 1; t <= 5; ++t)
        for (int c = 0; c < dpart.del(t); ++c) base.push_back(UGenerator::partial(t));
      for (int q = 0; q < n; ++q) {
        std::vector<UGenerator> word = base;
        for (std::size_t a = 0; a < pairs.size(); ++a)
          word.push_back(UGenerator{false, 0, a == k ? images[q] : pairs[a]});
        for (auto& entry : normal_form(word)) acc.push_back(entry);
      }
    }
  }
  return UElement::from_unsorted(std::move(acc));
}

UElement l0_adjoint(int s, int r, const UElement& u) {
  std::vector<UElement::Entry> acc;
  for (const auto& [m, c] : u)
    for (const auto& [m2, c2] : l0_adjoint(s, r, m)) acc.emplace_back(m2, c * c2);
  return UElement::from_unsorted(std::move(acc));
}

UElement d_arrow(int s, int r, const IndexTuple& I) {
  check_letter(s);
  check_letter(r);
  UElement acc;
  for (std::size_t p = 0; p < I.size(); ++p) {
    if (I[p].i == r) {
      IndexTuple J = I;
      J[p].i = s;
      acc += omega(J);
    }
    if (I[p].j == r) {
      IndexTuple J = I;
      J[p].j = s;
      acc += omega(J);
    }
  }
  return acc;
}

namespace {

void nondecreasing_tuples(int k, int lo, std::vector<int>& cur, std::vector<std::array<int, 5>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    std::array<int, 5> d{};
    for (int t : cur) d[t - 1]++;
    out.push_back(d);
    return;
  }
  for (int t = lo; t <= 5; ++t) {
    cur.push_back(t);
    nondecreasing_tuples(k, t, cur, out);
    cur.pop_back();
  }
}

void pair_combinations(int n, int lo, std::uint16_t mask, int have, std::vector<std::uint16_t>& out) {
  if (have == n) {
    out.push_back(mask);
    return;
  }
  for (int b = lo; b < kNumPairs; ++b)
    pair_combinations(n, b + 1, static_cast<std::uint16_t>(mask | (1u << b)), have + 1, out);
}

}  // namespace

std::vector<UMonomial> pbw_monomials(int d) {
  if (d < 0) throw std::invalid_argument("pbw_monomials: negative degree");
  std::vector<UMonomial> out;
  for (int k = 0; 2 * k <= d; ++k) {
    int n = d - 2 * k;
    if (n > kNumPairs) continue;
    std::vector<std::array<int, 5>> dels;
    std::vector<int> cur;
    nondecreasing_tuples(k, 1, cur, dels);
    std::vector<std::uint16_t> masks;
    pair_combinations(n, 0, 0, 0, masks);
    for (const auto& del : dels)
      for (auto mask : masks) out.push_back(UMonomial::from_parts(del, mask));
  }
  return out;
}

std::size_t pbw_dimension(int d) {
  auto binom = [](int n, int k) -> std::size_t {
    if (k < 0 || k > n) return 0;
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  std::size_t s = 0;
  for (int k = 0; 2 * k <= d; ++k) s += binom(k + 4, 4) * binom(10, d - 2 * k);
  return s;
}

UElement omega_of_label(const UMonomial& label) {
  IndexTuple I = label.pairs();
  UElement w = omega(I);
  UMonomial dpart = UMonomial::from_parts(label.dels(), 0);
  return multiply(monomial_element(dpart), w);
}

OmegaBasis omega_basis(int d) {
  OmegaBasis b;
  b.degree = d;
  b.labels = pbw_monomials(d);
  for (std::size_t k = 0; k < b.labels.size(); ++k) {
    b.index.emplace(b.labels[k], k);
    b.elements.push_back(omega_of_label(b.labels[k]));
  }
  return b;
}

SparseMatrix OmegaBasis::change_of_basis() const {
  std::vector<Triplet> t;
  for (std::size_t r = 0; r < elements.size(); ++r)
    for (const auto& [m, c] : elements[r]) t.push_back({r, index.at(m), c});
  return SparseMatrix::from_triplets(labels.size(), labels.size(), std::move(t));
}

const OmegaBasis& omega_basis_cached(int d) {
  static std::mutex mu;
  static std::map<int, OmegaBasis> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, omega_basis(d)).first;
  return it->second;
}

const UElement& omega_of_label_cached(const UMonomial& label) {
  const OmegaBasis& b = omega_basis_cached(label.degree());
  return b.elements.at(b.index.at(label));
}

}  // namespace e510
