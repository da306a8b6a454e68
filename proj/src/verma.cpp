#include "e510/verma.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace e510 {
namespace {

using VEntry = VTerms::Entry;

// Epsilon representative of a weight with e_5 = 0.
std::array<int, 5> eps_rep(const Weight& w) {
  std::array<int, 5> e{};
  for (int k = 3; k >= 0; --k) e[k] = e[k + 1] + w[k];
  return e;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = static_cast<std::size_t>(std::max(1, threads));
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

UMonomial pairs_monomial(const std::vector<PairIndex>& pairs, std::size_t from, std::size_t to) {
  std::uint16_t mask = 0;
  for (std::size_t k = from; k < to; ++k) mask = static_cast<std::uint16_t>(mask | (1u << pairs[k].id()));
  return UMonomial::from_parts({0, 0, 0, 0, 0}, mask);
}

// x · (u ⊗ b_f) for x in L_0, appended to out with factor c.
void l0_on_term(const L0Element& x, const WeightModule& M, const UMonomial& u, std::uint32_t f,
                const Scalar& c, std::vector<VEntry>& out) {
  Scalar diag;
  bool has_diag = false;
  std::array<int, 5> ue{}, ve{};
  for (int r = 1; r <= 5; ++r) {
    for (int s = 1; s <= 5; ++s) {
      const Scalar& a = x.at(r, s);
      if (a.is_zero()) continue;
      if (r == s) {
        if (!has_diag) {
          ue = u.epsilon_weight();
          ve = eps_rep(M.weights.at(f));
          has_diag = true;
        }
        diag += a * Scalar(ue[r - 1] + ve[r - 1]);
        continue;
      }
      Scalar ca = c * a;
      for (const auto& [m, k] : l0_adjoint(r, s, u)) out.emplace_back(VKey{m, f}, ca * k);
      for (const auto& [g, k] : M.act(r, s, f)) out.emplace_back(VKey{u, static_cast<std::uint32_t>(g)}, ca * k);
    }
  }
  if (has_diag && !diag.is_zero()) out.emplace_back(VKey{u, f}, c * diag);
}

struct L1Cache {
  std::array<L0Element, kNumPairs> dbr;
  std::array<bool, kNumPairs> dnz{};
  std::array<UElement, 5> pbr;
};

L1Cache make_l1_cache(const L1Element& x) {
  L1Cache cache;
  for (int id = 0; id < kNumPairs; ++id) {
    cache.dbr[id] = l1_bracket_d(x, PairIndex::from_id(id));
    cache.dnz[id] = !cache.dbr[id].is_zero();
  }
  for (int q = 1; q <= 5; ++q) cache.pbr[q - 1] = l1_bracket_partial(x, q);
  return cache;
}

void l1_on_term(const L1Cache& cache, const WeightModule& M, const UMonomial& u, std::uint32_t f,
                const Scalar& c, std::vector<VEntry>& out) {
  auto dels = u.dels();
  auto pairs = u.pairs();
  UMonomial dpart = pairs_monomial(pairs, 0, pairs.size());
  // ∂ factors: X ∂_q^e = ∂_q^e X + e ∂_q^{e-1} [X, ∂_q]
  for (int q = 1; q <= 5; ++q) {
    if (dels[q - 1] == 0 || cache.pbr[q - 1].empty()) continue;
    auto lowered = dels;
    lowered[q - 1]--;
    Scalar e(dels[q - 1]);
    for (const auto& [m, y] : cache.pbr[q - 1]) {
      UMonomial a = UMonomial::from_parts(lowered, m.mask());
      for (const auto& [p, k] : multiply(a, dpart)) out.emplace_back(VKey{p, f}, c * e * y * k);
    }
  }
  // odd factors: the bracket lands in L_0 and acts on the remaining suffix
  std::vector<VEntry> local;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    int id = pairs[k].id();
    if (!cache.dnz[id]) continue;
    Scalar sign = (k % 2 == 0) ? Scalar(1) : Scalar(-1);
    UMonomial prefix = UMonomial::from_parts(dels, pairs_monomial(pairs, 0, k).mask());
    UMonomial suffix = pairs_monomial(pairs, k + 1, pairs.size());
    local.clear();
    l0_on_term(cache.dbr[id], M, suffix, f, c * sign, local);
    for (const auto& [key, v] : local) {
      for (const auto& [p, s] : multiply(prefix, key.u)) out.emplace_back(VKey{p, key.f}, v * s);
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- elements

bool VermaElement::is_homogeneous() const {
  for (const auto& [k, c] : terms)
    if (k.u.degree() != degree()) return false;
  return true;
}

std::optional<Weight> VermaElement::weight() const {
  if (terms.empty()) return std::nullopt;
  const auto& k = terms.front().first;
  return k.u.weight() + module->weights.at(k.f);
}

bool VermaElement::is_weight_vector() const {
  auto w = weight();
  for (const auto& [k, c] : terms)
    if (k.u.weight() + module->weights.at(k.f) != *w) return false;
  return true;
}

std::string VermaElement::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms) {
    Scalar a = c;
    if (!first) {
      os << (a.sign() < 0 ? " - " : " + ");
      if (a.sign() < 0) a = -a;
    } else if (a.sign() < 0) {
      os << "-";
      a = -a;
    }
    first = false;
    if (!a.is_one()) os << a.str() << "*";
    os << k.u.str() << " (x) v" << k.f;
  }
  return os.str();
}

bool L0Element::is_zero() const {
  for (const auto& a : c)
    if (!a.is_zero()) return false;
  return true;
}

L0Element L0Element::generator(int r, int s) {
  L0Element x;
  x.at(r, s) = Scalar(1);
  return x;
}

VermaElement act_l0(const L0Element& x, const VermaElement& w) {
  Scalar trace;
  for (int p = 1; p <= 5; ++p) trace += x.at(p, p);
  if (!trace.is_zero()) throw std::invalid_argument("act_l0: diagonal part must be traceless");
  std::vector<VEntry> out;
  for (const auto& [k, c] : w.terms) l0_on_term(x, *w.module, k.u, k.f, c, out);
  return VermaElement(w.module, VTerms::from_unsorted(std::move(out)));
}

VermaElement act_l0(int r, int s, const VermaElement& w) {
  if (r == s) throw std::invalid_argument("act_l0: need r != s");
  return act_l0(L0Element::generator(r, s), w);
}

// ---------------------------------------------------------------- L_1

int l1_key(int p, PairIndex pair) { return (p - 1) * kNumPairs + pair.id(); }

L1Element l1_generator(int p, PairIndex pair) {
  if (p < 1 || p > 5 || pair.i < 1 || pair.i > 5 || pair.j < 1 || pair.j > 5)
    throw std::invalid_argument("l1_generator: index out of range");
  if (pair.is_zero()) return {};
  if (pair.is_canonical()) return L1Element(l1_key(p, pair), Scalar(1));
  return L1Element(l1_key(p, pair.bar()), Scalar(-1));
}

L1Element l1_adjoint(int r, int s, const L1Element& x) {
  std::vector<L1Element::Entry> out;
  auto add = [&](int p, PairIndex pr, const Scalar& c) {
    for (const auto& [k, v] : l1_generator(p, pr)) out.emplace_back(k, c * v);
  };
  for (const auto& [key, c] : x) {
    int p = key / kNumPairs + 1;
    PairIndex ij = PairIndex::from_id(key % kNumPairs);
    if (s == p) add(r, ij, c);
    if (s == ij.i) add(p, {r, ij.j}, c);
    if (s == ij.j) add(p, {ij.i, r}, c);
  }
  return L1Element::from_unsorted(std::move(out));
}

L0Element l1_bracket_d(const L1Element& x, PairIndex kl) {
  L0Element z;
  for (const auto& [key, c] : x) {
    int p = key / kNumPairs + 1;
    EpsT e = eps_t(PairIndex::from_id(key % kNumPairs), kl);
    if (e.sign == 0) continue;
    z.at(p, e.t) += c * Scalar(e.sign);
  }
  return z;
}

UElement l1_bracket_partial(const L1Element& x, int q) {
  std::vector<UElement::Entry> out;
  for (const auto& [key, c] : x) {
    if (key / kNumPairs + 1 != q) continue;
    std::uint16_t mask = static_cast<std::uint16_t>(1u << (key % kNumPairs));
    out.emplace_back(UMonomial::from_parts({0, 0, 0, 0, 0}, mask), -c);
  }
  return UElement::from_unsorted(std::move(out));
}

const std::vector<L1Element>& l1_spanning_set() {
  static const std::vector<L1Element> basis = [] {
    constexpr std::size_t kDim = 5 * kNumPairs;
    auto to_row = [](const L1Element& x) {
      std::vector<SparseVector::Entry> e;
      for (const auto& [k, c] : x) e.emplace_back(static_cast<std::size_t>(k), c);
      return SparseVector::from_unsorted(std::move(e));
    };
    std::vector<SparseVector> rows;
    std::vector<L1Element> queue{l1_generator(5, {4, 5})};
    rows.push_back(to_row(queue.front()));
    std::size_t current_rank = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (int r = 1; r <= 5; ++r) {
        for (int s = r + 1; s <= 5; ++s) {
          L1Element y = l1_adjoint(r, s, queue[head]);
          if (y.empty()) continue;
          rows.push_back(to_row(y));
          std::size_t rk = rank(SparseMatrix::from_rows(kDim, rows));
          if (rk > current_rank) {
            current_rank = rk;
            queue.push_back(std::move(y));
          } else {
            rows.pop_back();
          }
        }
      }
    }
    RowEchelon e = row_echelon(SparseMatrix::from_rows(kDim, rows));
    std::vector<L1Element> out;
    for (const auto& row : e.rows) {
      std::vector<L1Element::Entry> ent;
      for (const auto& [k, c] : row) ent.emplace_back(static_cast<int>(k), c);
      out.push_back(L1Element::from_unsorted(std::move(ent)));
    }
    return out;
  }();
  return basis;
}

VermaElement act_l1(const L1Element& x, const VermaElement& w) {
  L1Cache cache = make_l1_cache(x);
  std::vector<VEntry> out;
  for (const auto& [k, c] : w.terms) l1_on_term(cache, *w.module, k.u, k.f, c, out);
  return VermaElement(w.module, VTerms::from_unsorted(std::move(out)));
}

VermaElement act_x5d45(const VermaElement& w) {
  static const L1Element x = l1_generator(5, {4, 5});
  return act_l1(x, w);
}

// ---------------------------------------------------------------- search

std::vector<Weight> candidate_weights(const Weight& mu, int d) {
  std::set<Weight> out;
  for (const auto& u : pbw_monomials(d)) {
    Weight l = mu + u.weight();
    if (l.is_dominant()) out.insert(l);
  }
  return {out.begin(), out.end()};
}

namespace {

// Depth of F(mu) needed to hold every variable of weight lambda.
int variable_depth(const Weight& mu, const Weight& lambda, int d) {
  int h = 0;
  for (const auto& u : pbw_monomials(d)) {
    auto dep = depth_below(lambda - u.weight(), mu);
    if (dep) h = std::max(h, *dep);
  }
  return h;
}

std::vector<VKey> variables(const WeightModule& M, const Weight& lambda, int d) {
  std::vector<VKey> vars;
  for (const auto& u : pbw_monomials(d)) {
    auto it = M.spaces.find(lambda - u.weight());
    if (it == M.spaces.end()) continue;
    for (std::size_t j : it->second) vars.push_back({u, static_cast<std::uint32_t>(j)});
  }
  std::sort(vars.begin(), vars.end());
  return vars;
}

std::vector<VermaElement> solve_space(std::shared_ptr<const WeightModule> M, const Weight& lambda, int d,
                                      bool with_l1) {
  std::vector<VKey> vars = variables(*M, lambda, d);
  if (vars.empty()) return {};
  std::vector<L1Cache> l1;
  if (with_l1) l1.push_back(make_l1_cache(l1_generator(5, {4, 5})));
  std::vector<L0Element> raising;
  for (int i = 1; i <= 4; ++i) raising.push_back(L0Element::generator(i, i + 1));
  std::size_t nops = raising.size() + l1.size();
  std::vector<std::map<VKey, std::size_t>> row_index(nops);
  std::size_t nrows = 0;
  std::vector<Triplet> trip;
  std::vector<VEntry> buf;
  for (std::size_t col = 0; col < vars.size(); ++col) {
    for (std::size_t op = 0; op < nops; ++op) {
      buf.clear();
      if (op < raising.size())
        l0_on_term(raising[op], *M, vars[col].u, vars[col].f, Scalar(1), buf);
      else
        l1_on_term(l1[op - raising.size()], *M, vars[col].u, vars[col].f, Scalar(1), buf);
      VTerms img = VTerms::from_unsorted(std::move(buf));
      buf = {};
      for (const auto& [k, c] : img) {
        auto [it, inserted] = row_index[op].emplace(k, nrows);
        if (inserted) ++nrows;
        trip.push_back({it->second, col, c});
      }
    }
  }
  auto ns = null_space(SparseMatrix::from_triplets(nrows, vars.size(), std::move(trip)));
  std::vector<VermaElement> out;
  for (const auto& v : ns) {
    std::vector<VEntry> e;
    for (const auto& [col, c] : v) e.emplace_back(vars[col], c);
    out.emplace_back(M, VTerms::from_unsorted(std::move(e)));
  }
  return out;
}

std::shared_ptr<const WeightModule> search_module(const Weight& mu, const Weight& lambda, int d) {
  return irreducible(mu, variable_depth(mu, lambda, d) + 4);
}

}  // namespace

std::vector<VermaElement> l0_highest_space(const Weight& mu, const Weight& lambda, int d) {
  if (d < 0) throw std::invalid_argument("l0_highest_space: negative degree");
  return solve_space(search_module(mu, lambda, d), lambda, d, false);
}

std::vector<VermaElement> singular_space(const Weight& mu, const Weight& lambda, int d) {
  if (d < 1) throw std::invalid_argument("singular_space: degree must be positive");
  auto sols = solve_space(search_module(mu, lambda, d), lambda, d, true);
  for (auto& w : sols) w = normalize(w);
  return sols;
}

SingularChecks check_singular(const VermaElement& w) {
  SingularChecks r;
  r.l0_highest = true;
  for (int i = 1; i <= 4; ++i)
    if (!act_l0(i, i + 1, w).is_zero()) r.l0_highest = false;
  r.x5d45 = act_x5d45(w).is_zero();
  r.full_l1 = true;
  for (const auto& x : l1_spanning_set()) {
    if (!act_l1(x, w).is_zero()) {
      r.full_l1 = false;
      break;
    }
  }
  if (w.is_zero() || w.degree() < 1) r.l0_highest = r.x5d45 = r.full_l1 = false;
  return r;
}

std::vector<SingularResult> singular_vectors(const Weight& mu, int d, int threads) {
  if (d < 1) throw std::invalid_argument("singular_vectors: degree must be positive");
  if (!mu.is_dominant()) throw std::invalid_argument("singular_vectors: weight is not dominant");
  auto cands = candidate_weights(mu, d);
  int depth = 0;
  for (const auto& l : cands) depth = std::max(depth, variable_depth(mu, l, d));
  auto M = irreducible(mu, depth + 4);
  std::vector<std::vector<VermaElement>> slots(cands.size());
  parallel_for(cands.size(), threads, [&](std::size_t i) {
    auto sols = solve_space(M, cands[i], d, true);
    for (auto& w : sols) w = normalize(w);
    slots[i] = std::move(sols);
  });
  std::vector<SingularResult> out;
  for (std::size_t i = 0; i < cands.size(); ++i)
    if (!slots[i].empty()) out.push_back({cands[i], std::move(slots[i])});
  return out;
}

VermaElement leading_term(const VermaElement& w) {
  if (w.is_zero()) return w;
  std::vector<VEntry> out;
  for (const auto& [k, c] : w.terms)
    if (w.module->weights.at(k.f) == w.module->highest) out.emplace_back(k, c);
  return VermaElement(w.module, VTerms::from_unsorted(std::move(out)));
}

UElement leading_u_part(const VermaElement& w) {
  std::vector<UElement::Entry> out;
  for (const auto& [k, c] : leading_term(w).terms) out.emplace_back(k.u, c);
  return UElement::from_unsorted(std::move(out));
}

VermaElement normalize(const VermaElement& w) {
  if (w.is_zero()) return w;
  VermaElement lt = leading_term(w);
  const Scalar& pivot = lt.is_zero() ? w.terms.front().second : lt.terms.front().second;
  VermaElement out = w;
  out.terms.scale(Scalar(1) / pivot);
  return out;
}

// ---------------------------------------------------------------- morphisms

namespace {

LinearMap zero_map(std::size_t n) { return LinearMap(n); }

bool map_is_zero(const LinearMap& m) {
  for (const auto& c : m)
    if (!c.empty()) return false;
  return true;
}

void map_axpy(LinearMap& a, const Scalar& s, const LinearMap& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) a[j].axpy(s, b[j]);
}

std::map<UMonomial, LinearMap> collect(const std::vector<VTerms>& images, std::size_t src_dim) {
  std::map<UMonomial, std::vector<std::vector<SparseVector::Entry>>> acc;
  for (std::size_t j = 0; j < images.size(); ++j) {
    for (const auto& [k, c] : images[j]) {
      auto& cols = acc[k.u];
      if (cols.empty()) cols.resize(src_dim);
      cols[j].emplace_back(k.f, c);
    }
  }
  std::map<UMonomial, LinearMap> out;
  for (auto& [u, cols] : acc) {
    LinearMap m(src_dim);
    for (std::size_t j = 0; j < src_dim; ++j) m[j] = SparseVector::from_unsorted(std::move(cols[j]));
    if (!map_is_zero(m)) out.emplace(u, std::move(m));
  }
  return out;
}

bool same_module(const WeightModule& a, const WeightModule& b) {
  if (&a == &b) return true;
  return a.dim() == b.dim() && a.weights == b.weights && a.highest == b.highest;
}

}  // namespace

VermaElement MorphismData::image(std::size_t j) const {
  std::vector<VEntry> out;
  for (const auto& [u, m] : coeffs)
    for (const auto& [f, c] : m.at(j)) out.emplace_back(VKey{u, static_cast<std::uint32_t>(f)}, c);
  return VermaElement(target, VTerms::from_unsorted(std::move(out)));
}

VermaElement MorphismData::image(const SparseVector& v) const {
  std::vector<VEntry> out;
  for (const auto& [u, m] : coeffs)
    for (const auto& [j, a] : v)
      for (const auto& [f, c] : m.at(j)) out.emplace_back(VKey{u, static_cast<std::uint32_t>(f)}, a * c);
  return VermaElement(target, VTerms::from_unsorted(std::move(out)));
}

MorphismData equivariant_extension(const VermaElement& w, const Weight& lambda, const Weight& mu) {
  if (w.is_zero()) throw std::invalid_argument("equivariant_extension: zero vector");
  if (!w.is_homogeneous()) throw std::invalid_argument("equivariant_extension: vector is not homogeneous");
  if (w.module->highest != mu) throw std::invalid_argument("equivariant_extension: weight mismatch");
  if (!w.is_weight_vector() || *w.weight() != lambda)
    throw std::invalid_argument("equivariant_extension: weight mismatch");
  auto src = irreducible(lambda);
  auto tgt = irreducible(mu);
  // re-home onto the complete target; truncated builds are prefixes of it
  for (const auto& [k, c] : w.terms) {
    if (k.f >= tgt->dim() || tgt->weights[k.f] != w.module->weights.at(k.f))
      throw std::invalid_argument("equivariant_extension: module mismatch");
  }
  VermaElement top(tgt, w.terms);
  for (int i = 1; i <= 4; ++i)
    if (!act_l0(i, i + 1, top).is_zero())
      throw std::invalid_argument("equivariant_extension: vector is not a highest weight vector");
  std::vector<VTerms> images(src->dim());
  images[src->hw_index] = top.terms;
  for (std::size_t j = 0; j < src->dim(); ++j) {
    if (j == src->hw_index) continue;
    VTerms acc;
    for (const auto& step : src->recipes[j]) {
      if (step.prev >= j) throw std::logic_error("equivariant_extension: recipe out of order");
      VermaElement prev(tgt, images[step.prev]);
      acc.axpy(step.coeff, act_l0(step.i + 1, step.i, prev).terms);
    }
    images[j] = std::move(acc);
  }
  MorphismData phi;
  phi.degree = w.degree();
  phi.lambda = lambda;
  phi.mu = mu;
  phi.source = src;
  phi.target = tgt;
  phi.coeffs = collect(images, src->dim());
  return phi;
}

MorphismData morphism_from_singular(const VermaElement& w, const Weight& lambda, const Weight& mu) {
  if (w.is_zero() || w.degree() < 1) throw std::invalid_argument("not singular");
  auto tgt = irreducible(mu);
  VermaElement full(tgt, w.terms);
  for (const auto& [k, c] : w.terms)
    if (k.f >= tgt->dim() || tgt->weights[k.f] != w.module->weights.at(k.f))
      throw std::invalid_argument("not singular");
  bool ok = true;
  for (int i = 1; i <= 4 && ok; ++i) ok = act_l0(i, i + 1, full).is_zero();
  if (!ok || !act_x5d45(full).is_zero()) throw std::invalid_argument("not singular");
  return equivariant_extension(full, lambda, mu);
}

VermaElement apply_morphism(const MorphismData& phi, const UElement& u, const SparseVector& v) {
  std::vector<VEntry> out;
  for (const auto& [u2, m] : phi.coeffs) {
    SparseVector tv;
    for (const auto& [j, a] : v) tv.axpy(a, m.at(j));
    if (tv.empty()) continue;
    for (const auto& [u1, c1] : u) {
      for (const auto& [p, c2] : multiply(u1, u2)) {
        Scalar s = c1 * c2;
        for (const auto& [f, c] : tv) out.emplace_back(VKey{p, static_cast<std::uint32_t>(f)}, s * c);
      }
    }
  }
  return VermaElement(phi.target, VTerms::from_unsorted(std::move(out)));
}

MorphismData compose(const MorphismData& phi2, const MorphismData& phi1) {
  if (phi1.mu != phi2.lambda) throw std::invalid_argument("weight mismatch");
  if (!same_module(*phi1.target, *phi2.source)) throw std::invalid_argument("module mismatch");
  std::map<std::pair<UMonomial, UMonomial>, UElement> products;
  for (const auto& [u1, m1] : phi1.coeffs)
    for (const auto& [u2, m2] : phi2.coeffs) products.emplace(std::make_pair(u1, u2), multiply(u1, u2));
  std::size_t n = phi1.source->dim();
  std::vector<VTerms> images(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<VEntry> out;
    for (const auto& [u1, m1] : phi1.coeffs) {
      const SparseVector& mid = m1[j];
      if (mid.empty()) continue;
      for (const auto& [u2, m2] : phi2.coeffs) {
        SparseVector tv;
        for (const auto& [k, a] : mid) tv.axpy(a, m2[k]);
        if (tv.empty()) continue;
        for (const auto& [p, s] : products.at({u1, u2}))
          for (const auto& [f, c] : tv) out.emplace_back(VKey{p, static_cast<std::uint32_t>(f)}, s * c);
      }
    }
    images[j] = VTerms::from_unsorted(std::move(out));
  }
  MorphismData out;
  out.degree = phi1.degree + phi2.degree;
  out.lambda = phi1.lambda;
  out.mu = phi2.mu;
  out.source = phi1.source;
  out.target = phi2.target;
  out.coeffs = collect(images, n);
  return out;
}

std::map<UMonomial, LinearMap> theta_decomposition(const MorphismData& phi) {
  std::function<void(LinearMap&, const Scalar&, const LinearMap&)> axpy = map_axpy;
  std::function<bool(const LinearMap&)> is_zero = map_is_zero;
  auto out = decompose_in_omega<LinearMap>(phi.coeffs, axpy, is_zero);
  for (auto it = out.begin(); it != out.end();) {
    if (map_is_zero(it->second))
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

MorphismData dual_morphism(const MorphismData& phi) {
  if (!phi.source->complete || !phi.target->complete)
    throw std::invalid_argument("dual_morphism: modules must be complete");
  auto theta = theta_decomposition(phi);
  std::size_t new_src = phi.target->dim();
  std::size_t new_tgt = phi.source->dim();
  std::map<UMonomial, LinearMap> coeffs;
  for (const auto& [label, m] : theta) {
    Scalar sign = (label.num_del() % 2 == 0) ? Scalar(1) : Scalar(-1);
    std::vector<std::vector<SparseVector::Entry>> cols(new_src);
    for (std::size_t j = 0; j < m.size(); ++j)
      for (const auto& [i, c] : m[j]) cols[i].emplace_back(j, sign * c);
    LinearMap t(new_src);
    for (std::size_t i = 0; i < new_src; ++i) t[i] = SparseVector::from_unsorted(std::move(cols[i]));
    for (const auto& [pm, s] : omega_of_label_cached(label)) {
      auto& slot = coeffs[pm];
      if (slot.empty()) slot = zero_map(new_src);
      map_axpy(slot, s, t);
    }
  }
  for (auto it = coeffs.begin(); it != coeffs.end();) {
    if (map_is_zero(it->second))
      it = coeffs.erase(it);
    else
      ++it;
  }
  MorphismData out;
  out.degree = phi.degree;
  out.lambda = dual_weight(phi.mu);
  out.mu = dual_weight(phi.lambda);
  out.source = std::make_shared<const WeightModule>(dual_module(*phi.target));
  out.target = std::make_shared<const WeightModule>(dual_module(*phi.source));
  (void)new_tgt;
  out.coeffs = std::move(coeffs);
  return out;
}

CheckResult check_l0_invariance(const MorphismData& phi) {
  const WeightModule& S = *phi.source;
  const WeightModule& T = *phi.target;
  for (int r = 1; r <= 5; ++r) {
    for (int s = 1; s <= 5; ++s) {
      if (r == s) continue;
      // x.Φ = sum [x,u] ⊗ θ_u + u ⊗ (A θ_u - θ_u A)
      std::map<UMonomial, std::vector<std::vector<SparseVector::Entry>>> acc;
      auto cols_of = [&](const UMonomial& u) -> std::vector<std::vector<SparseVector::Entry>>& {
        auto& c = acc[u];
        if (c.empty()) c.resize(S.dim());
        return c;
      };
      for (const auto& [u, m] : phi.coeffs) {
        for (const auto& [u2, k] : l0_adjoint(r, s, u)) {
          auto& cols = cols_of(u2);
          for (std::size_t j = 0; j < S.dim(); ++j)
            for (const auto& [f, c] : m[j]) cols[j].emplace_back(f, k * c);
        }
        auto& cols = cols_of(u);
        for (std::size_t j = 0; j < S.dim(); ++j) {
          for (const auto& [f, c] : T.act(r, s, m[j])) cols[j].emplace_back(f, c);
          for (const auto& [k, a] : S.act(r, s, j))
            for (const auto& [f, c] : m[k]) cols[j].emplace_back(f, -a * c);
        }
      }
      for (auto& [u, cols] : acc) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
          if (!SparseVector::from_unsorted(std::move(cols[j])).empty()) {
            return {false, "L0 invariance fails for x" + std::to_string(r) + "d" + std::to_string(s) +
                               " at monomial " + u.str() + ", source vector " + std::to_string(j)};
          }
        }
      }
    }
  }
  return {};
}

CheckResult check_morphism(const MorphismData& phi) {
  CheckResult a = check_l0_invariance(phi);
  if (!a.ok) return a;
  VermaElement top = phi.image(phi.source->hw_index);
  if (!act_x5d45(top).is_zero()) return {false, "x5d45 does not kill the image of the highest weight vector"};
  return {};
}

// ---------------------------------------------------------------- equations

namespace {

class ThetaTable {
 public:
  ThetaTable(const MorphismData& phi) : phi_(phi), theta_(theta_decomposition(phi)) {}

  // θ^T_I for an arbitrary tuple of ordered pairs, with its sign; nullptr when zero.
  const LinearMap* get(const std::array<int, 5>& T, std::vector<PairIndex> I, int& sign) const {
    sign = 1;
    for (auto& p : I) {
      if (p.is_zero()) return nullptr;
      if (!p.is_canonical()) {
        p = p.bar();
        sign = -sign;
      }
    }
    for (std::size_t a = 0; a < I.size(); ++a)
      for (std::size_t b = a + 1; b < I.size(); ++b) {
        if (I[a] == I[b]) return nullptr;
        if (I[b] < I[a]) sign = -sign;
      }
    std::uint16_t mask = 0;
    for (const auto& p : I) mask = static_cast<std::uint16_t>(mask | (1u << p.id()));
    auto it = theta_.find(UMonomial::from_parts(T, mask));
    return it == theta_.end() ? nullptr : &it->second;
  }

  // x_p∂_g.(θ(v)) + θ(x_p∂_g.v), memoized per label
  const LinearMap& sym(const LinearMap* th, int p, int g) const {
    auto key = std::make_tuple(th, p, g);
    auto it = sym_.find(key);
    if (it != sym_.end()) return it->second;
    LinearMap out(th->size());
    for (std::size_t j = 0; j < th->size(); ++j) {
      out[j] = phi_.target->act(p, g, (*th)[j]);
      for (const auto& [k, a] : phi_.source->act(p, g, j)) out[j].axpy(a, (*th)[k]);
    }
    return sym_.emplace(key, std::move(out)).first->second;
  }

  // x_p∂_g.(θ(v))
  const LinearMap& left(const LinearMap* th, int p, int g) const {
    auto key = std::make_tuple(th, p, g);
    auto it = left_.find(key);
    if (it != left_.end()) return it->second;
    LinearMap out(th->size());
    for (std::size_t j = 0; j < th->size(); ++j) out[j] = phi_.target->act(p, g, (*th)[j]);
    return left_.emplace(key, std::move(out)).first->second;
  }

  std::size_t dim() const { return phi_.source->dim(); }

 private:
  const MorphismData& phi_;
  std::map<UMonomial, LinearMap> theta_;
  mutable std::map<std::tuple<const LinearMap*, int, int>, LinearMap> sym_;
  mutable std::map<std::tuple<const LinearMap*, int, int>, LinearMap> left_;
};

constexpr std::array<int, 5> kNoT{0, 0, 0, 0, 0};
std::array<int, 5> t_of(int t) {
  std::array<int, 5> a{};
  a[t - 1] = 1;
  return a;
}

int perm_sign(const std::array<int, 5>& p) {
  int inv = 0;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b)
      if (p[a] > p[b]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

// ±1 when K is (p,q) or (q,p), else 0.
int chi(PairIndex K, int p, int q) {
  if (K.i == p && K.j == q) return 1;
  if (K.i == q && K.j == p) return -1;
  return 0;
}

class Equation {
 public:
  explicit Equation(std::size_t n) : cols_(n) {}
  void add(const Scalar& s, const LinearMap* m, int sign = 1) {
    if (!m || s.is_zero()) return;
    Scalar f = sign > 0 ? s : -s;
    for (std::size_t j = 0; j < m->size(); ++j)
      for (const auto& [i, c] : (*m)[j]) cols_[j].emplace_back(i, f * c);
  }
  bool vanishes() {
    for (auto& c : cols_)
      if (!SparseVector::from_unsorted(std::move(c)).empty()) return false;
    return true;
  }

 private:
  std::vector<std::vector<SparseVector::Entry>> cols_;
};

std::vector<PairIndex> all_ordered_pairs() {
  std::vector<PairIndex> out;
  for (int i = 1; i <= 5; ++i)
    for (int j = 1; j <= 5; ++j)
      if (i != j) out.push_back({i, j});
  return out;
}

std::string perm_str(const std::array<int, 5>& p) {
  std::string s = "(p,q,a,b,c)=(";
  for (int k = 0; k < 5; ++k) s += std::to_string(p[k]) + (k < 4 ? "," : ")");
  return s;
}

std::string pair_str(PairIndex p) { return std::to_string(p.i) + std::to_string(p.j); }

}  // namespace

bool EquationReport::ok() const {
  if (!precondition) return false;
  for (const auto& f : families)
    if (f.failures) return false;
  return true;
}

EquationReport verify_degree_equations(const MorphismData& phi) {
  if (phi.degree < 1 || phi.degree > 3) throw std::invalid_argument("unsupported degree");
  EquationReport rep;
  CheckResult pre = check_l0_invariance(phi);
  if (!pre.ok) {
    rep.precondition = false;
    rep.diagnostic = pre.diagnostic;
    return rep;
  }
  ThetaTable th(phi);
  const std::size_t n = th.dim();
  const Scalar half(1, 2), quarter(1, 4);
  auto record = [](EquationFamily& fam, bool ok, const std::string& where) {
    ++fam.instances;
    if (!ok) {
      if (fam.failures++ == 0) fam.first_failure = where;
    }
  };
  std::array<int, 5> perm{1, 2, 3, 4, 5};
  const auto pairs = all_ordered_pairs();
  int sg = 0;

  if (phi.degree == 1) {
    EquationFamily fam{"cyclic sum", 0, 0, {}};
    do {
      auto [p, q, a, b, c] = perm;
      (void)q;
      Equation eq(n);
      const int cyc[3][3] = {{a, b, c}, {b, c, a}, {c, a, b}};
      for (const auto& abc : cyc) {
        const LinearMap* t = th.get(kNoT, {{abc[0], abc[1]}}, sg);
        if (t) eq.add(Scalar(1), &th.left(t, p, abc[2]), sg);
      }
      record(fam, eq.vanishes(), perm_str(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    rep.families.push_back(fam);
    return rep;
  }

  if (phi.degree == 2) {
    EquationFamily fam{"d_K coefficient", 0, 0, {}};
    do {
      auto [p, q, a, b, c] = perm;
      int eps = perm_sign(perm);
      const int cyc[3][3] = {{a, b, c}, {b, c, a}, {c, a, b}};
      const LinearMap* tp = th.get(t_of(p), {}, sg);
      for (const auto& K : pairs) {
        Equation eq(n);
        int x = chi(K, p, q);
        if (x) eq.add(Scalar(-x), tp);
        for (const auto& abc : cyc) {
          const LinearMap* t = th.get(kNoT, {{abc[0], abc[1]}, K}, sg);
          if (t) eq.add(half * Scalar(eps), &th.sym(t, p, abc[2]), sg);
        }
        record(fam, eq.vanishes(), perm_str(perm) + " K=" + pair_str(K));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    rep.families.push_back(fam);
    return rep;
  }

  EquationFamily f_omega{"omega_HL coefficient", 0, 0, {}};
  EquationFamily f_a{"partial_a coefficient", 0, 0, {}};
  EquationFamily f_p{"partial_p coefficient", 0, 0, {}};
  EquationFamily f_q{"partial_q coefficient", 0, 0, {}};
  do {
    auto [p, q, a, b, c] = perm;
    int eps = perm_sign(perm);
    const int cyc[3][3] = {{a, b, c}, {b, c, a}, {c, a, b}};
    for (const auto& H : pairs) {
      for (const auto& L : pairs) {
        if (H == L || H == L.bar()) continue;
        Equation eq(n);
        int xl = chi(L, p, q), xh = chi(H, p, q);
        if (xl) {
          const LinearMap* t = th.get(t_of(p), {H}, sg);
          eq.add(Scalar(xl), t, sg);
        }
        if (xh) {
          const LinearMap* t = th.get(t_of(p), {L}, sg);
          eq.add(Scalar(-xh), t, sg);
        }
        for (const auto& abc : cyc) {
          const LinearMap* t = th.get(kNoT, {{abc[0], abc[1]}, H, L}, sg);
          if (t) eq.add(half * Scalar(eps), &th.sym(t, p, abc[2]), sg);
        }
        record(f_omega, eq.vanishes(), perm_str(perm) + " H=" + pair_str(H) + " L=" + pair_str(L));
      }
    }
    {
      Equation eq(n);
      const LinearMap* t1 = th.get(kNoT, {{a, b}, {b, c}, {c, q}}, sg);
      eq.add(quarter, t1, sg);
      const LinearMap* t2 = th.get(kNoT, {{a, c}, {c, b}, {b, q}}, sg);
      eq.add(quarter, t2, sg);
      for (const auto& abc : cyc) {
        const LinearMap* t = th.get(t_of(a), {{abc[0], abc[1]}}, sg);
        if (t) eq.add(half * Scalar(eps), &th.sym(t, p, abc[2]), sg);
      }
      record(f_a, eq.vanishes(), perm_str(perm));
    }
    {
      Equation eq(n);
      for (const auto& abc : cyc) {
        const LinearMap* t = th.get(t_of(p), {{abc[0], abc[1]}}, sg);
        if (t) eq.add(Scalar(1), &th.left(t, p, abc[2]), sg);
      }
      record(f_p, eq.vanishes(), perm_str(perm));
    }
    {
      Equation eq(n);
      for (const auto& abc : cyc) {
        const LinearMap* t = th.get(t_of(q), {{abc[0], abc[1]}}, sg);
        if (t) eq.add(Scalar(eps), &th.left(t, p, abc[2]), sg);
      }
      const LinearMap* t3 = th.get(kNoT, {{a, b}, {b, c}, {c, a}}, sg);
      eq.add(-half, t3, sg);
      record(f_q, eq.vanishes(), perm_str(perm));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  rep.families = {f_omega, f_a, f_p, f_q};
  return rep;
}

// ---------------------------------------------------------------- families

std::string family_name(Family f) {
  switch (f) {
    case Family::A: return "nabla_A";
    case Family::B: return "nabla_B";
    case Family::C: return "nabla_C";
    case Family::BA: return "nabla_BA";
    case Family::CB: return "nabla_CB";
    case Family::CA: return "nabla_CA";
    case Family::CBA: return "nabla_CBA";
  }
  return "?";
}

namespace {

constexpr Family kFamilies[] = {Family::A, Family::B, Family::C, Family::BA, Family::CB, Family::CA, Family::CBA};

std::string family_steps(Family f) {
  std::string n = family_name(f);
  return n.substr(6);
}

UMonomial family_leading(Family f) {
  std::vector<PairIndex> p;
  for (char s : family_steps(f)) {
    if (s == 'A') p.push_back({1, 2});
    if (s == 'B') p.push_back({1, 5});
    if (s == 'C') p.push_back({4, 5});
  }
  std::sort(p.begin(), p.end());
  return UMonomial::make({0, 0, 0, 0, 0}, p);
}

}  // namespace

std::optional<Family> family_from_name(const std::string& s) {
  for (Family f : kFamilies)
    if (family_name(f) == s || family_steps(f) == s) return f;
  return std::nullopt;
}

int family_degree(Family f) { return static_cast<int>(family_steps(f).size()); }

std::optional<Weight> step_target(char step, const Weight& l) {
  if (!l.is_dominant()) return std::nullopt;
  switch (step) {
    case 'A':
      if (l[1] >= 1 && l[2] == 0 && l[3] == 0) return Weight(l[0], l[1] - 1, 0, 0);
      break;
    case 'B':
      if (l[0] >= 1 && l[1] == 0 && l[2] == 0) return Weight(l[0] - 1, 0, 0, l[3] + 1);
      break;
    case 'C':
      if (l[0] == 0 && l[1] == 0) return Weight(0, 0, l[2] + 1, l[3]);
      break;
    default:
      break;
  }
  return std::nullopt;
}

std::optional<Weight> step_source(char step, const Weight& m) {
  if (!m.is_dominant()) return std::nullopt;
  switch (step) {
    case 'A':
      if (m[2] == 0 && m[3] == 0) return Weight(m[0], m[1] + 1, 0, 0);
      break;
    case 'B':
      if (m[1] == 0 && m[2] == 0 && m[3] >= 1) return Weight(m[0] + 1, 0, 0, m[3] - 1);
      break;
    case 'C':
      if (m[0] == 0 && m[1] == 0 && m[2] >= 1) return Weight(0, 0, m[2] - 1, m[3]);
      break;
    default:
      break;
  }
  return std::nullopt;
}

std::optional<Family> family_label(const Weight& mu, const Weight& lambda, int d, const UElement& leading) {
  if (leading.nnz() != 1) return std::nullopt;
  for (Family f : kFamilies) {
    if (family_degree(f) != d) continue;
    std::string steps = family_steps(f);
    std::optional<Weight> w = lambda;
    for (auto it = steps.rbegin(); it != steps.rend() && w; ++it) w = step_target(*it, *w);
    if (!w || *w != mu) continue;
    if (leading.front().first == family_leading(f)) return f;
  }
  return std::nullopt;
}

MorphismData nabla(char step, const Weight& lambda) {
  auto mu = step_target(step, lambda);
  if (!mu) throw std::invalid_argument(std::string("nabla_") + step + " is not defined on " + lambda.str());
  auto sols = singular_space(*mu, lambda, 1);
  if (sols.size() != 1) throw std::logic_error("nabla: expected a one-dimensional singular space");
  return morphism_from_singular(sols.front(), lambda, *mu);
}

MorphismData nabla_chain(const std::string& steps, const Weight& lambda) {
  if (steps.empty()) throw std::invalid_argument("nabla_chain: empty chain");
  std::optional<MorphismData> acc;
  Weight w = lambda;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    MorphismData step = nabla(*it, w);
    w = step.mu;
    acc = acc ? compose(step, *acc) : step;
  }
  return *acc;
}

std::vector<ClassifyRow> classify(int d, int max_entry, int threads) {
  if (d < 1) throw std::invalid_argument("classify: degree must be positive");
  if (max_entry < 0) throw std::invalid_argument("classify: max_entry must be nonnegative");
  std::vector<Weight> mus;
  for (int a = 0; a <= max_entry; ++a)
    for (int b = 0; b <= max_entry; ++b)
      for (int c = 0; c <= max_entry; ++c)
        for (int e = 0; e <= max_entry; ++e) mus.emplace_back(a, b, c, e);
  std::vector<std::vector<ClassifyRow>> slots(mus.size());
  parallel_for(mus.size(), threads, [&](std::size_t i) {
    for (auto& res : singular_vectors(mus[i], d, 1)) {
      ClassifyRow row;
      row.mu = mus[i];
      row.lambda = res.lambda;
      row.degree = d;
      row.dimension = res.basis.size();
      if (d > 3) {
        row.label = "exploratory";
      } else {
        auto f = row.dimension == 1 ? family_label(row.mu, row.lambda, d, leading_u_part(res.basis.front()))
                                    : std::nullopt;
        row.label = f ? family_name(*f) : "ANOMALY";
      }
      row.vectors = std::move(res.basis);
      slots[i].push_back(std::move(row));
    }
  });
  std::vector<ClassifyRow> out;
  for (auto& s : slots)
    for (auto& r : s) out.push_back(std::move(r));
  return out;
}

}  // namespace e510
