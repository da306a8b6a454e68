#include "e510/modules.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace e510 {

namespace {

void check_letter(int x) {
  if (x < 1 || x > 5) throw std::invalid_argument("index out of range 1..5");
}

int nibble_shift(int g) { return g < 16 ? (15 - g) * 4 : (31 - g) * 4; }

// Canonical generator for an ordered pair of a wedge factor: sign and id, or
// sign 0 for the zero element x_ii.
struct Canon {
  int sign;
  int gen;
};

Canon wedge(int base, int i, int j) {
  if (i == j) return {0, 0};
  if (i < j) return {1, base + PairIndex{i, j}.id()};
  return {-1, base + PairIndex{j, i}.id()};
}

}  // namespace

int gen_x(int i) {
  check_letter(i);
  return i - 1;
}
int gen_xx(PairIndex p) { return 5 + p.id(); }
int gen_xs(PairIndex p) { return 15 + p.id(); }
int gen_xs1(int i) {
  check_letter(i);
  return 25 + i - 1;
}

int TensorMonomial::exp(int g) const {
  if (g < 0 || g >= kNumTensorGens) throw std::out_of_range("TensorMonomial: bad generator");
  const std::uint64_t& w = g < 16 ? hi_ : lo_;
  return static_cast<int>((w >> nibble_shift(g)) & 0xF);
}

TensorMonomial TensorMonomial::with_exp(int g, int e) const {
  if (g < 0 || g >= kNumTensorGens) throw std::out_of_range("TensorMonomial: bad generator");
  if (e < 0 || e > 15) throw std::out_of_range("TensorMonomial: exponent out of range 0..15");
  TensorMonomial out = *this;
  std::uint64_t& w = g < 16 ? out.hi_ : out.lo_;
  int sh = nibble_shift(g);
  w = (w & ~(std::uint64_t{0xF} << sh)) | (static_cast<std::uint64_t>(e) << sh);
  return out;
}

std::array<int, 5> TensorMonomial::epsilon_weight() const {
  std::array<int, 5> e{};
  for (int i = 1; i <= 5; ++i) {
    e[i - 1] += exp(gen_x(i));
    e[i - 1] -= exp(gen_xs1(i));
  }
  for (int k = 0; k < kNumPairs; ++k) {
    PairIndex p = PairIndex::from_id(k);
    int a = exp(5 + k), b = exp(15 + k);
    e[p.i - 1] += a - b;
    e[p.j - 1] += a - b;
  }
  return e;
}

std::string TensorMonomial::str() const {
  std::vector<std::string> parts;
  for (int g = 0; g < kNumTensorGens; ++g) {
    int e = exp(g);
    if (e == 0) continue;
    std::string name;
    if (g < 5) {
      name = "x" + std::to_string(g + 1);
    } else if (g < 15) {
      PairIndex p = PairIndex::from_id(g - 5);
      name = "x" + std::to_string(p.i) + std::to_string(p.j);
    } else if (g < 25) {
      PairIndex p = PairIndex::from_id(g - 15);
      name = "xs" + std::to_string(p.i) + std::to_string(p.j);
    } else {
      name = "xs" + std::to_string(g - 24);
    }
    if (e > 1) name += "^" + std::to_string(e);
    parts.push_back(name);
  }
  if (parts.empty()) return "1";
  std::string s = parts[0];
  for (std::size_t k = 1; k < parts.size(); ++k) s += "*" + parts[k];
  return s;
}

std::string to_string(const TensorVector& v) {
  if (v.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : v) {
    Scalar a = c;
    if (c.sign() < 0) {
      s += first ? "-" : " - ";
      a = -c;
    } else if (!first) {
      s += " + ";
    }
    if (!a.is_one()) s += a.str() + "*";
    s += m.str();
    first = false;
  }
  return s;
}

TensorVector act_generator(int r, int s, const TensorMonomial& m) {
  check_letter(r);
  check_letter(s);
  std::vector<TensorVector::Entry> out;
  auto emit = [&](int g, int e, Canon img) {
    if (img.sign == 0) return;
    out.emplace_back(m.shifted(g, -1).shifted(img.gen, 1), Scalar(static_cast<long long>(e) * img.sign));
  };
  for (int g = 0; g < kNumTensorGens; ++g) {
    int e = m.exp(g);
    if (e == 0) continue;
    if (g < 5) {
      if (s == g + 1) emit(g, e, {1, gen_x(r)});
    } else if (g < 15) {
      PairIndex p = PairIndex::from_id(g - 5);
      if (s == p.i) emit(g, e, wedge(5, r, p.j));
      if (s == p.j) emit(g, e, wedge(5, p.i, r));
    } else if (g < 25) {
      PairIndex p = PairIndex::from_id(g - 15);
      if (r == p.i) {
        Canon c = wedge(15, s, p.j);
        emit(g, e, {-c.sign, c.gen});
      }
      if (r == p.j) {
        Canon c = wedge(15, p.i, s);
        emit(g, e, {-c.sign, c.gen});
      }
    } else {
      if (r == g - 24) emit(g, e, {-1, gen_xs1(s)});
    }
  }
  return TensorVector::from_unsorted(std::move(out));
}

TensorVector act_generator(int r, int s, const TensorVector& v) {
  std::vector<TensorVector::Entry> out;
  for (const auto& [m, c] : v)
    for (const auto& [m2, c2] : act_generator(r, s, m)) out.emplace_back(m2, c * c2);
  return TensorVector::from_unsorted(std::move(out));
}

TensorMonomial highest_weight_monomial(const Weight& lambda) {
  if (!lambda.is_dominant()) throw std::invalid_argument("not dominant");
  return TensorMonomial()
      .with_exp(gen_x(1), lambda[0])
      .with_exp(gen_xx({1, 2}), lambda[1])
      .with_exp(gen_xs({4, 5}), lambda[2])
      .with_exp(gen_xs1(5), lambda[3]);
}

bool WeightModule::known(int r, int s, std::size_t j) const {
  const auto& k = known_.at(gen_slot(r, s));
  return j < k.size() && k[j];
}

const SparseVector& WeightModule::act(int r, int s, std::size_t j) const {
  if (r == s) throw std::invalid_argument("WeightModule::act: need r != s");
  if (!known(r, s, j))
    throw std::logic_error("WeightModule::act: action of x" + std::to_string(r) + "d" + std::to_string(s) +
                           " on basis vector " + std::to_string(j) + " lies beyond the truncation depth");
  return action_[gen_slot(r, s)][j];
}

SparseVector WeightModule::act(int r, int s, const SparseVector& v) const {
  SparseVector out;
  for (const auto& [j, c] : v) out.axpy(c, act(r, s, j));
  return out;
}

void WeightModule::resize_actions() {
  for (int g = 0; g < 25; ++g) {
    action_[g].assign(dim(), SparseVector());
    known_[g].assign(dim(), 0);
  }
}

void WeightModule::set_action(int r, int s, std::size_t j, SparseVector image) {
  action_.at(gen_slot(r, s)).at(j) = std::move(image);
  known_[gen_slot(r, s)][j] = 1;
}

void WeightModule::set_unknown(int r, int s, std::size_t j) {
  action_.at(gen_slot(r, s)).at(j) = SparseVector();
  known_[gen_slot(r, s)][j] = 0;
}

std::optional<SparseVector> IrreducibleModule::coordinates(const TensorVector& v) const {
  std::vector<SparseVector::Entry> coords;
  for (const auto& [m, c] : v) {
    auto it = pivot_index_.find(m);
    if (it != pivot_index_.end()) coords.emplace_back(it->second, c);
  }
  SparseVector out = SparseVector::from_unsorted(std::move(coords));
  TensorVector rebuilt;
  for (const auto& [j, c] : out) rebuilt.axpy(c, basis[j]);
  if (rebuilt != v) return std::nullopt;
  return out;
}

namespace {

struct Candidate {
  TensorVector vec;
  std::size_t prev;
  int i;
};

struct Row {
  TensorVector vec;
  SparseVector combo;  // over candidate indices
};

// Reduced echelon basis of the span of the candidates, pivots at the least
// monomial, rows sorted by pivot.
std::vector<Row> echelonize(const std::vector<Candidate>& cands) {
  std::vector<Row> rows;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    Row cur{cands[k].vec, SparseVector(k, Scalar(1))};
    for (const Row& r : rows) {
      const Scalar* c = cur.vec.find(r.vec.front().first);
      if (!c) continue;
      Scalar f = -*c;
      cur.vec.axpy(f, r.vec);
      cur.combo.axpy(f, r.combo);
    }
    if (cur.vec.empty()) continue;
    Scalar inv = Scalar(1) / cur.vec.front().second;
    cur.vec.scale(inv);
    cur.combo.scale(inv);
    const TensorMonomial piv = cur.vec.front().first;
    for (Row& r : rows) {
      const Scalar* c = r.vec.find(piv);
      if (!c) continue;
      Scalar f = -*c;
      r.vec.axpy(f, cur.vec);
      r.combo.axpy(f, cur.combo);
    }
    rows.push_back(std::move(cur));
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.vec.front().first < b.vec.front().first; });
  return rows;
}

}  // namespace

IrreducibleModule build_irreducible(const Weight& lambda, int max_depth) {
  if (!lambda.is_dominant()) throw std::invalid_argument("not dominant");
  IrreducibleModule M;
  M.highest = lambda;
  M.max_depth = max_depth;
  M.hw_index = 0;
  auto add_vector = [&](TensorVector v, const Weight& w, int dep, std::vector<RecipeTerm> recipe) {
    std::size_t idx = M.basis.size();
    M.pivots.push_back(v.front().first);
    M.pivot_index_.emplace(v.front().first, idx);
    M.basis.push_back(std::move(v));
    M.weights.push_back(w);
    M.depth.push_back(dep);
    M.spaces[w].push_back(idx);
    M.recipes.push_back(std::move(recipe));
  };
  add_vector(TensorVector(highest_weight_monomial(lambda), Scalar(1)), lambda, 0, {});

  std::size_t level_begin = 0, level_end = 1;
  int dep = 0;
  bool closed = false;
  while (true) {
    if (max_depth >= 0 && dep >= max_depth) break;
    std::map<Weight, std::vector<Candidate>> cands;
    for (std::size_t j = level_begin; j < level_end; ++j) {
      for (int i = 1; i <= 4; ++i) {
        TensorVector v = act_generator(i + 1, i, M.basis[j]);
        if (v.empty()) continue;
        cands[M.weights[j] - simple_root(i)].push_back({std::move(v), j, i});
      }
    }
    if (cands.empty()) {
      closed = true;
      break;
    }
    ++dep;
    level_begin = M.basis.size();
    for (auto& [w, list] : cands) {
      for (Row& r : echelonize(list)) {
        std::vector<RecipeTerm> recipe;
        for (const auto& [k, c] : r.combo) recipe.push_back({list[k].prev, list[k].i, c});
        add_vector(std::move(r.vec), w, dep, std::move(recipe));
      }
    }
    level_end = M.basis.size();
  }
  if (!closed) {
    // one more probe: the module is complete when nothing lies below the last level
    bool more = false;
    for (std::size_t j = level_begin; j < level_end && !more; ++j)
      for (int i = 1; i <= 4 && !more; ++i) more = !act_generator(i + 1, i, M.basis[j]).empty();
    closed = !more;
  }
  M.complete = closed;
  if (closed && M.dim() != weyl_dimension(lambda)) throw std::logic_error("dimension mismatch");

  M.resize_actions();
  for (std::size_t j = 0; j < M.dim(); ++j) {
    for (int r = 1; r <= 5; ++r) {
      for (int s = 1; s <= 5; ++s) {
        if (r == s) continue;
        int target_depth = M.depth[j] - (s - r);  // x_r∂_s moves by r - s levels
        if (!M.complete && target_depth > dep) {
          M.set_unknown(r, s, j);
          continue;
        }
        TensorVector img = act_generator(r, s, M.basis[j]);
        std::vector<SparseVector::Entry> coords;
        for (const auto& [m, c] : img) {
          auto it = M.pivot_index_.find(m);
          if (it != M.pivot_index_.end()) coords.emplace_back(it->second, c);
        }
        M.set_action(r, s, j, SparseVector::from_unsorted(std::move(coords)));
      }
    }
  }
  if (M.complete) M.max_depth = -1;
  return M;
}

WeightModule dual_module(const WeightModule& m) {
  if (!m.complete) throw std::invalid_argument("dual_module: module is truncated");
  WeightModule d;
  d.highest = dual_weight(m.highest);
  d.complete = true;
  d.max_depth = -1;
  for (std::size_t j = 0; j < m.dim(); ++j) d.weights.push_back(-m.weights[j]);
  bool found = false;
  for (std::size_t j = 0; j < m.dim(); ++j) {
    if (d.weights[j] == d.highest) {
      if (found) throw std::logic_error("dual_module: highest weight is not simple");
      d.hw_index = j;
      found = true;
    }
    d.spaces[d.weights[j]].push_back(j);
  }
  if (!found) throw std::logic_error("dual_module: no highest weight vector");
  for (std::size_t j = 0; j < m.dim(); ++j) d.depth.push_back(*depth_below(d.weights[j], d.highest));
  d.resize_actions();
  for (int r = 1; r <= 5; ++r) {
    for (int s = 1; s <= 5; ++s) {
      if (r == s) continue;
      std::vector<std::vector<SparseVector::Entry>> cols(m.dim());
      for (std::size_t k = 0; k < m.dim(); ++k)
        for (const auto& [j, c] : m.act(r, s, k)) cols[j].emplace_back(k, -c);
      for (std::size_t j = 0; j < m.dim(); ++j) d.set_action(r, s, j, SparseVector::from_unsorted(std::move(cols[j])));
    }
  }
  return d;
}

std::shared_ptr<const IrreducibleModule> irreducible(const Weight& lambda, int min_depth) {
  struct Slot {
    std::mutex mu;
    std::shared_ptr<const IrreducibleModule> module;
  };
  static std::mutex global;
  static std::map<Weight, std::shared_ptr<Slot>> slots;
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard<std::mutex> lock(global);
    auto& s = slots[lambda];
    if (!s) s = std::make_shared<Slot>();
    slot = s;
  }
  std::lock_guard<std::mutex> lock(slot->mu);
  const auto& cur = slot->module;
  bool enough = cur && (cur->complete || (min_depth >= 0 && cur->max_depth >= min_depth));
  if (!enough) slot->module = std::make_shared<const IrreducibleModule>(build_irreducible(lambda, min_depth));
  return slot->module;
}

}  // namespace e510
