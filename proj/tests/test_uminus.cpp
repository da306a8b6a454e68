#include <random>
#include <stdexcept>

#include "doctest.h"
#include "e510/uminus.hpp"

using namespace e510;

namespace {

UElement D(int t) {
  std::array<int, 5> d{};
  d[t - 1] = 1;
  return monomial_element(UMonomial::from_parts(d, 0));
}

UElement nf(std::initializer_list<UGenerator> w) { return normal_form(std::vector<UGenerator>(w)); }
UGenerator d(int i, int j) { return UGenerator::d(i, j); }
UGenerator p(int t) { return UGenerator::partial(t); }

UMonomial random_monomial(std::mt19937_64& rng, int max_del = 2) {
  std::uniform_int_distribution<int> mask(0, 1023), del(0, max_del);
  return UMonomial::from_parts({del(rng), del(rng), del(rng), del(rng), del(rng)},
                               static_cast<std::uint16_t>(mask(rng)));
}

IndexTuple random_tuple(std::mt19937_64& rng, int d) {
  std::uniform_int_distribution<int> letter(1, 5);
  IndexTuple I;
  while (static_cast<int>(I.size()) < d) {
    int i = letter(rng), j = letter(rng);
    if (i != j) I.push_back({i, j});
  }
  return I;
}

SignedPermutation random_signed_permutation(std::mt19937_64& rng, int d) {
  SignedPermutation g = SignedPermutation::identity(d);
  std::shuffle(g.sigma.begin(), g.sigma.end(), rng);
  std::bernoulli_distribution coin(0.5);
  for (auto& e : g.eta) e = coin(rng) ? 1 : -1;
  return g;
}

// All tuples of d canonical, strictly increasing pairs.
std::vector<IndexTuple> canonical_tuples(int d) {
  std::vector<IndexTuple> out;
  for (const UMonomial& m : pbw_monomials(d))
    if (m.num_del() == 0) out.push_back(m.pairs());
  return out;
}

}  // namespace

TEST_CASE("pair indexing") {
  CHECK(PairIndex{1, 2}.id() == 0);
  CHECK(PairIndex{4, 5}.id() == 9);
  CHECK(PairIndex{2, 3}.id() == 4);
  for (int k = 0; k < kNumPairs; ++k) CHECK(PairIndex::from_id(k).id() == k);
  CHECK_THROWS(PairIndex{3, 2}.id());
  CHECK_THROWS(PairIndex::from_id(10));
  CHECK(PairIndex{2, 1}.bar() == PairIndex{1, 2});
}

TEST_CASE("eps_t") {
  CHECK(eps_t(1, 2, 3, 4).sign == 1);
  CHECK(eps_t(1, 2, 3, 4).t == 5);
  CHECK(eps_t(1, 2, 1, 3).sign == 0);
  CHECK(eps_t(1, 2, 1, 3).t == 1);
  CHECK(eps_t(4, 5, 1, 2).sign == 1);
  CHECK(eps_t(4, 5, 1, 2).t == 3);
  CHECK(eps_t(2, 1, 3, 4).sign == -1);
  CHECK(eps_t(1, 2, 3, 5).t == 4);
  CHECK_THROWS(eps_t(0, 1, 2, 3));
  // symmetric under exchanging the two pairs
  for (int a = 1; a <= 5; ++a)
    for (int b = 1; b <= 5; ++b)
      for (int c = 1; c <= 5; ++c)
        for (int e = 1; e <= 5; ++e) {
          CHECK(eps_t(a, b, c, e).sign == eps_t(c, e, a, b).sign);
          CHECK(eps_t(a, b, c, e).sign == -eps_t(b, a, c, e).sign);
        }
}

TEST_CASE("UMonomial packing and validation") {
  UMonomial m = UMonomial::make({0, 2, 0, 0, 1}, {{1, 2}, {3, 4}});
  CHECK(m.del(2) == 2);
  CHECK(m.del(5) == 1);
  CHECK(m.num_pairs() == 2);
  CHECK(m.degree() == 8);
  CHECK(m.str() == "D2^2*D5*d12*d34");
  CHECK(m.latex() == "\\partial_{2}^{2}\\partial_{5}d_{12}d_{34}");
  CHECK(UMonomial().str() == "1");
  CHECK_THROWS(UMonomial::make({}, {{3, 4}, {1, 2}}));
  CHECK_THROWS(UMonomial::make({}, {{2, 1}}));
  CHECK_THROWS(UMonomial::make({}, {{1, 2}, {1, 2}}));
  CHECK_THROWS(UMonomial::make({16, 0, 0, 0, 0}, {}));
  CHECK(UMonomial::from_key(m.key()) == m);
  CHECK(UMonomial::make({}, {{1, 2}}).weight() == Weight(0, 1, 0, 0));
  CHECK(UMonomial::make({0, 0, 1, 0, 0}, {}).weight() == Weight(0, 1, -1, 0));
}

TEST_CASE("normal form examples") {
  CHECK(nf({d(1, 2), d(1, 2)}).empty());
  CHECK(nf({d(3, 4), d(1, 2)}) == -nf({d(1, 2), d(3, 4)}) + D(5));
  CHECK(nf({d(3, 4), d(1, 2)}) == UElement::from_unsorted({{UMonomial::make({}, {{1, 2}, {3, 4}}), Scalar(-1)},
                                                             {UMonomial::make({0, 0, 0, 0, 1}, {}), Scalar(1)}}));
  CHECK(nf({p(3), d(1, 2)}) == nf({d(1, 2), p(3)}));
  CHECK(nf({d(2, 1)}) == -nf({d(1, 2)}));
  CHECK(nf({d(3, 3)}).empty());
  CHECK(nf({}) == monomial_element(UMonomial()));
  CHECK(to_string(nf({d(3, 4), d(1, 2)})) == "-d12*d34 + D5");
  CHECK(to_string(UElement()) == "0");
}

TEST_CASE("odd generators anticommute up to the bracket") {
  for (int a = 0; a < kNumPairs; ++a) {
    for (int b = 0; b < kNumPairs; ++b) {
      PairIndex A = PairIndex::from_id(a), B = PairIndex::from_id(b);
      UElement lhs = nf({d(A.i, A.j), d(B.i, B.j)}) + nf({d(B.i, B.j), d(A.i, A.j)});
      EpsT e = eps_t(A, B);
      UElement rhs = e.sign == 0 ? UElement() : Scalar(e.sign) * D(e.t);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("multiplication is associative and ∂ is central") {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 300; ++it) {
    UMonomial a = random_monomial(rng), b = random_monomial(rng), c = random_monomial(rng);
    UElement A = monomial_element(a), B = monomial_element(b), C = monomial_element(c);
    CHECK(multiply(multiply(A, B), C) == multiply(A, multiply(B, C)));
    UMonomial dp = UMonomial::from_parts(a.dels(), 0);
    CHECK(multiply(monomial_element(dp), B) == multiply(B, monomial_element(dp)));
    for (const auto& [m, s] : multiply(A, B)) CHECK(m.degree() == a.degree() + b.degree());
  }
}

TEST_CASE("SIF subsets and crossing numbers") {
  CHECK(sif_subsets(0).size() == 1);
  CHECK(sif_subsets(1).size() == 1);
  CHECK(sif_subsets(1)[0].empty());
  auto two = sif_subsets(2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].empty());
  CHECK(two[1] == SifSet{{1, 2}});
  const std::size_t telephone[] = {1, 1, 2, 4, 10, 26, 76, 232};
  for (int k = 0; k < 8; ++k) CHECK(sif_subsets(k).size() == telephone[k]);
  CHECK_THROWS(sif_subsets(-1));
  CHECK(crossing_number({{1, 3}, {2, 5}, {4, 7}}) == 2);
  CHECK(crossing_number({}) == 0);
  CHECK(crossing_number({{1, 2}, {3, 4}}) == 0);
  CHECK(crossing_number({{1, 4}, {2, 3}}) == 0);
  CHECK(crossing_number({{1, 3}, {2, 4}}) == 1);
}

TEST_CASE("contractions") {
  CHECK(contraction({{1, 2}, {2, 3}, {3, 5}}, 1, 3) == Scalar(-1, 2) * D(4));
  CHECK(contraction({{2, 1}, {1, 3}, {4, 5}, {2, 5}}, 1, 3) == Scalar(-1, 2) * D(3));
  CHECK(contraction({{1, 2}, {2, 3}}, 1, 2).empty());
  CHECK_THROWS(contraction({{1, 2}, {3, 4}}, 2, 1));
  CHECK_THROWS(contraction({{1, 2}, {3, 4}}, 1, 3));
}

TEST_CASE("omega expansion of (21,13,45,25)") {
  IndexTuple I{{2, 1}, {1, 3}, {4, 5}, {2, 5}};
  UElement expected = nf({d(2, 1), d(1, 3), d(4, 5), d(2, 5)}) + Scalar(-1, 2) * nf({p(3), d(1, 3), d(2, 5)}) +
                      Scalar(1, 2) * nf({p(2), d(2, 1), d(2, 5)}) + Scalar(1, 2) * nf({p(4), d(2, 1), d(4, 5)}) +
                      Scalar(1, 4) * nf({p(3), p(4)});
  CHECK(omega(I) == expected);
  CHECK(omega({{1, 2}}) == nf({d(1, 2)}));
  CHECK(omega({}) == monomial_element(UMonomial()));
  CHECK(omega({{1, 2}, {3, 4}, {1, 2}}).empty());
  CHECK(omega({{1, 2}, {2, 1}}).empty());
  CHECK(omega({{1, 1}, {2, 3}}).empty());
}

TEST_CASE("omega is homogeneous and vanishes on repeated entries") {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 200; ++it) {
    int dd = 1 + it % 5;
    IndexTuple I = random_tuple(rng, dd);
    for (const auto& [m, c] : omega(I)) CHECK(m.degree() == dd);
    if (dd >= 2) {
      IndexTuple J = I;
      J[dd - 1] = (it % 2) ? J[0] : J[0].bar();
      CHECK(omega(J).empty());
    }
  }
}

TEST_CASE("B_d action") {
  IndexTuple I{{1, 2}, {3, 4}};
  SignedPermutation id = SignedPermutation::identity(2);
  CHECK(bd_act(id, I) == I);
  CHECK(sign_character(id) == 1);
  SignedPermutation s0{{1, 2}, {-1, 1}};
  CHECK(bd_act(s0, I) == IndexTuple{{2, 1}, {3, 4}});
  CHECK(sign_character(s0) == -1);
  SignedPermutation s1{{2, 1}, {1, 1}};
  CHECK(bd_act(s1, I) == IndexTuple{{3, 4}, {1, 2}});
  CHECK(sign_character(s1) == -1);
  CHECK_THROWS(bd_act(SignedPermutation::identity(3), I));
  CHECK_THROWS(bd_act(SignedPermutation{{1, 1}, {1, 1}}, I));
  CHECK_THROWS(sign_character(SignedPermutation{{1, 2}, {1, 0}}));
}

TEST_CASE("omega transforms by the sign character") {
  std::mt19937_64 rng(21);
  for (int dd = 1; dd <= 4; ++dd) {
    for (int it = 0; it < 40; ++it) {
      IndexTuple I = random_tuple(rng, dd);
      SignedPermutation g = random_signed_permutation(rng, dd);
      CHECK(omega(bd_act(g, I)) == Scalar(sign_character(g)) * omega(I));
    }
  }
}

TEST_CASE("L0 adjoint action") {
  UMonomial d23 = UMonomial::make({}, {{2, 3}});
  CHECK(l0_adjoint(1, 2, monomial_element(d23)) == nf({d(1, 3)}));
  CHECK(l0_adjoint(1, 2, D(1)) == -D(2));
  CHECK(l0_adjoint(1, 2, nf({d(3, 4)})).empty());
  CHECK(l0_adjoint(3, 2, nf({d(1, 2)})) == nf({d(1, 3)}));
  CHECK(l0_adjoint(1, 1, nf({d(1, 2)})) == nf({d(1, 2)}));
  CHECK(l0_adjoint(1, 1, D(1)) == -D(1));
}

TEST_CASE("L0 adjoint is a derivation of the product") {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 100; ++it) {
    UElement A = monomial_element(random_monomial(rng, 1)), B = monomial_element(random_monomial(rng, 1));
    int s = 1 + it % 5, r = 1 + (it / 5) % 5;
    if (s == r) continue;
    CHECK(l0_adjoint(s, r, multiply(A, B)) == multiply(l0_adjoint(s, r, A), B) + multiply(A, l0_adjoint(s, r, B)));
  }
}

TEST_CASE("L0 adjoint shifts weights by the root") {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 200; ++it) {
    UMonomial m = random_monomial(rng, 2);
    int s = 1 + it % 5, r = 1 + (it / 5) % 5;
    if (s == r) continue;
    for (const auto& [m2, c] : l0_adjoint(s, r, m)) CHECK(m2.weight() == m.weight() + root(s, r));
  }
}

TEST_CASE("d_arrow examples and agreement with the adjoint action") {
  CHECK(d_arrow(1, 2, {{2, 3}}) == nf({d(1, 3)}));
  CHECK(d_arrow(4, 2, {{1, 2}, {2, 3}}) == omega({{1, 4}, {2, 3}}) + omega({{1, 2}, {4, 3}}));
  CHECK(d_arrow(4, 5, {{1, 2}, {2, 3}}).empty());
  for (int dd = 0; dd <= 2; ++dd)
    for (const auto& I : canonical_tuples(dd))
      for (int s = 1; s <= 5; ++s)
        for (int r = 1; r <= 5; ++r)
          if (s != r) CHECK(l0_adjoint(s, r, omega(I)) == d_arrow(s, r, I));
}

TEST_CASE("omega basis") {
  CHECK(pbw_dimension(1) == 10);
  CHECK(pbw_dimension(2) == 50);
  CHECK(pbw_dimension(3) == 170);
  CHECK(pbw_dimension(6) == 1970);
  for (int dd = 0; dd <= 5; ++dd) {
    auto mons = pbw_monomials(dd);
    CHECK(mons.size() == pbw_dimension(dd));
    CHECK(std::is_sorted(mons.begin(), mons.end()));
    CHECK(std::adjacent_find(mons.begin(), mons.end()) == mons.end());
  }
  for (int dd = 0; dd <= 4; ++dd) {
    OmegaBasis b = omega_basis(dd);
    CHECK(b.labels.size() == pbw_dimension(dd));
    CHECK(rank(b.change_of_basis()) == b.labels.size());
    // unitriangular in the ∂-count: the label itself appears with coefficient 1
    for (std::size_t k = 0; k < b.labels.size(); ++k) {
      CHECK(b.elements[k].at(b.labels[k]).is_one());
      for (const auto& [m, c] : b.elements[k])
        if (m != b.labels[k]) CHECK(m.num_del() > b.labels[k].num_del());
    }
  }
  OmegaBasis one = omega_basis(1);
  for (std::size_t k = 0; k < one.labels.size(); ++k) CHECK(one.elements[k] == monomial_element(one.labels[k]));
}

TEST_CASE("decomposition in the omega basis round-trips") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int dd = 1; dd <= 4; ++dd) {
    auto mons = pbw_monomials(dd);
    std::map<UMonomial, UElement> terms;
    std::uniform_int_distribution<std::size_t> pick(0, mons.size() - 1);
    for (int k = 0; k < 6; ++k) {
      UElement c = Scalar(coef(rng)) * monomial_element(mons[pick(rng)]);
      if (!c.empty()) terms[mons[pick(rng)]] += c;
    }
    std::erase_if(terms, [](const auto& kv) { return kv.second.empty(); });
    auto axpy = [](UElement& dst, const Scalar& s, const UElement& src) { dst.axpy(s, src); };
    auto is_zero = [](const UElement& x) { return x.empty(); };
    auto theta = decompose_in_omega<UElement>(terms, axpy, is_zero);
    std::map<UMonomial, UElement> back;
    for (const auto& [label, c] : theta)
      for (const auto& [m, s] : omega_of_label(label)) back[m].axpy(s, c);
    std::erase_if(back, [](const auto& kv) { return kv.second.empty(); });
    CHECK(back == terms);
  }
}

TEST_CASE("dominance of d_I weights matches sorted entrywise order") {
  std::vector<IndexTuple> all;
  for (int a = 0; a < kNumPairs; ++a)
    for (int b = 0; b < kNumPairs; ++b) {
      PairIndex A = PairIndex::from_id(a), B = PairIndex::from_id(b);
      all.push_back({A, B});
    }
  auto weight_of = [](const IndexTuple& I) {
    std::array<int, 5> e{};
    for (auto p : I) {
      e[p.i - 1]++;
      e[p.j - 1]++;
    }
    return Weight::from_epsilon(e);
  };
  auto sorted_entries = [](const IndexTuple& I) {
    std::vector<int> v;
    for (auto p : I) {
      v.push_back(p.i);
      v.push_back(p.j);
    }
    std::sort(v.begin(), v.end());
    return v;
  };
  for (const auto& I : all) {
    for (const auto& K : all) {
      auto cmp = dominance_compare(weight_of(I), weight_of(K));
      bool ge = cmp == Dominance::GreaterEqual || cmp == Dominance::Equal;
      auto si = sorted_entries(I), sk = sorted_entries(K);
      bool entrywise = true;
      for (std::size_t k = 0; k < si.size(); ++k) entrywise = entrywise && si[k] <= sk[k];
      CHECK(ge == entrywise);
    }
  }
}
