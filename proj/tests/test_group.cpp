#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

#include <zerosum/group.hpp>

using namespace zerosum;

TEST_CASE("presentation is kept verbatim; order and exponent derive from it") {
  auto g = make_group({2, 2, 4});
  CHECK(g.factors() == std::vector<int>{2, 2, 4});
  CHECK(g.order() == 16);
  CHECK(g.exponent() == 4);
  CHECK(g.rank() == 3);

  auto h = make_group({2, 2, 2, 3});
  CHECK(h.order() == 24);
  CHECK(h.exponent() == 6);
  CHECK(h.factors().size() == 4);  // not collapsed to the invariant chain

  auto t = make_group({});
  CHECK(t.order() == 1);
  CHECK(t.exponent() == 1);
}

TEST_CASE("invariant factor chain agrees with the element-order oracle") {
  // expected value computed by comparing order multisets of both presentations
  auto g = make_group({2, 2, 2, 3});
  CHECK(g.invariant_factors() == std::vector<int>{2, 2, 6});
  CHECK(oracle::order_multiset(g) == oracle::order_multiset(make_group({2, 2, 6})));

  auto h = make_group({12, 18});
  CHECK(h.invariant_factors() == std::vector<int>{6, 36});
  CHECK(oracle::order_multiset(h) == oracle::order_multiset(make_group({6, 36})));

  for (auto factors : std::vector<std::vector<int>>{
           {2, 2, 4}, {4, 6}, {10}, {2, 3, 5}, {8, 2}, {1, 5}}) {
    auto grp = make_group(factors);
    auto inv = grp.invariant_factors();
    u64 prod = 1;
    for (std::size_t i = 0; i < inv.size(); ++i) {
      CHECK(inv[i] >= 2);
      if (i + 1 < inv.size()) CHECK(inv[i + 1] % inv[i] == 0);
      prod *= (u64)inv[i];
    }
    CHECK(prod == grp.order());
    CHECK(oracle::order_multiset(grp) == oracle::order_multiset(make_group(inv)));
  }
}

TEST_CASE("element arithmetic, indices and orders") {
  auto g = make_group({2, 4});
  Element a(g, {1, 2});
  CHECK(a.ord() == 2);  // oracle: iterate multiples
  CHECK(oracle::elem_order(g, a.index()) == 2);

  for (u32 x = 0; x < g.order(); ++x) {
    Element e(g, x);
    CHECK(g.index_of(e.residues()) == x);
    CHECK(g.exponent() % e.ord() == 0);
    CHECK((e + (-e)).is_zero());
    CHECK(oracle::elem_order(g, x) == e.ord());
  }

  Element u = unit_of(g, 1);
  CHECK((3 * u).residues() == std::vector<int>{0, 3});
  CHECK((Element(g, {1, 3}) + Element(g, {1, 1})).residues() == std::vector<int>{0, 0});
  CHECK(Element(g, {-1, -1}).residues() == std::vector<int>{1, 3});  // normalized

  auto h = make_group({3});
  CHECK_THROWS_AS(Element(g, {0, 0}) + Element(h, {0}), std::invalid_argument);
}

TEST_CASE("homomorphism construction validates generator orders") {
  auto c4 = make_group({4});
  auto c3 = make_group({3});
  // 4 * 1 != 0 in Z_3, so e -> 1 does not extend
  CHECK_THROWS_WITH(make_hom(c4, c3, {Element(c3, {1})}),
                    Catch::Matchers::ContainsSubstring("generator 0"));
  auto ok = make_hom(c4, c3, {Element(c3, {0})});
  CHECK(ok.apply(Element(c4, {3})).is_zero());

  auto g = make_group({2, 4});
  auto h = make_hom(g, c4, {Element(c4, {2}), Element(c4, {1})});
  for (u32 a = 0; a < g.order(); ++a)
    for (u32 b = 0; b < g.order(); ++b)
      CHECK(h.apply_index(g.add(a, b)) ==
            c4.add(h.apply_index(a), h.apply_index(b)));
}

TEST_CASE("doubling map on Z_2^{r-1} x Z_2n") {
  auto g = make_group({2, 2, 4});
  auto th = doubling_hom(g);
  std::set<u32> image, kernel;
  for (u32 x = 0; x < g.order(); ++x) {
    u32 y = th.apply_index(x);
    image.insert(y);
    if (y == 0) kernel.insert(x);
  }
  CHECK(image.size() == 8);   // <e1, e2, ne> of type Z_2^3
  CHECK(kernel.size() == 2);  // <2e>
  Element e = unit_of(g, 2);
  CHECK(kernel.count((2 * e).index()) == 1);
  for (u32 y : image) CHECK(g.scalar(2, y) == 0);  // image has exponent 2

  auto c4 = make_group({4});
  auto th2 = doubling_hom(c4);
  CHECK(th2.apply(Element(c4, {1})) == Element(c4, {2}));

  CHECK_THROWS_AS(doubling_hom(make_group({2, 3})), std::invalid_argument);
  CHECK_THROWS_AS(doubling_hom(make_group({2, 4, 4})), std::invalid_argument);
  // all factors 2: n = 1, the map is the identity
  auto g2 = doubling_hom(make_group({2, 2}));
  for (u32 x = 0; x < 4; ++x) CHECK(g2.apply_index(x) == x);
}

TEST_CASE("automorphism enumeration matches the additive-bijection oracle") {
  CHECK(automorphisms(make_group({2, 2})).size() == 6);  // |GL(2,2)|
  for (auto factors : std::vector<std::vector<int>>{
           {3}, {4}, {2, 2}, {6}, {2, 4}, {2, 2, 2}, {3, 3}}) {
    auto g = make_group(factors);
    CHECK(automorphisms(g).size() == oracle::count_automorphisms(g));
  }
}

TEST_CASE("automorphism set is a group under composition") {
  auto g = make_group({2, 4});
  auto auts = automorphisms(g);
  std::set<std::vector<u32>> all(auts.perms().begin(), auts.perms().end());
  std::vector<u32> ident(g.order());
  for (u32 x = 0; x < g.order(); ++x) ident[x] = x;
  CHECK(all.count(ident) == 1);
  for (const auto& p : auts.perms()) {
    for (const auto& q : auts.perms()) {
      std::vector<u32> comp(g.order());
      for (u32 x = 0; x < g.order(); ++x) comp[x] = p[q[x]];
      CHECK(all.count(comp) == 1);
    }
    std::vector<u32> inv(g.order());
    for (u32 x = 0; x < g.order(); ++x) inv[p[x]] = x;
    CHECK(all.count(inv) == 1);
  }
  // each stored tuple really is a homomorphism
  auto h = auts.hom(auts.size() / 2);
  for (u32 a = 0; a < g.order(); ++a)
    for (u32 b = 0; b < g.order(); ++b)
      CHECK(h.apply_index(g.add(a, b)) == g.add(h.apply_index(a), h.apply_index(b)));
}

TEST_CASE("automorphism enumeration refuses oversized groups") {
  CHECK_THROWS_AS(automorphisms(make_group({2, 2, 2, 2, 2, 2, 2})),
                  std::domain_error);
  // raising the bound admits the group again
  auto g = make_group({5, 5});
  CHECK(automorphisms(g, 64).size() == oracle::count_automorphisms(g));
}
