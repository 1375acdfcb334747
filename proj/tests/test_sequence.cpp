#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

#include <zerosum/reach.hpp>
#include <zerosum/sequence.hpp>

using namespace zerosum;

namespace {
const std::vector<std::vector<int>> kSmallGroups = {
    {5}, {8}, {2, 4}, {2, 2, 2}, {3, 3}, {12}, {2, 6}, {2, 2, 4}};
}

TEST_CASE("multiset semantics") {
  auto g = make_group({2, 4});
  Sequence s(g);
  s.add(Element(g, {1, 2}));
  s.add(Element(g, {1, 2}), 2);
  s.add(Element(g, {0, 1}));
  CHECK(s.length() == 4);
  CHECK(s.mult(Element(g, {1, 2})) == 3);
  CHECK(s.support().size() == 2);
  CHECK(!s.squarefree());
  s.remove(Element(g, {1, 2}).index(), 2);
  CHECK(s.length() == 2);
  CHECK_THROWS_AS(s.remove(Element(g, {1, 1}).index()), std::invalid_argument);

  auto flat = s.expand();
  CHECK(std::is_sorted(flat.begin(), flat.end()));
  CHECK(seq_from_indices(g, flat) == s);
}

TEST_CASE("algebraic laws for concat, minus, translate, map") {
  std::mt19937_64 rng(7);
  for (auto& f : kSmallGroups) {
    auto g = make_group(f);
    for (int rep = 0; rep < 20; ++rep) {
      auto a = oracle::random_sequence(g, 6, rng);
      auto b = oracle::random_sequence(g, 4, rng);
      auto ab = seq_concat(a, b);
      CHECK(ab.length() == 10);
      CHECK(ab.sum() == a.sum() + b.sum());
      CHECK(seq_minus(ab, b) == a);

      Element t(g, (u32)(rng() % g.order()));
      auto at = seq_translate(a, t);
      CHECK(at.sum() == a.sum() + 6 * t);

      auto th = doubling_hom(make_group({2, 4}));
      if (g == th.domain()) {
        auto img = seq_map(a, th);
        CHECK(img.sum() == th.apply(a.sum()));
      }
    }
  }
  auto g = make_group({4});
  auto h = make_group({2});
  CHECK_THROWS_AS(seq_concat(Sequence(g), Sequence(h)), std::invalid_argument);
}

TEST_CASE("subsums of 1*1*2 over Z_5") {
  auto g = make_group({5});
  auto s = seq_from_indices(g, {1, 1, 2});
  CHECK(subsums(s) == std::vector<u32>{1, 2, 3, 4});  // oracle-checked below
  auto o = oracle::subsums(s);
  CHECK(std::vector<u32>(o.begin(), o.end()) == subsums(s));
}

TEST_CASE("reach table equals the subset-enumeration oracle") {
  std::mt19937_64 rng(11);
  for (auto& f : kSmallGroups) {
    auto g = make_group(f);
    for (int rep = 0; rep < 40; ++rep) {
      u32 len = 1 + (u32)(rng() % 11);
      auto s = oracle::random_sequence(g, len, rng);
      auto profile = oracle::subset_profile(s);
      ReachTable t(s);
      for (u32 l = 0; l <= len; ++l)
        for (u32 v = 0; v < g.order(); ++v)
          CHECK(t.reachable(l, v) == (profile.count({l, v}) > 0));
    }
  }
}

TEST_CASE("incremental push/pop stays equal to a fresh table") {
  std::mt19937_64 rng(13);
  auto g = make_group({2, 2, 4});
  ReachEngine eng(g, 16, /*track_undo=*/true);
  std::vector<u32> stack;
  for (int step = 0; step < 400; ++step) {
    bool can_push = stack.size() < 12;
    bool can_pop = !stack.empty();
    bool push = can_push && (!can_pop || rng() % 2);
    if (push) {
      u32 x = (u32)(rng() % g.order());
      eng.push(x);
      stack.push_back(x);
    } else if (can_pop) {
      eng.pop();
      stack.pop_back();
    }
    if (step % 20 == 0) {
      ReachEngine fresh(g, 16);
      for (u32 v : stack) fresh.push(v);
      for (u32 l = 0; l <= (u32)stack.size(); ++l)
        for (u32 v = 0; v < g.order(); ++v)
          REQUIRE(eng.reachable(l, v) == fresh.reachable(l, v));
    }
  }
}

TEST_CASE("zero-sum queries and their edge cases") {
  auto g = make_group({6});
  auto s = seq_from_indices(g, {1, 1, 1, 3});
  CHECK(has_zero_sum_of_length(s, 0));   // empty subsequence
  CHECK(!has_zero_sum_of_length(s, 1));
  CHECK(!has_zero_sum_of_length(s, 3));  // length-3 sums are 3 and 5
  CHECK(has_zero_sum_of_length(s, 4));   // 1+1+1+3 = 6
  CHECK_THROWS_AS(has_zero_sum_of_length(s, 5), std::invalid_argument);
  CHECK(oracle::has_zero_of_length(s, 4) == has_zero_sum_of_length(s, 4));

  std::mt19937_64 rng(17);
  for (auto& f : kSmallGroups) {
    auto grp = make_group(f);
    for (int rep = 0; rep < 30; ++rep) {
      auto r = oracle::random_sequence(grp, 2 + (u32)(rng() % 9), rng);
      CHECK(has_nonempty_zero_sum(r) ==
            !oracle::is_free(r, FreenessKind::NONEMPTY_ZERO_SUM));
      CHECK(has_short_zero_sum(r) ==
            !oracle::is_free(r, FreenessKind::SHORT_ZERO_SUM));
    }
  }
}

TEST_CASE("witness extraction is verified and total over reachable targets") {
  std::mt19937_64 rng(19);
  for (auto& f : kSmallGroups) {
    auto g = make_group(f);
    for (int rep = 0; rep < 10; ++rep) {
      auto s = oracle::random_sequence(g, 1 + (u32)(rng() % 9), rng);
      auto profile = oracle::subset_profile(s);
      for (u32 l = 0; l <= (u32)s.length(); ++l)
        for (u32 v = 0; v < g.order(); ++v) {
          auto w = extract_subsequence(s, l, v);
          if (profile.count({l, v})) {
            REQUIRE(w.has_value());
            CHECK(w->length() == l);
            CHECK(w->sum().index() == v);
            CHECK(w->subsequence_of(s));
          } else {
            CHECK(!w.has_value());
          }
        }
    }
  }
}

TEST_CASE("short zero-sum witnesses respect the exponent window") {
  auto g = make_group({2, 2, 4});
  // no zero-sum of length 1..4 in the eta-style construction of length 7
  Element e = unit_of(g, 2), e1 = unit_of(g, 0), e2 = unit_of(g, 1);
  auto s = seq_from(g, {e, e, e, e1, e1 + e, e2, e2 + e});
  CHECK(s.length() == 7);
  CHECK(!has_short_zero_sum(s));
  CHECK(oracle::is_free(s, FreenessKind::SHORT_ZERO_SUM));
  CHECK(!witness_short_zero_sum(s).has_value());

  // with e^5 instead of e^3 the subsequence e^4 sums to zero
  auto bad = seq_from(g, {e, e, e, e, e, e1, e1 + e, e2, e2 + e});
  auto w = witness_short_zero_sum(bad);
  REQUIRE(w.has_value());
  CHECK(w->sub.length() == 4);
  CHECK(w->sub.sum().is_zero());

  auto nz = witness_nonempty_zero_sum(s);
  REQUIRE(nz.has_value());  // length 7 over a group with D = 5
  CHECK(nz->sub.sum().is_zero());
}
