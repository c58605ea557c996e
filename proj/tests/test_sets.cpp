#include <doctest.h>

#include "apxgroups/element_set.hpp"
#include "apxgroups/subgroup.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace apx;
using namespace testing_support;

TEST_CASE("product examples") {
  auto z = GroupContext::free_abelian(1);
  ElementSet s = interval_set(z, -1, 1);
  ElementSet p = product(s, s);
  CHECK(p.size() == 5);
  CHECK(p.contains(z->tuple({-2})));
  CHECK(p.contains(z->tuple({2})));

  auto f2 = GroupContext::free_group(2);
  ElementSet b2 = f2_ball(f2, 2);
  CHECK(product(b2, b2).size() == 161);  // |B_4|

  ElementSet id_only = ElementSet::single(f2, f2->identity());
  ElementSet b3 = f2_ball(f2, 3);
  CHECK(product(b3, id_only).elements() == b3.elements());

  CHECK_THROWS_AS(product(s, b2), InputError);
}

TEST_CASE("product agrees with brute force across families") {
  Rng rng(2024);

  auto z2 = GroupContext::free_abelian(2);
  auto h = GroupContext::heisenberg();
  auto f2 = GroupContext::free_group(2);
  auto d4 = GroupContext::finite_table(oracle::dihedral_table(4));
  auto m2 = GroupContext::matrix_group(2);
  Element sg[4] = {sanov_a(m2), m2->inv(sanov_a(m2)), sanov_b(m2), m2->inv(sanov_b(m2))};

  auto random_set = [&](const ContextPtr& ctx, std::size_t max_size) {
    std::vector<Element> v;
    std::size_t n = 1 + rng.below(max_size);
    for (std::size_t i = 0; i < n; ++i) {
      switch (ctx->family()) {
        case Family::Abelian:
          v.push_back(ctx->tuple({rng.range(-8, 8), rng.range(-8, 8)}));
          break;
        case Family::Heisenberg:
          v.push_back(ctx->tuple({rng.range(-4, 4), rng.range(-4, 4), rng.range(-4, 4)}));
          break;
        case Family::Free:
          v.push_back(ctx->word(random_word(rng, 2, 6)));
          break;
        case Family::Table:
          v.push_back(ctx->table_element(static_cast<int>(rng.below(8))));
          break;
        case Family::Matrix: {
          Element e = ctx->identity();
          int len = static_cast<int>(rng.below(4));
          for (int k = 0; k < len; ++k) e = ctx->mul(e, sg[rng.below(4)]);
          v.push_back(e);
          break;
        }
      }
    }
    return ElementSet(ctx, std::move(v));
  };

  for (const ContextPtr& ctx : {z2, h, f2, d4, m2}) {
    for (int trial = 0; trial < 60; ++trial) {
      ElementSet s = random_set(ctx, 25);
      ElementSet t = random_set(ctx, 25);
      ElementSet p = product(s, t);
      auto expected = naive_product(ctx, s.elements(), t.elements());
      CHECK(p.elements() == expected);
      CHECK(p.size() <= s.size() * t.size());
      if (t.contains(ctx->identity())) CHECK(s.is_subset_of(p));
    }
  }
}

TEST_CASE("product is associative as a set operation") {
  Rng rng(5);
  auto f2 = GroupContext::free_group(2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Element> sv, tv, uv;
    for (int i = 0; i < 6; ++i) {
      sv.push_back(f2->word(random_word(rng, 2, 4)));
      tv.push_back(f2->word(random_word(rng, 2, 4)));
      uv.push_back(f2->word(random_word(rng, 2, 4)));
    }
    ElementSet s(f2, sv), t(f2, tv), u(f2, uv);
    CHECK(product(product(s, t), u).elements() == product(s, product(t, u)).elements());
  }
}

TEST_CASE("parallel and serial products agree, and the big path is exercised") {
  auto z = GroupContext::free_abelian(1);
  ElementSet s = interval_set(z, 0, 2499);  // 2500^2 = 6.25M pairs > small limit
  int saved = runtime_config().threads;

  runtime_config().threads = 1;
  ElementSet serial = product(s, s);
  runtime_config().threads = 2;
  ElementSet parallel = product(s, s);
  runtime_config().threads = saved;

  CHECK(serial.size() == 4999);
  CHECK(serial.elements() == parallel.elements());

  std::set<long long> in;
  for (long long i = 0; i <= 2499; ++i) in.insert(i);
  CHECK(serial.size() == oracle::sumset(in, in).size());
}

TEST_CASE("power") {
  auto z = GroupContext::free_abelian(1);
  ElementSet s = interval_set(z, -1, 1);
  CHECK(power(s, 4).size() == 9);  // {-4..4}
  CHECK(power(s, 1).elements() == s.elements());

  auto f2 = GroupContext::free_group(2);
  CHECK(power(f2_ball(f2, 1), 5).size() == 485);  // |B_5|

  ElementSet id_only = ElementSet::single(z, z->identity());
  CHECK(power(id_only, 7).elements() == id_only.elements());

  CHECK_THROWS_AS(power(s, 0), InputError);
  CHECK_THROWS_AS(power(s, -3), InputError);

  // iterated product equals repeated squaring at powers of two
  ElementSet p8 = power(s, 8);
  ElementSet sq = product(s, s);
  sq = product(sq, sq);
  sq = product(sq, sq);
  CHECK(p8.elements() == sq.elements());
}

TEST_CASE("symmetrize") {
  auto f2 = GroupContext::free_group(2);
  ElementSet a(f2, {f2->word({1})});
  ElementSet sym = symmetrize(a);
  CHECK(sym.size() == 3);
  CHECK(sym.contains(f2->identity()));
  CHECK(sym.contains(f2->word({-1})));

  auto z = GroupContext::free_abelian(1);
  ElementSet b(z, {z->tuple({2}), z->tuple({3})});
  ElementSet symb = symmetrize(b);
  CHECK(symb.size() == 5);
  CHECK(symb.contains(z->tuple({-3})));
  CHECK(symb.contains(z->tuple({0})));

  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Element> v;
    for (int i = 0; i < 8; ++i) v.push_back(f2->word(random_word(rng, 2, 5)));
    ElementSet s(f2, v);
    ElementSet once = symmetrize(s);
    CHECK(once.is_symmetric());
    CHECK(once.contains_identity());
    CHECK(symmetrize(once).elements() == once.elements());
  }
}

TEST_CASE("intersect_coset") {
  auto z = GroupContext::free_abelian(1);
  ElementSet s = interval_set(z, -4, 4);
  SubgroupOracle evens = SubgroupOracle::parse(z, "even-lattice:2");

  ElementSet at0 = intersect_coset(s, evens, z->tuple({0}));
  CHECK(at0.size() == 5);
  CHECK(at0.contains(z->tuple({-4})));
  CHECK(at0.contains(z->tuple({0})));

  ElementSet at1 = intersect_coset(s, evens, z->tuple({1}));
  CHECK(at1.size() == 4);
  CHECK(at1.contains(z->tuple({-3})));
  CHECK(!at1.contains(z->tuple({0})));

  auto f2 = GroupContext::free_group(2);
  ElementSet b2 = f2_ball(f2, 2);
  SubgroupOracle even_len = SubgroupOracle::parse(f2, "even-length");
  ElementSet even_b2 = intersect_coset(b2, even_len, f2->identity());
  // oracle count: even-length reduced words of length <= 2
  std::size_t expected = 0;
  for (const auto& w : oracle::ball_enumeration(2, 2))
    if (w.size() % 2 == 0) ++expected;
  CHECK(expected == 13);
  CHECK(even_b2.size() == expected);
}

TEST_CASE("subgroup oracles satisfy closure on sampled pairs") {
  Rng rng(31);
  auto z2 = GroupContext::free_abelian(2);
  auto h = GroupContext::heisenberg();
  auto m2 = GroupContext::matrix_group(2);
  auto q8 = GroupContext::finite_table(oracle::quaternion_table());

  struct Case {
    ContextPtr ctx;
    std::string spec;
  };
  std::vector<Case> cases = {
      {z2, "even-lattice:2"}, {z2, "sublattice:2,3"}, {h, "center"},
      {h, "congruence:2"},    {m2, "upper-triangular"}, {m2, "det-one"},
      {q8, "table-subgroup:0,1,2,3"}};

  Element sg[4] = {sanov_a(m2), m2->inv(sanov_a(m2)), sanov_b(m2), m2->inv(sanov_b(m2))};
  // draw candidates from a distribution that actually hits each subgroup
  auto sample = [&](const ContextPtr& ctx, const std::string& spec) {
    if (spec == "center") return ctx->tuple({0, 0, rng.range(-20, 20)});
    switch (ctx->family()) {
      case Family::Abelian:
        return ctx->tuple({2 * rng.range(-15, 15), 6 * rng.range(-5, 5)});
      case Family::Heisenberg:
        return ctx->tuple({2 * rng.range(-5, 5), 2 * rng.range(-5, 5),
                           2 * rng.range(-5, 5)});
      case Family::Table:
        return ctx->table_element(static_cast<int>(rng.below(8)));
      default: {
        Element e = ctx->identity();
        for (int k = static_cast<int>(rng.below(5)); k > 0; --k)
          e = ctx->mul(e, sg[rng.below(4)]);
        return e;
      }
    }
  };

  for (const auto& c : cases) {
    SubgroupOracle oracle_h = SubgroupOracle::parse(c.ctx, c.spec);
    int accepted_pairs = 0;
    for (int trial = 0; trial < 4000 && accepted_pairs < 300; ++trial) {
      Element h1 = sample(c.ctx, c.spec);
      Element h2 = sample(c.ctx, c.spec);
      if (!oracle_h.contains(h1) || !oracle_h.contains(h2)) continue;
      ++accepted_pairs;
      CHECK(oracle_h.contains(c.ctx->mul(h1, c.ctx->inv(h2))));
    }
    CHECK(accepted_pairs > 0);
  }

  CHECK_THROWS_AS(SubgroupOracle::parse(q8, "table-subgroup:0,2"), InputError);
  CHECK_THROWS_AS(SubgroupOracle::parse(z2, "even-length"), InputError);
  CHECK_THROWS_AS(SubgroupOracle::parse(z2, "nonsense"), InputError);
}

TEST_CASE("doubling constants") {
  auto c6 = GroupContext::finite_table(oracle::cyclic_table(6));
  CHECK(doubling_constant(table_whole_group(c6)) == Rational(1));

  auto z = GroupContext::free_abelian(1);
  for (Int n : {1, 5, 20})
    CHECK(doubling_constant(interval_set(z, -n, n)) ==
          Rational(4 * n + 1, 2 * n + 1));

  auto f2 = GroupContext::free_group(2);
  CHECK(doubling_constant(f2_ball(f2, 2)) == Rational(161, 17));

  CHECK_THROWS_AS(doubling_constant(ElementSet::empty_set(z)), InputError);
}

TEST_CASE("element budget is a hard error") {
  auto z = GroupContext::free_abelian(1);
  std::size_t saved = runtime_config().element_budget;
  runtime_config().element_budget = 50;
  ElementSet s = interval_set(z, -20, 20);
  CHECK_THROWS_AS(product(s, s), BudgetError);
  runtime_config().element_budget = saved;
}

TEST_CASE("set union, intersection and membership") {
  auto z = GroupContext::free_abelian(1);
  ElementSet a = interval_set(z, -3, 1);
  ElementSet b = interval_set(z, 0, 4);
  CHECK(a.unite(b).size() == 8);
  CHECK(a.intersect(b).size() == 2);
  CHECK(a.contains(z->tuple({-3})));
  CHECK(!a.contains(z->tuple({2})));
  CHECK(a.intersect(b).is_subset_of(a));
  CHECK(!a.is_subset_of(b));
  auto missing = a.first_missing_from(b);
  REQUIRE(missing.has_value());
  CHECK(*missing == z->tuple({-3}));
}
