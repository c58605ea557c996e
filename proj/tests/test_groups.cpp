#include <doctest.h>

#include "apxgroups/element_set.hpp"
#include "apxgroups/io.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace apx;
using namespace testing_support;

namespace {

std::vector<int> word_symbols(const Element& e) {
  std::vector<int> out;
  for (Run r : e.int_span())
    for (Int i = 0; i < run_count(r); ++i) out.push_back(run_gen(r));
  return out;
}

}  // namespace

TEST_CASE("free group multiplication reduces cancellations") {
  auto f2 = GroupContext::free_group(2);
  CHECK(word_symbols(f2->mul(f2->word({1, 2}), f2->word({-2, 1}))) ==
        std::vector<int>{1, 1});
  CHECK(word_symbols(f2->inv(f2->word({1, 2}))) == std::vector<int>{-2, -1});
  CHECK(f2->is_identity(f2->mul(f2->word({1, 2}), f2->word({-2, -1}))));
}

TEST_CASE("free group agrees with the naive word oracle") {
  auto f2 = GroupContext::free_group(2);
  Rng rng(12345);
  for (int trial = 0; trial < 10000; ++trial) {
    auto wa = random_word(rng, 2, 12);
    auto wb = random_word(rng, 2, 12);
    Element a = f2->word(wa);
    Element b = f2->word(wb);
    CHECK(word_symbols(f2->mul(a, b)) == oracle::mul(wa, wb));
    CHECK(word_symbols(f2->inv(a)) == oracle::inv(oracle::reduce(wa)));
    // canonical form: no adjacent inverse pair, and canonicalization is
    // idempotent
    auto canon = word_symbols(a);
    for (std::size_t i = 1; i < canon.size(); ++i) CHECK(canon[i] != -canon[i - 1]);
    CHECK(word_symbols(f2->word(canon)) == canon);
    // |xy| <= |x| + |y|
    CHECK(word_symbols(f2->mul(a, b)).size() <= canon.size() + oracle::reduce(wb).size());
  }
}

TEST_CASE("matrix group basics") {
  auto m2 = GroupContext::matrix_group(2);
  Element a = sanov_a(m2);
  Element b = sanov_b(m2);
  Element ab = m2->mul(a, b);
  CHECK(ab.matrix().entries ==
        std::vector<Rational>{Rational(5), Rational(2), Rational(2), Rational(1)});
  Element ainv = m2->inv(a);
  CHECK(ainv.matrix().entries ==
        std::vector<Rational>{Rational(1), Rational(-2), Rational(0), Rational(1)});
  CHECK(m2->is_identity(m2->mul(a, ainv)));
  CHECK_THROWS_AS(m2->matrix({Rational(1), Rational(1), Rational(1), Rational(1)}),
                  InputError);
  CHECK_THROWS_AS(m2->mul(a, GroupContext::free_group(2)->word({1})), InputError);
}

TEST_CASE("Heisenberg multiplication matches the unitriangular embedding") {
  auto h = GroupContext::heisenberg();
  auto m3 = GroupContext::matrix_group(3);
  auto embed = [&](const Element& e) {
    auto s = e.int_span();
    return m3->matrix({Rational(1), Rational(s[0]), Rational(s[2]),
                       Rational(0), Rational(1), Rational(s[1]),
                       Rational(0), Rational(0), Rational(1)});
  };
  CHECK(h->mul(h->tuple({1, 0, 0}), h->tuple({0, 1, 0})) == h->tuple({1, 1, 1}));
  Rng rng(777);
  for (int trial = 0; trial < 10000; ++trial) {
    Element x = h->tuple({rng.range(-50, 50), rng.range(-50, 50), rng.range(-50, 50)});
    Element y = h->tuple({rng.range(-50, 50), rng.range(-50, 50), rng.range(-50, 50)});
    Element prod = h->mul(x, y);
    CHECK(embed(prod) == m3->mul(embed(x), embed(y)));
    CHECK(embed(h->inv(x)) == m3->inv(embed(x)));
  }
}

TEST_CASE("group axioms hold on sampled triples in every family") {
  Rng rng(42);
  auto check_family = [&](const ContextPtr& ctx,
                          const std::function<Element()>& sample) {
    Element id = ctx->identity();
    for (int trial = 0; trial < 10000; ++trial) {
      Element x = sample();
      Element y = sample();
      Element z = sample();
      CHECK(ctx->mul(ctx->mul(x, y), z) == ctx->mul(x, ctx->mul(y, z)));
      CHECK(ctx->mul(x, id) == x);
      CHECK(ctx->mul(id, x) == x);
      CHECK(ctx->mul(x, ctx->inv(x)) == id);
    }
  };

  auto f2 = GroupContext::free_group(2);
  check_family(f2, [&]() { return f2->word(random_word(rng, 2, 10)); });

  auto z2 = GroupContext::free_abelian(2);
  check_family(z2, [&]() {
    return z2->tuple({rng.range(-1000, 1000), rng.range(-1000, 1000)});
  });

  auto h = GroupContext::heisenberg();
  check_family(h, [&]() {
    return h->tuple({rng.range(-100, 100), rng.range(-100, 100), rng.range(-100, 100)});
  });

  auto m2 = GroupContext::matrix_group(2);
  Element gens[4] = {sanov_a(m2), m2->inv(sanov_a(m2)), sanov_b(m2),
                     m2->inv(sanov_b(m2))};
  check_family(m2, [&]() {
    Element e = m2->identity();
    int len = static_cast<int>(rng.below(6));
    for (int i = 0; i < len; ++i) e = m2->mul(e, gens[rng.below(4)]);
    return e;
  });

  auto c6 = GroupContext::finite_table(oracle::cyclic_table(6));
  check_family(c6, [&]() {
    return c6->table_element(static_cast<int>(rng.below(6)));
  });
}

TEST_CASE("table group inverse by brute scan") {
  auto c6 = GroupContext::finite_table(oracle::cyclic_table(6));
  auto table = oracle::cyclic_table(6);
  // oracle: scan row 2 for the identity
  int expected = -1;
  for (int j = 0; j < 6; ++j)
    if (table[2][j] == 0) expected = j;
  CHECK(expected == 4);
  CHECK(c6->inv(c6->table_element(2)) == c6->table_element(4));
}

TEST_CASE("table validation rejects corrupt tables") {
  auto bad_assoc = oracle::cyclic_table(4);
  bad_assoc[3][3] = 1;  // breaks associativity/latin structure
  CHECK_THROWS_AS(GroupContext::finite_table(bad_assoc), InputError);
  CHECK_THROWS_AS(GroupContext::finite_table({{1}}), InputError);  // no identity
  CHECK_THROWS_AS(GroupContext::finite_table({{0, 1}, {1, 2}}), InputError);
}

TEST_CASE("balls match the closed form and the enumeration oracle") {
  auto f2 = GroupContext::free_group(2);
  for (int r = 0; r <= 8; ++r) {
    ElementSet b = f2_ball(f2, r);
    CHECK(b.size() ==
          static_cast<std::size_t>(oracle::ball_size_closed_form(2, r)));
  }
  for (int r = 0; r <= 5; ++r)
    CHECK(f2_ball(f2, r).size() == oracle::ball_enumeration(2, r).size());

  auto f3 = GroupContext::free_group(3);
  ElementSet gens3(f3, f3->standard_generators());
  for (int r = 0; r <= 4; ++r)
    CHECK(make_ball(f3, gens3, r).size() ==
          static_cast<std::size_t>(oracle::ball_size_closed_form(3, r)));

  auto z = GroupContext::free_abelian(1);
  ElementSet zgens(z, z->standard_generators());
  CHECK(make_ball(z, zgens, 7).size() == 15);

  ElementSet b0 = make_ball(f2, ElementSet(f2, f2->standard_generators()), 0);
  CHECK(b0.size() == 1);
  CHECK(b0.contains(f2->identity()));

  CHECK_THROWS_AS(make_ball(f2, ElementSet(f2, f2->standard_generators()), -1),
                  InputError);
  ElementSet no_id(f2, {f2->word({1}), f2->word({-1})});
  CHECK_THROWS_AS(make_ball(f2, no_id, 2), InputError);
  ElementSet asym(f2, {f2->identity(), f2->word({1})});
  CHECK_THROWS_AS(make_ball(f2, asym, 2), InputError);
}

TEST_CASE("canonical comparison is a strict total order consistent with payloads") {
  auto f2 = GroupContext::free_group(2);
  Rng rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    Element a = f2->word(random_word(rng, 2, 8));
    Element b = f2->word(random_word(rng, 2, 8));
    int ab = f2->compare(a, b);
    int ba = f2->compare(b, a);
    CHECK(ab == -ba);
    CHECK((ab == 0) == (a == b));
    // lexicographic on expanded symbols
    auto sa = word_symbols(a);
    auto sb = word_symbols(b);
    bool less = std::lexicographical_compare(sa.begin(), sa.end(), sb.begin(), sb.end());
    CHECK((ab < 0) == less);
  }
}
