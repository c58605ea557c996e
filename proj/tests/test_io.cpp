#include <doctest.h>

#include <nlohmann/json.hpp>

#include "apxgroups/io.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace apx;
using namespace testing_support;

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("1/10") == Rational(1, 10));
  CHECK(parse_rational("-7/3") == Rational(-7, 3));
  CHECK(parse_rational("42") == Rational(42));
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("-2.25") == Rational(-9, 4));
  CHECK(parse_rational("4/2") == Rational(2));
  CHECK(format_rational(Rational(161, 17)) == "161/17");
  CHECK(format_rational(Rational(2)) == "2");
  CHECK(format_rational(parse_rational("-6/4")) == "-3/2");
  CHECK(decimal_approx(Rational(205, 201), 4) == "1.0199");
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("x"), InputError);
  CHECK_THROWS_AS(parse_rational(""), InputError);
  CHECK(rational_pow(Rational(11, 10), 0) == Rational(1));
  CHECK(rational_pow(Rational(3, 2), 5) == Rational(243, 32));
}

TEST_CASE("group and element JSON round trips") {
  std::vector<ContextPtr> ctxs = {
      GroupContext::free_group(2), GroupContext::free_abelian(3),
      GroupContext::heisenberg(), GroupContext::matrix_group(2),
      GroupContext::finite_table(oracle::dihedral_table(3))};
  for (const ContextPtr& ctx : ctxs) {
    ContextPtr back = group_from_json(group_to_json(*ctx));
    CHECK(ctx->same_group(*back));
  }

  auto f2 = GroupContext::free_group(2);
  // parsing canonicalizes unreduced words
  Element w = element_from_json(*f2, Json::parse("[1,-1,2]"));
  CHECK(w == f2->word({2}));
  CHECK(element_to_json(*f2, w) == Json::parse("[2]"));

  auto m2 = GroupContext::matrix_group(2);
  Element m = element_from_json(*m2, Json::parse(R"(["4/2","0","0","1"])"));
  CHECK(element_to_json(*m2, m) == Json::parse(R"(["2","0","0","1"])"));
  CHECK_THROWS_AS(element_from_json(*m2, Json::parse(R"(["1","0","0","0"])")),
                  InputError);  // singular

  auto z = GroupContext::free_abelian(2);
  CHECK_THROWS_AS(element_from_json(*z, Json::parse("[1]")), InputError);
}

TEST_CASE("set files round trip in canonical order") {
  auto f2 = GroupContext::free_group(2);
  ElementSet b2 = f2_ball(f2, 2);
  Json j = set_to_json(b2);
  ElementSet back = set_from_json(j);
  CHECK(back.elements() == b2.elements());
  CHECK(dump_json(set_to_json(back)) == dump_json(j));
  CHECK(!verify_document(j).has_value());

  // unordered input parses but is flagged by verify as non-canonical
  Json shuffled = j;
  std::swap(shuffled["elements"][0], shuffled["elements"][5]);
  CHECK(set_from_json(shuffled).elements() == b2.elements());
  CHECK(verify_document(shuffled).has_value());
}

TEST_CASE("witness documents verify and tampering is caught") {
  auto z = GroupContext::free_abelian(1);
  ElementSet a = interval_set(z, -10, 10);
  auto w = find_witness(a, Rational(3));
  REQUIRE(w.has_value());
  Json j = approx_witness_to_json(*w);
  CHECK(!verify_document(j).has_value());

  ApproxWitness back = approx_witness_from_json(j);
  CHECK(back.x.elements() == w->x.elements());
  CHECK(back.k == w->k);

  // remove one element: symmetry breaks first
  Json bad_asym = j;
  bad_asym["witness"].erase(0);
  auto failure_asym = verify_document(bad_asym);
  REQUIRE(failure_asym.has_value());
  CHECK(failure_asym->find("symmetric") != std::string::npos);

  // empty the witness: the re-check names the first uncovered product
  Json bad = j;
  bad["witness"] = Json::array();
  auto failure = verify_document(bad);
  REQUIRE(failure.has_value());
  CHECK(failure->find("not covered") != std::string::npos);
  CHECK(failure->find("[-20]") != std::string::npos);

  Json bad2 = j;
  bad2["K"] = "1";
  CHECK(verify_document(bad2).has_value());
}

TEST_CASE("cover and control documents verify") {
  auto z = GroupContext::free_abelian(1);
  CoverCertificate c = ruzsa_cover(interval_set(z, -3, 3), interval_set(z, -1, 1));
  Json cj = cover_certificate_to_json(c);
  CHECK(!verify_document(cj).has_value());
  Json bad = cj;
  bad["x"] = Json::array({Json::array({0})});  // single center cannot cover
  CHECK(verify_document(bad).has_value());

  ElementSet a = interval_set(z, -20, 20);
  ElementSet b = interval_set(z, -10, 10);
  ElementSet x(z, {z->tuple({-10}), z->tuple({0}), z->tuple({10})});
  ControlWitness w{a, b, x, Rational(3)};
  REQUIRE(verify_control(a, w));
  Json wj = control_witness_to_json(w);
  CHECK(!verify_document(wj).has_value());
  Json wbad = wj;
  wbad["K"] = "2";
  CHECK(verify_document(wbad).has_value());
}

TEST_CASE("report documents verify by recomputation") {
  auto f2 = GroupContext::free_group(2);
  ElementSet b2 = f2_ball(f2, 2);
  ElementSet x(f2, f2->standard_generators());

  Json dj = doubling_report_json(b2);
  CHECK(dj["ratio"] == "161/17");
  CHECK(!verify_document(dj).has_value());

  Json ej = expansion_report_json(b2, x, "standard-generators");
  CHECK(ej["ratio"] == "53/17");
  CHECK(ej["von_neumann_pass"] == true);
  CHECK(!verify_document(ej).has_value());
  Json ebad = ej;
  ebad["ratio"] = "3";
  CHECK(verify_document(ebad).has_value());

  auto z = GroupContext::free_abelian(1);
  ElementSet a = interval_set(z, -100, 100);
  ElementSet core = interval_set(z, -1, 1);
  NestingResult r = pigeonhole_nesting(a, core, 2, Rational(1, 10), Rational(2));
  Json nj = nesting_report_json(a, core, r, Rational(2));
  CHECK(nj["j"] == 0);
  CHECK(nj["k"] == 30);
  CHECK(!verify_document(nj).has_value());

  SetSampler sampler = SetSampler::parse(z, "intervals:20", 0);
  Rational kp = kappa_probe(z, core, sampler, 20);
  Json kj = kappa_report_json(z, core, sampler, 20, kp);
  CHECK(!verify_document(kj).has_value());

  auto m2 = GroupContext::matrix_group(2);
  ElementSet sanov = symmetrize(ElementSet(m2, {sanov_a(m2), sanov_b(m2)}));
  auto fp = free_pair_search(sanov, 1, 8);
  Json fj = free_pair_report_json(sanov, 1, 8, fp);
  CHECK(fj["found"] == true);
  CHECK(!verify_document(fj).has_value());
  Json fbad = fj;
  fbad["certificate"]["t"] = "7";
  CHECK(verify_document(fbad).has_value());
}

TEST_CASE("verify_document rejects unknown types") {
  CHECK(verify_document(Json{{"type", "mystery"}}).has_value());
  CHECK(verify_document(Json::array()).has_value());
}
