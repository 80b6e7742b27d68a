#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "thinspan/error.hpp"
#include "thinspan/rigidtypes.hpp"

using namespace thinspan;

TEST_SUITE("rigidtypes") {
  TEST_CASE("parse and print rigid and multiset types") {
    const auto a = parse_itype("<*,<>-o*>-o*");
    REQUIRE(a.is_arrow());
    CHECK(a.domain().size() == 2);
    CHECK(to_string(a) == "<*,<>-o*>-o*");
    CHECK(to_string(parse_itype("[*]-o[]-o*")) == "<*>-o<>-o*");
    const auto m = parse_mitype("[<>-o*, *]-o*");
    CHECK(to_string(m) == "[*,[]-o*]-o*");
    CHECK(m == parse_mitype("[*, []-o*]-o*"));
    CHECK_THROWS_AS(parse_itype("<*"), SyntaxError);
  }

  TEST_CASE("star precedes arrows, then domain length, domain, codomain") {
    const auto star = IType::star();
    const auto e = parse_itype("<>-o*");
    const auto one = parse_itype("<*>-o*");
    const auto two = parse_itype("<*,*>-o*");
    const auto nested = parse_itype("<<>-o*>-o*");
    CHECK(compare_it(star, e) < 0);
    CHECK(compare_it(e, one) < 0);
    CHECK(compare_it(one, two) < 0);
    CHECK(compare_it(one, nested) < 0);
    CHECK(compare_it(parse_itype("<*>-o<>-o*"), parse_itype("<*>-o<*>-o*")) < 0);
    CHECK(compare_it(one, one) == 0);
  }

  TEST_CASE("refinement") {
    const auto oo = parse_simple_type("o -> o");
    CHECK(refines(parse_itype("<*,*>-o*"), oo));
    CHECK_FALSE(refines(parse_itype("*"), oo));
    CHECK_FALSE(refines(parse_itype("<<>-o*>-o*"), oo));
    CHECK(refines(parse_mitype("[[]-o*]-o*"), parse_simple_type("(o->o)->o")));
  }

  TEST_CASE("collapse, canonical representative and rigidification agree") {
    CHECK_FALSE(refines(parse_itype("<<*>-o*, <>-o*, *>-o*"), parse_simple_type("(o->o)->o")));
    const auto b = parse_itype("<<>-o*, <*>-o*>-o*");
    const auto c = parse_itype("<<*>-o*, <>-o*>-o*");
    CHECK(collapse_multiset(b) == collapse_multiset(c));
    CHECK(canonicalize(b) == canonicalize(c));
    CHECK(canonicalize(c) == b);
    CHECK(rigidify(collapse_multiset(c)) == canonicalize(c));
  }

  TEST_CASE("canonicalization is idempotent and collapse-invariant on random types") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
      const auto A = oracle::random_simple(rng, 3);
      const auto t = oracle::random_refinement(rng, A, 3);
      REQUIRE(refines(t, A));
      const auto c = canonicalize(t);
      CHECK(canonicalize(c) == c);
      CHECK(collapse_multiset(c) == collapse_multiset(t));
      CHECK(rigidify(collapse_multiset(t)) == c);
      CHECK(parse_itype(to_string(t)) == t);
    }
  }

  TEST_CASE("presentations of a multiset type are its collapse preimage") {
    const auto m = parse_mitype("[*,[]-o*]-o*");
    const auto ps = oracle::presentations(m);
    CHECK(ps.size() == 2);
    for (const auto& p : ps) CHECK(collapse_multiset(p) == m);
  }

  TEST_CASE("bounded refinements") {
    const auto oo = parse_simple_type("o -> o");
    CHECK(bounded_refinements(oo, 2).size() == 3);
    CHECK(bounded_refinements(parse_simple_type("o"), 5).size() == 1);
    for (const auto& t : bounded_refinements(parse_simple_type("(o->o)->o"), 2))
      CHECK(refines(t, parse_simple_type("(o->o)->o")));
  }

  TEST_CASE("points canonicalize against the judgement") {
    const auto ctx = parse_context("f:o->o, y:o");
    PointSpec p{{{"f", parse_multiset("[[*]-o*, []-o*]")}, {"y", parse_multiset("[*]")}},
                parse_mitype("*")};
    const auto r = canonicalize_point(p, ctx, SimpleType::base());
    CHECK(to_string(r.ctx) == "f:<<>-o*,<*>-o*>, y:<*>");
    CHECK(collapse_point(r) == p);
    PointSpec missing{{{"f", parse_multiset("[]")}}, parse_mitype("*")};
    CHECK(canonicalize_point(missing, ctx, SimpleType::base()).ctx.seq(1).empty());
    PointSpec bad{{{"y", parse_multiset("[[]-o*]")}}, parse_mitype("*")};
    CHECK_THROWS_AS(canonicalize_point(bad, ctx, SimpleType::base()), RefinementError);
    PointSpec unknown{{{"z", parse_multiset("[*]")}}, parse_mitype("*")};
    CHECK_THROWS(canonicalize_point(unknown, ctx, SimpleType::base()));
  }

  TEST_CASE("context concatenation is per variable") {
    const auto ctx = parse_context("x:o, y:o");
    ResourceContext a({{"x", {IType::star()}, SimpleType::base()}, {"y", {}, SimpleType::base()}});
    ResourceContext b({{"x", {IType::star()}, SimpleType::base()},
                       {"y", {IType::star()}, SimpleType::base()}});
    const auto c = concat_ctx(a, b);
    CHECK(c.seq(0).size() == 2);
    CHECK(c.seq(1).size() == 1);
    CHECK(c.refines(ctx));
    ResourceContext other({{"z", {}, SimpleType::base()}});
    CHECK_THROWS_AS(concat_ctx(a, other), RefinementError);
  }
}
