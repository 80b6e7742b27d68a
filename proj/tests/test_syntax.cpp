#include <doctest.h>

#include "thinspan/error.hpp"
#include "thinspan/syntax.hpp"

using namespace thinspan;

TEST_SUITE("syntax") {
  TEST_CASE("simple types parse right-associatively and print back") {
    const auto t = parse_simple_type("o -> o -> o");
    CHECK(t.arity() == 2);
    CHECK(t.domain().is_base());
    CHECK(t.codomain() == parse_simple_type("o->o"));
    CHECK(to_string(t) == "o -> o -> o");
    CHECK(to_string(parse_simple_type("(o -> o) -> o")) == "(o -> o) -> o");
    CHECK_THROWS_AS(parse_simple_type("o ->"), SyntaxError);
  }

  TEST_CASE("contexts keep order and reject duplicates") {
    const auto c = parse_context("f:o->o, x:o");
    REQUIRE(c.size() == 2);
    CHECK(c[0].name == "f");
    CHECK(*c.index_of("x") == 1);
    CHECK(c.lookup("y") == nullptr);
    CHECK(parse_context("").size() == 0);
    CHECK_THROWS(parse_context("x:o, x:o"));
  }

  TEST_CASE("application is left-associative and abstraction extends right") {
    const auto t = parse_term("\\x:o. f x y");
    REQUIRE(t.kind() == TermKind::Lam);
    const auto sp = spine(t.body());
    CHECK(sp.head.name() == "f");
    CHECK(sp.args.size() == 2);
    CHECK(to_string(parse_term("(\\x:o. x) y")) == "(\\x:o. x) y");
    CHECK_THROWS_AS(parse_term("f (x"), SyntaxError);
  }

  TEST_CASE("binders are renamed apart from each other and from free variables") {
    const auto t = parse_term("\\x:o. (\\x:o. x) x");
    REQUIRE(t.kind() == TermKind::Lam);
    const auto& inner = t.body().fn();
    CHECK(inner.binder() != t.binder());
    CHECK(alpha_equivalent(t, parse_term("\\a:o. (\\b:o. b) a")));
    CHECK_FALSE(alpha_equivalent(t, parse_term("\\a:o. (\\b:o. a) a")));
    const auto u = rename_apart(parse_term("\\y:o. y"), {"y"});
    CHECK(u.binder() != "y");
    CHECK(free_variables(parse_term("\\x:o. f x z")) == std::set<std::string>{"f", "z"});
  }

  TEST_CASE("typing") {
    const auto ctx = parse_context("f:o->o->o, x:o, y:o");
    CHECK(typecheck(ctx, parse_term("f (f y x) (f x y)")) == SimpleType::base());
    CHECK(to_string(typecheck(ctx, parse_term("\\z:o. f z"))) == "o -> o -> o");
    CHECK_THROWS_AS(typecheck(ctx, parse_term("x y")), TypeError);
    CHECK_THROWS_AS(typecheck(ctx, parse_term("f (\\z:o. z)")), TypeError);
    CHECK_THROWS_AS(typecheck(ctx, parse_term("w")), TypeError);
  }

  TEST_CASE("elaboration annotates binders from the expected type or a redex argument") {
    const auto ctx = parse_context("y:o, f:o->o");
    const auto t = elaborate(ctx, parse_term("\\x. f x"), parse_simple_type("o -> o"));
    CHECK(t.annotation() == SimpleType::base());
    const auto r = elaborate(ctx, parse_term("(\\x. f x) y"));
    CHECK(r.fn().annotation() == SimpleType::base());
    CHECK_THROWS_AS(elaborate(ctx, parse_term("\\x. x")), TypeError);
  }

  TEST_CASE("normal-order β-normalization") {
    const auto ctx = parse_context("g:o->o, y:o");
    const auto church2 = parse_term("(\\f:o->o. \\x:o. f (f x)) g y");
    CHECK_FALSE(is_beta_normal(church2));
    const auto nf = beta_normalize(church2);
    CHECK(is_beta_normal(nf));
    CHECK(alpha_equivalent(nf, parse_term("g (g y)")));
    CHECK(typecheck(ctx, nf) == SimpleType::base());
    // a discarded argument is never reduced
    CHECK(alpha_equivalent(beta_normalize(parse_term("(\\x:o. \\z:o. z) ((\\w:o. w) y)")),
                           parse_term("\\z:o. z")));
  }

  TEST_CASE("substitution avoids capture") {
    const auto t = parse_term("\\y:o. f x y");
    const auto s = substitute(t, "x", Term::var("y"));
    REQUIRE(s.kind() == TermKind::Lam);
    CHECK(s.binder() != "y");
    CHECK(free_variables(s).count("y") == 1);
  }
}
