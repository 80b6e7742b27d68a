#include <doctest.h>

#include "thinspan/collapse.hpp"
#include "thinspan/error.hpp"
#include "thinspan/wrel.hpp"

using namespace thinspan;

namespace {

PointSpec point(const std::vector<std::pair<std::string, std::string>>& ctx, const char* type) {
  PointSpec p;
  for (const auto& [x, m] : ctx) p.ctx.emplace_back(x, parse_multiset(m));
  p.type = parse_mitype(type);
  return p;
}

}  // namespace

TEST_SUITE("collapse") {
  TEST_CASE("nested application has one class of two witnesses") {
    const auto ctx = parse_context("f:o->o, g:o->o, y:o");
    const auto p = point({{"f", "[[*,*]-o*]"}, {"g", "[[]-o*, [*]-o*]"}, {"y", "[*]"}}, "*");
    const auto r = positive_witnesses(ctx, parse_term("f (g y)"), p, std::nullopt);
    CHECK(r.wit_plus == 2);
    REQUIRE(r.classes.size() == 1);
    CHECK(r.classes[0].size == 2);
    CHECK(r.classes[0].contribution == 2);
    CHECK(r.ctx_degrees.m_plus == 2);
    CHECK(r.ctx_degrees.m_minus == 1);
    CHECK(weight_by_classes(r) == NatInf(2));
    CHECK(class_witness_count_check(r));
    CHECK(esp_wrel_check(r, NatInf(2)));
    CHECK_FALSE(esp_wrel_check(r, NatInf(3)));
    for (const auto& w : r.witnesses) {
      CHECK(in_mode(w.theta_minus, Mode::Negative));
      CHECK(in_mode(w.theta_plus, Mode::Positive));
      CHECK(tgt(w.theta_minus, ctx) == w.derivation.ctx());
      CHECK(src(w.theta_plus) == w.derivation.type());
    }
  }

  TEST_CASE("serial and parallel enumeration give the same report") {
    const auto ctx = parse_context("h:o->o->o, y:o");
    const auto m = parse_term("(\\f:o->o. \\x:o. f (f x)) (\\z:o. h z z) y");
    const auto p = point({{"h", "[[*]-o[*]-o*, [*]-o[*]-o*, [*]-o[*]-o*]"}, {"y", "[*,*,*,*]"}}, "*");
    const auto a = positive_witnesses(ctx, m, p, 3, Exec::Serial);
    const auto b = positive_witnesses(ctx, m, p, 3, Exec::Parallel);
    CHECK(a.wit_plus == b.wit_plus);
    CHECK(a.esp_count == b.esp_count);
    REQUIRE(a.witnesses.size() == b.witnesses.size());
    for (std::size_t i = 0; i < a.witnesses.size(); ++i)
      CHECK(a.witnesses[i].derivation == b.witnesses[i].derivation);
  }

  TEST_CASE("a redex needs a budget") {
    const auto ctx = parse_context("y:o");
    CHECK_THROWS_AS(positive_witnesses(ctx, parse_term("(\\x:o. x) y"), point({{"y", "[*]"}}, "*"),
                                       std::nullopt),
                    BudgetRequired);
  }

  TEST_CASE("every identity holds on a duplicating redex") {
    const auto ctx = parse_context("f:o->o->o, y:o");
    const auto v = verify_identities(ctx, parse_term("(\\x:o. f x x) y"),
                                     point({{"f", "[[*]-o[*]-o*]"}, {"y", "[*,*]"}}, "*"), 3);
    CHECK(v.all_passed());
    CHECK(v.wrel == NatInf(1));
    CHECK(v.witnesses.esp_count == 2);
    CHECK(v.witnesses.tilde_wit_plus == 2);
    bool saw_stabilization = false;
    for (const auto& c : v.checks) saw_stabilization |= c.name == "stabilization";
    CHECK(saw_stabilization);
  }

  TEST_CASE("witnesses of a negatively symmetric point") {
    // y:[*,*] has two orderings; the witness is unique but esp counts both
    const auto ctx = parse_context("f:o->o->o, y:o");
    const auto r = positive_witnesses(ctx, parse_term("f y y"),
                                      point({{"f", "[[*]-o[*]-o*]"}, {"y", "[*,*]"}}, "*"), std::nullopt);
    CHECK(r.wit_plus == 1);
    CHECK(r.ctx_degrees.m_minus == 2);
    CHECK(r.esp_count == 2);
  }

  TEST_CASE("a forged report fails exact division") {
    const auto ctx = parse_context("f:o->o->o, y:o");
    auto r = positive_witnesses(ctx, parse_term("f y y"),
                                point({{"f", "[[*]-o[*]-o*]"}, {"y", "[*,*]"}}, "*"), std::nullopt);
    r.esp_count = 3;
    CHECK_THROWS_AS(esp_wrel_check(r, NatInf(1)), InvariantViolation);
    r.classes.push_back({1, 2, Rational(1, 2)});
    CHECK_THROWS_AS(weight_by_classes(r), InvariantViolation);
  }
}
