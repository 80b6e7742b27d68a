// One PASS/FAIL line per acceptance criterion. Exit status is the number
// of failing lines.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "thinspan/collapse.hpp"
#include "thinspan/io.hpp"
#include "thinspan/wrel.hpp"

using namespace thinspan;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS  " : "FAIL  ") << name << "  " << detail << std::endl;
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

// Runs `body`, turning an escaped exception into a failure line.
void criterion(const std::string& name, const std::function<void()>& body) {
  const auto t0 = Clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    report(name, false, std::string("exception: ") + e.what());
  }
  std::cerr << "  " << name << " took " << secs(seconds_since(t0)) << "\n";
}

struct Subject {
  CorpusEntry entry;
  TypingContext ctx;
  Term term;
  SimpleType type;
  std::optional<int> budget;
  bool normal;
};

std::vector<Subject> load_subjects(const std::vector<CorpusEntry>& entries) {
  std::vector<Subject> out;
  for (const auto& e : entries) {
    Subject s{e, parse_context(e.context), {}, {}, entry_budget(e, 4), false};
    s.term = elaborate(s.ctx, parse_term(e.term));
    s.type = typecheck(s.ctx, s.term);
    s.normal = is_beta_normal(s.term);
    out.push_back(std::move(s));
  }
  return out;
}

bool toplevel_redex(const Term& t) {
  return t.kind() == TermKind::App && spine(t).head.kind() == TermKind::Lam;
}

PointSpec point(const std::vector<std::pair<std::string, std::string>>& ctx, const char* type) {
  PointSpec p;
  for (const auto& [x, m] : ctx) p.ctx.emplace_back(x, parse_multiset(m));
  p.type = parse_mitype(type);
  return p;
}

// Every derivation of the subject at a point reachable from the canonical
// one by any morphism.
std::vector<Derivation> all_derivations(const Subject& s) {
  const auto rc = canonicalize_point(s.entry.point, s.ctx, s.type);
  WitnessEnumerator e(s.ctx, s.term, s.budget);
  std::vector<Derivation> out;
  for (const auto& theta : reachable_ctx(rc.ctx, Mode::Any))
    for (const auto& alpha : reachable(rc.type, Mode::Any))
      for (auto& d : e.at({theta, alpha})) out.push_back(std::move(d));
  return out;
}

bool has_multi_clause(const DerivationMorphism& p) {
  if (p.rule() == Rule::Var) return false;
  if (p.rule() == Rule::Lam) return has_multi_clause(p.body());
  if (p.copies().size() >= 2 && !p.sigma().is_identity()) return true;
  if (has_multi_clause(p.fn())) return true;
  for (const auto& c : p.copies())
    if (has_multi_clause(c)) return true;
  return false;
}

CorpusEntry entry(const char* name, const char* ctx, const char* term, const char* point) {
  return {name, ctx, term, read_point(point), {}, {}};
}

// β-normal subjects whose derivations have large automorphism groups.
std::vector<CorpusEntry> symmetric_entries() {
  return {
      entry("three-copies", "f:o->o, y:o", "f y",
            R"J({"ctx": {"f": "[[*,*,*]-o*]", "y": "[*,*,*]"}, "type": "*"})J"),
      entry("function-argument", "f:(o->o)->o, g:o->o", "f g",
            R"J({"ctx": {"f": "[[[*,*]-o*, [*,*]-o*]-o*]", "g": "[[*,*]-o*, [*,*]-o*]"}, "type": "*"})J"),
      entry("two-function-arguments", "f:(o->o)->(o->o)->o, g:o->o", "f g g",
            R"J({"ctx": {"f": "[[[*,*,*]-o*, [*,*,*]-o*]-o[[*,*,*]-o*]-o*]",
                         "g": "[[*,*,*]-o*, [*,*,*]-o*, [*,*,*]-o*]"}, "type": "*"})J"),
      entry("bound-duplication", "f:o->o->o", "\\x:o. f x x",
            R"J({"ctx": {"f": "[[*,*]-o[*,*]-o*]"}, "type": "[*,*,*,*]-o*"})J"),
      entry("identity-argument", "f:(o->o)->o", "f (\\x:o. x)",
            R"J({"ctx": {"f": "[[[*]-o*, [*]-o*, [*]-o*]-o*]"}, "type": "*"})J"),
      entry("three-arguments", "f:o->o->o->o, y:o", "f y y y",
            R"J({"ctx": {"f": "[[*,*]-o[*,*]-o[*,*]-o*]", "y": "[*,*,*,*,*,*]"}, "type": "*"})J"),
      entry("nested-pairs", "f:o->o->o, g:o->o, y:o", "f (g y) (g y)",
            R"J({"ctx": {"f": "[[*,*]-o[*,*]-o*]", "g": "[[*]-o*, [*]-o*, [*]-o*, [*]-o*]",
                         "y": "[*,*,*,*]"}, "type": "*"})J"),
      entry("mixed-elements", "f:o->o, g:o->o, y:o", "f (g y)",
            R"J({"ctx": {"f": "[[*,*,*]-o*]", "g": "[[]-o*, [*]-o*, [*]-o*]", "y": "[*,*]"}, "type": "*"})J"),
  };
}

}  // namespace

int main() {
  const auto entries = load_corpus(THINSPAN_CORPUS);
  const auto subjects = load_subjects(entries);
  auto with_symmetric = subjects;
  for (auto& s : load_subjects(symmetric_entries())) with_symmetric.push_back(std::move(s));

  criterion("double-application-weight", [&] {
    const auto t0 = Clock::now();
    const auto ctx = parse_context("f:o->o->o, x:o, y:o");
    const auto m = parse_term("f (f y x) (f x y)");
    const auto p = point({{"f", "[[*]-o[]-o*, []-o[*]-o*]"}, {"x", "[*]"}, {"y", "[]"}}, "*");
    const auto w = wrel_coefficient(ctx, m, p);
    const auto r = positive_witnesses(ctx, m, p, std::nullopt);
    const double dt = seconds_since(t0);
    report("double-application-weight", w == NatInf(2) && r.wit_plus == 2 && dt < 1.0,
           "wrel=" + w.str() + " wit_plus=" + r.wit_plus.str() + " in " + secs(dt));
  });

  criterion("nested-application-weight", [&] {
    const auto t0 = Clock::now();
    const auto ctx = parse_context("f:o->o, g:o->o, y:o");
    const auto p = point({{"f", "[[*,*]-o*]"}, {"g", "[[]-o*, [*]-o*]"}, {"y", "[*]"}}, "*");
    const auto w = wrel_coefficient(ctx, parse_term("f (g y)"), p);
    const auto r = positive_witnesses(ctx, parse_term("f (g y)"), p, std::nullopt);
    const auto ctx2 = parse_context("f:(o->o)->o, g:o->o");
    const auto p2 = point({{"f", "[[[]-o*, [*]-o*]-o*]"}, {"g", "[[]-o*, [*]-o*]"}}, "*");
    const auto w2 = wrel_coefficient(ctx2, parse_term("f (\\x:o. g x)"), p2);
    const auto r2 = positive_witnesses(ctx2, parse_term("f (\\x:o. g x)"), p2, std::nullopt);
    const double dt = seconds_since(t0);
    const bool ok = w == NatInf(2) && r.wit_plus == 2 && r.classes.size() == 1 &&
                    w2 == NatInf(1) && r2.wit_plus == 1 && dt < 1.0;
    report("nested-application-weight", ok,
           "wrel=" + w.str() + " wit_plus=" + r.wit_plus.str() + " classes=" +
               std::to_string(r.classes.size()) + "; abstracted: wrel=" + w2.str() +
               " wit_plus=" + r2.wit_plus.str() + " in " + secs(dt));
  });

  criterion("central-identity-corpus", [&] {
    const auto t0 = Clock::now();
    const auto results = verify_corpus(entries, 4);
    const double dt = seconds_since(t0);
    int redexes = 0, toplevel = 0, bad = 0;
    std::string first_bad;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      redexes += subjects[i].normal ? 0 : 1;
      toplevel += toplevel_redex(subjects[i].term) ? 1 : 0;
      const bool eq = r.report && NatInf(r.report->witnesses.wit_plus) == r.report->wrel &&
                      r.report->wrel == r.report->class_weight;
      if (!eq || !r.passed()) {
        ++bad;
        if (first_bad.empty()) first_bad = " first failure: " + r.name;
      }
    }
    report("central-identity-corpus",
           bad == 0 && entries.size() >= 13 && toplevel >= 1 && dt < 60.0,
           std::to_string(entries.size()) + " entries (" + std::to_string(redexes) + " with redexes, " +
               std::to_string(toplevel) + " toplevel), " + std::to_string(bad) + " failing, " + secs(dt) +
               first_bad);
  });

  criterion("degree-identity", [&] {
    int checked = 0, brute = 0, bad = 0;
    auto check = [&](const IType& a, const SimpleType& A) {
      const auto d = sym_degrees(a, A);
      bool ok = d.m == d.m_plus * d.m_minus;
      if (oracle::out_count(a) <= 20000) {
        const auto o = oracle::degrees(a);
        ok = ok && d.m == BigInt(o.m) && d.m_plus == BigInt(o.m_plus) && d.m_minus == BigInt(o.m_minus);
        ++brute;
      }
      ++checked;
      if (!ok) ++bad;
    };
    for (const auto& s : subjects) {
      const auto rc = canonicalize_point(s.entry.point, s.ctx, s.type);
      const auto dc = sym_degrees_ctx(rc.ctx);
      if (dc.m != dc.m_plus * dc.m_minus) ++bad;
      for (std::size_t i = 0; i < rc.ctx.size(); ++i) {
        const auto& seq = rc.ctx.seq(i);
        const auto ds = sym_degrees_seq(seq, rc.ctx[i].simple);
        if (ds.m != ds.m_plus * ds.m_minus) ++bad;
        for (const auto& e : seq) check(e, rc.ctx[i].simple);
      }
      check(rc.type, s.type);
      const auto r = positive_witnesses(s.ctx, s.term, s.entry.point, s.budget);
      std::function<void(const Derivation&)> walk = [&](const Derivation& d) {
        check(canonicalize(d.type()), typecheck(d.ctx().underlying(), d.term()));
        for (const auto& c : d.children()) walk(c);
      };
      for (const auto& w : r.witnesses) walk(w.derivation);
    }
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 200; ++i) {
      const auto A = oracle::random_simple(rng, 3);
      check(canonicalize(oracle::random_refinement(rng, A, 3)), A);
    }
    report("degree-identity", bad == 0,
           std::to_string(checked) + " objects (200 random), " + std::to_string(brute) +
               " also by exhaustive count, " + std::to_string(bad) + " failing");
  });

  criterion("polar-factorization", [&] {
    std::mt19937_64 rng(99);
    int sampled = 0, bad = 0, nontrivial = 0;
    while (sampled < 500) {
      const auto A = oracle::random_simple(rng, 3);
      const auto a = oracle::random_refinement(rng, A, 3);
      // exhaustive search over intermediate objects is quadratic in all_out
      if (oracle::out_count(a) > 300) continue;
      const auto phi = oracle::random_morphism(rng, a);
      const auto found = oracle::factorizations(phi, a);
      const auto f = polar_factorize(phi, A);
      const bool ok = found.size() == 1 && f.pos == found[0].first && f.neg == found[0].second &&
                      compose(f.neg, f.pos) == phi;
      if (!ok) ++bad;
      if (polarity(phi, A) == Polarity::Neither) ++nontrivial;
      ++sampled;
    }
    report("polar-factorization", bad == 0,
           std::to_string(sampled) + " morphisms (" + std::to_string(nontrivial) +
               " neither positive nor negative), " + std::to_string(bad) + " failing");
  });

  criterion("groupoid-laws", [&] {
    std::mt19937_64 rng(4242);
    int it_cases = 0, it_bad = 0;
    while (it_cases < 1000) {
      const auto A = oracle::random_simple(rng, 3);
      const auto a = oracle::random_refinement(rng, A, 3);
      if (oracle::out_count(a) > 5000) continue;
      const auto f = oracle::random_morphism(rng, a);
      const auto g = oracle::random_morphism(rng, tgt(f));
      const auto h = oracle::random_morphism(rng, tgt(g));
      const bool ok = compose(h, compose(g, f)) == compose(compose(h, g), f) &&
                      compose(f, identity(a)) == f && compose(identity(tgt(f)), f) == f &&
                      compose(inverse(f), f) == identity(a) &&
                      compose(f, inverse(f)) == identity(tgt(f)) &&
                      compose(inverse(g), inverse(h)) == inverse(compose(h, g));
      if (!ok) ++it_bad;
      ++it_cases;
    }

    int d_cases = 0, d_bad = 0, multi = 0;
    for (const auto& s : with_symmetric) {
      const auto ds = all_derivations(s);
      if (ds.size() > 40) continue;
      // morphisms out of each derivation, with their target index
      std::vector<std::vector<std::pair<std::size_t, DerivationMorphism>>> out(ds.size());
      std::vector<std::pair<std::size_t, std::size_t>> firsts;
      for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < ds.size(); ++j)
          for (auto& p : enumerate_derivation_morphisms(ds[i], ds[j])) {
            out[i].emplace_back(j, p);
            firsts.emplace_back(i, out[i].size() - 1);
          }
      auto pick = [&](std::size_t i) -> const std::pair<std::size_t, DerivationMorphism>& {
        return out[i][std::uniform_int_distribution<std::size_t>(0, out[i].size() - 1)(rng)];
      };
      // every first morphism, each followed by random continuations
      const std::size_t rounds = std::max<std::size_t>(1, 400 / std::max<std::size_t>(1, firsts.size()));
      for (const auto& [i, a] : firsts) {
        for (std::size_t r = 0; r < rounds; ++r) {
          const auto& [j, p1] = out[i][a];
          const auto& [k, p2] = pick(j);
          const auto& p3 = pick(k).second;
          const auto c21 = compose(p2, p1);
          const bool ok = src(c21) == ds[i] && tgt(c21) == ds[k] &&
                          compose(p3, c21) == compose(compose(p3, p2), p1) &&
                          compose(p1, identity_morphism(ds[i])) == p1 &&
                          compose(identity_morphism(ds[j]), p1) == p1 &&
                          compose(invert(p1), p1) == identity_morphism(ds[i]) &&
                          compose(p1, invert(p1)) == identity_morphism(ds[j]) &&
                          c21.xi() == compose(p2.xi(), p1.xi()) &&
                          c21.phi() == compose(p2.phi(), p1.phi()) &&
                          src(c21.xi(), s.ctx) == ds[i].ctx() && tgt(c21.xi(), s.ctx) == ds[k].ctx();
          if (!ok) ++d_bad;
          if (has_multi_clause(p1) || has_multi_clause(p2)) ++multi;
          ++d_cases;
        }
      }
    }
    report("groupoid-laws", it_bad == 0 && d_bad == 0 && it_cases >= 1000 && d_cases >= 1000 && multi > 0,
           std::to_string(it_cases) + " type-morphism cases, " + std::to_string(d_cases) +
               " derivation-morphism cases (" + std::to_string(multi) +
               " through permuted multi-copy applications), " + std::to_string(it_bad + d_bad) +
               " failing");
  });

  criterion("tilde-witness-identity", [&] {
    int bad = 0, brute = 0;
    for (const auto& s : subjects) {
      const auto r = positive_witnesses(s.ctx, s.term, s.entry.point, s.budget);
      // explicit triples (θ⁻, d, θ⁺), re-enumerated here
      BigInt triples = 0;
      for (const auto& w : r.witnesses) {
        triples += BigInt(enumerate_ctx_homs(r.point.ctx, w.derivation.ctx(), Mode::Negative).size()) *
                   BigInt(enumerate_homs(w.derivation.type(), r.point.type, Mode::Positive).size());
      }
      if (triples != r.tilde_wit_plus || r.esp_count != r.tilde_wit_plus) ++bad;
      if (s.normal) {
        const int len = oracle::max_domain_len(r.point);
        const auto o = oracle::positive_witnesses(s.ctx, s.term, s.entry.point, r.point, len, len);
        if (BigInt(o.esp) != r.tilde_wit_plus) ++bad;
        ++brute;
      }
    }
    report("tilde-witness-identity", bad == 0,
           std::to_string(subjects.size()) + " corpus points, " + std::to_string(brute) +
               " also by resource-term search, " + std::to_string(bad) + " failing");
  });

  criterion("esp-wrel-division", [&] {
    int bad = 0;
    for (const auto& s : subjects) {
      const auto r = positive_witnesses(s.ctx, s.term, s.entry.point, s.budget);
      const auto w = wrel_coefficient(s.ctx, s.term, s.entry.point);
      const BigInt d = r.ctx_degrees.m_minus * r.res_degrees.m_plus;
      if (w.is_infinite() || w.value() * d != r.esp_count) ++bad;
    }
    report("esp-wrel-division", bad == 0,
           std::to_string(subjects.size()) + " corpus points, " + std::to_string(bad) + " failing");
  });

  criterion("multiset-collapse-correspondence", [&] {
    int pairs = 0, bad = 0, entries_used = 0;
    for (const auto& s : with_symmetric) {
      if (!s.normal) continue;
      ++entries_used;
      const auto ds = all_derivations(s);
      std::vector<MRTerm> collapsed;
      for (const auto& d : ds) collapsed.push_back(multiset_collapse_term(derivation_to_resource(d)));
      for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < ds.size(); ++j) {
          if (symmetric(ds[i], ds[j]) != (collapsed[i] == collapsed[j])) ++bad;
          ++pairs;
        }
    }
    const char* ctx = "x:o->o->o, f:o->o, u:o";
    const auto c = parse_context(ctx);
    const auto m = elaborate(c, parse_term("(\\y:o. x y y) (f u)"));
    const auto zw = resource_to_derivation(c, m, parse_resource_term(
        "(\\y. x^{<*>-o<*>-o*} <y^{*}> <y^{*}>) <f^{<*>-o*} <u^{*}>,f^{<>-o*} <>>"));
    const auto wz = resource_to_derivation(c, m, parse_resource_term(
        "(\\y. x^{<*>-o<*>-o*} <y^{*}> <y^{*}>) <f^{<>-o*} <>,f^{<*>-o*} <u^{*}>>"));
    const bool counter =
        !symmetric(zw.derivation, wz.derivation) &&
        multiset_collapse_term(derivation_to_resource(zw.derivation)) ==
            multiset_collapse_term(derivation_to_resource(wz.derivation));
    report("multiset-collapse-correspondence", bad == 0 && counter && pairs > 0,
           std::to_string(pairs) + " ordered pairs over " + std::to_string(entries_used) +
               " normal subjects, " + std::to_string(bad) + " mismatches; redex pair " +
               (counter ? "non-symmetric with equal collapse" : "NOT separated"));
  });

  criterion("beta-invariance", [&] {
    int used = 0, bad = 0;
    std::string detail;
    for (const auto& s : subjects) {
      if (s.normal) continue;
      const int b = *s.budget;
      const auto at_b = positive_witnesses(s.ctx, s.term, s.entry.point, b).wit_plus;
      const auto at_b1 = positive_witnesses(s.ctx, s.term, s.entry.point, b + 1).wit_plus;
      const auto nf = positive_witnesses(s.ctx, beta_normalize(s.term), s.entry.point, std::nullopt).wit_plus;
      if (at_b != at_b1 || at_b != nf) {
        ++bad;
        detail += " " + s.entry.name;
      }
      ++used;
    }
    report("beta-invariance", bad == 0 && used >= 10,
           std::to_string(used) + " redex entries at b and b+1 against the normal form, " +
               std::to_string(bad) + " failing" + detail);
  });

  return failures;
}
