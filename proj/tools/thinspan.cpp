// thinspan: witnesses, weights and collapse identities for simply-typed terms.
//
// Exit status: 0 ok, 1 type or refinement error, 2 usage or syntax error,
// 3 budget required but absent, 4 a verified identity failed.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "thinspan/collapse.hpp"
#include "thinspan/io.hpp"
#include "thinspan/wrel.hpp"

using namespace thinspan;

namespace {

constexpr int kOk = 0;
constexpr int kTypeError = 1;
constexpr int kUsage = 2;
constexpr int kNoBudget = 3;
constexpr int kFailed = 4;
constexpr int kDefaultBudget = 4;

struct Subject {
  TypingContext ctx;
  Term term;
  SimpleType type;
};

Subject load_subject(const std::string& ctx_text, const std::string& term_text,
                     const std::string& type_text) {
  Subject s;
  s.ctx = parse_context(ctx_text);
  const Term raw = parse_term(term_text);
  if (type_text.empty()) {
    s.term = elaborate(s.ctx, raw);
  } else {
    s.term = elaborate(s.ctx, raw, parse_simple_type(type_text));
  }
  s.type = typecheck(s.ctx, s.term);
  return s;
}

std::optional<int> env_budget() {
  const char* v = std::getenv("THINSPAN_BUDGET");
  if (!v || !*v) return std::nullopt;
  try {
    return std::stoi(v);
  } catch (const std::exception&) {
    throw CLI::ValidationError("THINSPAN_BUDGET", std::string("not an integer: ") + v);
  }
}

std::optional<int> resolve_budget(int flag) {
  if (flag >= 0) return flag;
  return env_budget();
}

void print_report(const PositiveWitnessReport& r) {
  std::cout << "subject:   " << to_string(r.ctx) << " |- " << to_string(r.term) << " : "
            << to_string(r.type) << "\n";
  std::cout << "point:     " << to_string(r.point.ctx) << " |- " << to_string(r.point.type) << "\n";
  std::cout << "enumeration: " << to_string(r.completeness) << "\n";
  std::cout << "witnesses (" << r.witnesses.size() << "):\n";
  for (const auto& w : r.witnesses) {
    std::cout << "  " << to_string(derivation_to_resource(w.derivation)) << "\n";
    std::cout << "    at " << to_string(w.derivation.ctx()) << " |- "
              << to_string(w.derivation.type()) << "\n";
    std::cout << "    theta- " << to_string(w.theta_minus) << "  theta+ " << to_string(w.theta_plus)
              << "\n";
  }
  std::cout << "classes (" << r.classes.size() << "):\n";
  for (const auto& c : r.classes)
    std::cout << "  size " << c.size << ", m_class " << c.m_class << ", contribution "
              << c.contribution << "\n";
  auto deg = [](const Degrees& d) {
    return "m=" + d.m.str() + " m+=" + d.m_plus.str() + " m-=" + d.m_minus.str();
  };
  std::cout << "degrees:   ctx " << deg(r.ctx_degrees) << "; result " << deg(r.res_degrees) << "\n";
  std::cout << "wit_plus:  " << r.wit_plus << "\n";
  std::cout << "tilde_wit: " << r.tilde_wit_plus << "\n";
  std::cout << "esp_count: " << r.esp_count << "\n";
}

void print_checks(const std::string& name, const std::vector<CheckOutcome>& checks) {
  for (const auto& c : checks)
    if (!c.passed)
      std::cout << "  " << name << ": " << c.name << " FAILED"
                << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rigid intersection-type witnesses and weighted relational coefficients"};
  app.require_subcommand(1);

  std::string ctx_text, term_text, type_text, point_text, corpus_path;
  int budget_flag = -1;
  bool json = false;

  auto add_subject = [&](CLI::App* sub, bool required) {
    auto* c = sub->add_option("--ctx", ctx_text, "typing context, e.g. \"f:o->o, x:o\"");
    auto* t = sub->add_option("--term", term_text, "λ-term; \\x:T. M for abstraction");
    sub->add_option("--type", type_text, "simple type of the term, for unannotated binders");
    if (required) {
      c->required();
      t->required();
    }
  };

  auto* check = app.add_subcommand("check", "print the simple type of a term");
  add_subject(check, true);

  auto* witnesses = app.add_subcommand("witnesses", "positive witnesses at a point");
  add_subject(witnesses, true);
  witnesses->add_option("--point", point_text, "point as JSON or a JSON file")->required();
  witnesses->add_option("--budget", budget_flag, "sequence-length budget for terms with redexes")
      ->check(CLI::NonNegativeNumber);
  witnesses->add_flag("--json", json, "emit the report as JSON");

  auto* weight = app.add_subcommand("weight", "weighted relational coefficient at a point");
  add_subject(weight, true);
  weight->add_option("--point", point_text, "point as JSON or a JSON file")->required();
  weight->add_flag("--json", json, "emit JSON");

  auto* verify = app.add_subcommand("verify", "check every collapse identity");
  add_subject(verify, false);
  verify->add_option("--point", point_text, "point as JSON or a JSON file");
  verify->add_option("--corpus", corpus_path, "JSON array of corpus entries");
  verify->add_option("--budget", budget_flag, "budget for entries with redexes (default 4)")
      ->check(CLI::NonNegativeNumber);
  verify->add_flag("--json", json, "emit per-entry reports as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*check) {
      const Subject s = load_subject(ctx_text, term_text, type_text);
      std::cout << to_string(s.type) << "\n";
      return kOk;
    }

    if (*witnesses) {
      const Subject s = load_subject(ctx_text, term_text, type_text);
      const PointSpec p = read_point(point_text);
      const auto report = positive_witnesses(s.ctx, s.term, p, resolve_budget(budget_flag));
      if (json)
        std::cout << report_to_json(report).dump(2) << "\n";
      else
        print_report(report);
      return kOk;
    }

    if (*weight) {
      const Subject s = load_subject(ctx_text, term_text, type_text);
      const PointSpec p = read_point(point_text);
      const NatInf w = wrel_coefficient(s.ctx, s.term, p);
      if (json)
        std::cout << Json{{"point", point_to_json(p)}, {"wrel", natinf_to_json(w)}}.dump(2) << "\n";
      else
        std::cout << w.str() << "\n";
      return kOk;
    }

    if (*verify) {
      const int fallback = resolve_budget(budget_flag).value_or(kDefaultBudget);
      std::vector<CorpusEntry> entries;
      if (!corpus_path.empty()) {
        if (!term_text.empty() || !point_text.empty()) {
          std::cerr << "verify: use either --corpus or --term/--point, not both\n";
          return kUsage;
        }
        entries = load_corpus(corpus_path);
      } else {
        if (term_text.empty() || point_text.empty()) {
          std::cerr << "verify: --corpus or --term with --point is required\n";
          return kUsage;
        }
        const Subject s = load_subject(ctx_text, term_text, type_text);
        entries.push_back({"command-line", ctx_text, to_string(s.term), read_point(point_text), {},
                           budget_flag >= 0 ? std::optional<int>(budget_flag) : std::nullopt});
      }
      const auto results = verify_corpus(entries, fallback);
      bool all = true;
      if (json) {
        Json out = Json::array();
        for (const auto& r : results) out.push_back(corpus_result_to_json(r));
        std::cout << out.dump(2) << "\n";
      }
      std::ostream& table = json ? std::cerr : std::cout;
      for (const auto& r : results) {
        all = all && r.passed();
        table << (r.passed() ? "PASS  " : "FAIL  ") << r.name;
        if (r.report)
          table << "  wit+=" << r.report->witnesses.wit_plus << " wrel=" << r.report->wrel.str()
                << " classes=" << r.report->witnesses.classes.size()
                << " esp=" << r.report->witnesses.esp_count;
        table << "\n";
        if (!r.error.empty()) table << "  " << r.name << ": error: " << r.error << "\n";
        if (!json) print_checks(r.name, r.checks);
      }
      table << results.size() << " entries, " << (all ? "all passed" : "failures present") << "\n";
      return all ? kOk : kFailed;
    }
  } catch (const BudgetRequired& e) {
    std::cerr << "error: " << e.what() << " (pass --budget N or set THINSPAN_BUDGET)\n";
    return kNoBudget;
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kUsage;
  } catch (const TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return kTypeError;
  } catch (const RefinementError& e) {
    std::cerr << "refinement error: " << e.what() << "\n";
    return kTypeError;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const InvariantViolation& e) {
    std::cerr << "identity failure: " << e.what() << "\n";
    return kFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
