#include "thinspan/io.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "thinspan/wrel.hpp"

namespace thinspan {

PointSpec point_from_json(const Json& j) {
  if (!j.is_object()) throw Error("point must be a JSON object");
  PointSpec p;
  if (j.contains("ctx")) {
    const Json& c = j.at("ctx");
    if (!c.is_object()) throw Error("point ctx must be an object");
    for (const auto& [name, v] : c.items()) {
      if (!v.is_string()) throw Error("point ctx entry '" + name + "' must be a string");
      p.ctx.emplace_back(name, parse_multiset(v.get<std::string>()));
    }
  }
  if (!j.contains("type") || !j.at("type").is_string()) throw Error("point needs a string 'type'");
  p.type = parse_mitype(j.at("type").get<std::string>());
  return p;
}

Json point_to_json(const PointSpec& p) {
  Json ctx = Json::object();
  for (const auto& [name, mu] : p.ctx) ctx[name] = to_string(mu);
  return Json{{"ctx", ctx}, {"type", to_string(p.type)}};
}

PointSpec read_point(const std::string& text) {
  std::string body = text;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') {
    std::ifstream in(text);
    if (!in) throw Error("cannot read point file " + text);
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("malformed point JSON: ") + e.what());
  }
  return point_from_json(j);
}

Json big_to_json(const BigInt& n) {
  if (n >= 0 && n <= BigInt(std::numeric_limits<std::uint64_t>::max()))
    return Json(static_cast<std::uint64_t>(n));
  return Json(n.str());
}

Json natinf_to_json(const NatInf& n) {
  if (n.is_infinite()) return Json("inf");
  return big_to_json(n.value());
}

namespace {

Json degrees_json(const Degrees& d) {
  return Json{{"m", big_to_json(d.m)}, {"mp", big_to_json(d.m_plus)}, {"mm", big_to_json(d.m_minus)}};
}

}  // namespace

Json report_to_json(const PositiveWitnessReport& r) {
  Json ws = Json::array();
  for (const auto& w : r.witnesses)
    ws.push_back(Json{{"ctx", to_string(w.derivation.ctx())},
                      {"type", to_string(w.derivation.type())},
                      {"term", to_string(derivation_to_resource(w.derivation))},
                      {"theta_minus", to_string(w.theta_minus)},
                      {"theta_plus", to_string(w.theta_plus)}});
  Json classes = Json::array();
  for (const auto& c : r.classes)
    classes.push_back(Json{{"size", c.size},
                           {"m_class", big_to_json(c.m_class)},
                           {"contribution", c.contribution.str()}});
  return Json{
      {"subject", {{"ctx", to_string(r.ctx)}, {"term", to_string(r.term)}, {"type", to_string(r.type)}}},
      {"point", point_to_json(collapse_point(r.point))},
      {"canonical", {{"ctx", to_string(r.point.ctx)}, {"type", to_string(r.point.type)}}},
      {"completeness", to_string(r.completeness)},
      {"orientation", "theta_minus: canonical ctx -> witness ctx (negative); "
                      "theta_plus: witness type -> canonical type (positive)"},
      {"witnesses", ws},
      {"wit_plus", big_to_json(r.wit_plus)},
      {"classes", classes},
      {"degrees", {{"ctx", degrees_json(r.ctx_degrees)}, {"res", degrees_json(r.res_degrees)}}},
      {"tilde_wit_plus", big_to_json(r.tilde_wit_plus)},
      {"esp_count", big_to_json(r.esp_count)},
  };
}

namespace {

Json checks_json(const std::vector<CheckOutcome>& checks) {
  Json out = Json::object();
  for (const auto& c : checks) out[c.name] = Json{{"passed", c.passed}, {"detail", c.detail}};
  return out;
}

}  // namespace

Json verification_to_json(const VerificationReport& v) {
  Json j = report_to_json(v.witnesses);
  j["wrel"] = natinf_to_json(v.wrel);
  j["class_weight"] = natinf_to_json(v.class_weight);
  j["checks"] = checks_json(v.checks);
  return j;
}

CorpusEntry entry_from_json(const Json& j) {
  CorpusEntry e;
  e.name = j.at("name").get<std::string>();
  e.context = j.value("context", std::string());
  e.term = j.at("term").get<std::string>();
  e.point = point_from_json(j.at("point"));
  if (j.contains("expected"))
    for (const auto& [k, v] : j.at("expected").items()) e.expected[k] = v;
  if (j.contains("budget") && !j.at("budget").is_null()) e.budget = j.at("budget").get<int>();
  return e;
}

Json entry_to_json(const CorpusEntry& e) {
  Json j{{"name", e.name}, {"context", e.context}, {"term", e.term}, {"point", point_to_json(e.point)}};
  if (!e.expected.empty()) {
    Json ex = Json::object();
    for (const auto& [k, v] : e.expected) ex[k] = v;
    j["expected"] = ex;
  }
  if (e.budget) j["budget"] = *e.budget;
  return j;
}

std::vector<CorpusEntry> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read corpus " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("malformed corpus JSON: ") + e.what());
  }
  if (!j.is_array()) throw Error("corpus must be a JSON array");
  std::vector<CorpusEntry> out;
  for (const auto& e : j) out.push_back(entry_from_json(e));
  return out;
}

bool CorpusResult::passed() const {
  if (!report) return false;
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

std::optional<int> entry_budget(const CorpusEntry& e, int fallback) {
  if (e.budget) return e.budget;
  const TypingContext ctx = parse_context(e.context);
  if (is_beta_normal(elaborate(ctx, parse_term(e.term)))) return std::nullopt;
  return fallback;
}

namespace {

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::optional<Json> observed(const VerificationReport& v, const std::string& key) {
  const auto& r = v.witnesses;
  if (key == "wit_plus") return big_to_json(r.wit_plus);
  if (key == "wrel") return natinf_to_json(v.wrel);
  if (key == "class_weight") return natinf_to_json(v.class_weight);
  if (key == "classes") return Json(r.classes.size());
  if (key == "esp_count") return big_to_json(r.esp_count);
  if (key == "tilde_wit_plus") return big_to_json(r.tilde_wit_plus);
  return std::nullopt;
}

}  // namespace

CorpusResult verify_entry(const CorpusEntry& e, int fallback_budget) {
  CorpusResult res;
  res.name = e.name;
  try {
    const TypingContext ctx = parse_context(e.context);
    const Term term = parse_term(e.term);
    const auto budget = entry_budget(e, fallback_budget);
    res.report = verify_identities(ctx, term, e.point, budget);
    res.checks = res.report->checks;
    for (const auto& [key, want] : e.expected) {
      const auto got = observed(*res.report, key);
      if (!got) {
        res.checks.push_back({"expected:" + key, false, "unknown expected key"});
        continue;
      }
      res.checks.push_back({"expected:" + key, scalar_text(*got) == scalar_text(want),
                            "expected " + scalar_text(want) + ", got " + scalar_text(*got)});
    }
  } catch (const std::exception& ex) {
    res.report.reset();
    res.error = ex.what();
  }
  return res;
}

std::vector<CorpusResult> verify_corpus(const std::vector<CorpusEntry>& entries,
                                        int fallback_budget, Exec exec) {
  std::vector<CorpusResult> out(entries.size());
  const auto n = static_cast<long>(entries.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] = verify_entry(entries[static_cast<std::size_t>(i)], fallback_budget);
  } else {
    for (long i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] = verify_entry(entries[static_cast<std::size_t>(i)], fallback_budget);
  }
  return out;
}

Json corpus_result_to_json(const CorpusResult& r) {
  Json j{{"name", r.name}, {"passed", r.passed()}};
  if (!r.error.empty()) j["error"] = r.error;
  if (r.report) {
    j["report"] = verification_to_json(*r.report);
    j["report"]["checks"] = checks_json(r.checks);
  }
  return j;
}

}  // namespace thinspan
