#pragma once

// JSON encodings of points, reports and corpus files.

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thinspan/collapse.hpp"

namespace thinspan {

using Json = nlohmann::ordered_json;

PointSpec point_from_json(const Json& j);
Json point_to_json(const PointSpec& p);

/// `text` is either a JSON object or the path of a file holding one.
PointSpec read_point(const std::string& text);

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
Json big_to_json(const BigInt& n);
Json natinf_to_json(const NatInf& n);

Json report_to_json(const PositiveWitnessReport& r);
Json verification_to_json(const VerificationReport& v);

struct CorpusEntry {
  std::string name;
  std::string context;
  std::string term;
  PointSpec point;
  std::map<std::string, Json> expected;
  std::optional<int> budget;
};

CorpusEntry entry_from_json(const Json& j);
Json entry_to_json(const CorpusEntry& e);
std::vector<CorpusEntry> load_corpus(const std::string& path);

struct CorpusResult {
  std::string name;
  std::optional<VerificationReport> report;  // absent when the entry failed to load
  std::vector<CheckOutcome> checks;          // identities plus expected values
  std::string error;
  bool passed() const;
};

/// Budget used for an entry: its own, else `fallback` when its term has a
/// redex.
std::optional<int> entry_budget(const CorpusEntry& e, int fallback);

CorpusResult verify_entry(const CorpusEntry& e, int fallback_budget);

/// Entries run in parallel; results come back in corpus order.
std::vector<CorpusResult> verify_corpus(const std::vector<CorpusEntry>& entries,
                                        int fallback_budget, Exec exec = Exec::Parallel);

Json corpus_result_to_json(const CorpusResult& r);

}  // namespace thinspan
