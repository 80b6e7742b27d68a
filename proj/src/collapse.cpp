#include "thinspan/collapse.hpp"

#include <exception>

#include "thinspan/wrel.hpp"

namespace thinspan {

namespace {

struct PointResult {
  std::vector<Derivation> derivations;
  CtxMorphism theta_minus;
  ITMorphism theta_plus;
  BigInt polarized = 0;  // #negative homs × #positive homs
};

// Witnesses at one candidate point, with the polarized morphisms into and
// out of it enumerated explicitly.
PointResult analyse_point(WitnessEnumerator& e, const RigidPoint& canonical,
                          const RigidPoint& candidate) {
  PointResult r;
  r.derivations = e.at(candidate);
  if (r.derivations.empty()) return r;
  auto negs = enumerate_ctx_homs(canonical.ctx, candidate.ctx, Mode::Negative);
  auto poss = enumerate_homs(candidate.type, canonical.type, Mode::Positive);
  if (negs.empty() || poss.empty())
    throw InvariantViolation("candidate point is not polarly reachable from the canonical point");
  r.theta_minus = negs.front();
  r.theta_plus = poss.front();
  r.polarized = BigInt(negs.size()) * BigInt(poss.size());
  return r;
}

std::vector<PointResult> analyse_serial(const TypingContext& ctx, const Term& term,
                                        std::optional<int> budget, const RigidPoint& canonical,
                                        const std::vector<RigidPoint>& candidates) {
  WitnessEnumerator e(ctx, term, budget);
  std::vector<PointResult> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(analyse_point(e, canonical, c));
  return out;
}

std::vector<PointResult> analyse_parallel(const TypingContext& ctx, const Term& term,
                                          std::optional<int> budget,
                                          const RigidPoint& canonical,
                                          const std::vector<RigidPoint>& candidates) {
  std::vector<PointResult> out(candidates.size());
  std::exception_ptr failure;
  const auto n = static_cast<long>(candidates.size());
#pragma omp parallel
  {
    std::optional<WitnessEnumerator> e;
    try {
      e.emplace(ctx, term, budget);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
#pragma omp for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
      if (!e) continue;
      try {
        out[static_cast<std::size_t>(i)] =
            analyse_point(*e, canonical, candidates[static_cast<std::size_t>(i)]);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace

PositiveWitnessReport positive_witnesses(const TypingContext& ctx, const Term& m,
                                         const PointSpec& p, std::optional<int> budget,
                                         Exec exec) {
  PositiveWitnessReport r;
  r.ctx = ctx;
  r.term = elaborate(ctx, m);
  r.type = typecheck(ctx, r.term);
  r.point = canonicalize_point(p, ctx, r.type);
  const bool normal = is_beta_normal(r.term);
  if (!normal && !budget)
    throw BudgetRequired("term " + to_string(r.term) + " has a redex; a budget is required");
  r.completeness = normal ? Completeness{Exact{}} : Completeness{BoundedAt{*budget}};

  std::vector<RigidPoint> candidates;
  const auto thetas = reachable_ctx(r.point.ctx, Mode::Negative);
  const auto alphas = reachable(r.point.type, Mode::Positive);
  for (const auto& theta : thetas)
    for (const auto& alpha : alphas) candidates.push_back({theta, alpha});

  const auto results = exec == Exec::Parallel
                           ? analyse_parallel(ctx, r.term, budget, r.point, candidates)
                           : analyse_serial(ctx, r.term, budget, r.point, candidates);

  r.esp_count = 0;
  std::vector<Derivation> all;
  for (const auto& res : results) {
    r.esp_count += res.polarized * BigInt(res.derivations.size());
    for (const auto& d : res.derivations) {
      r.witnesses.push_back({d, res.theta_minus, res.theta_plus});
      all.push_back(d);
    }
  }
  r.wit_plus = BigInt(r.witnesses.size());
  r.ctx_degrees = sym_degrees_ctx(r.point.ctx);
  r.res_degrees = sym_degrees(r.point.type, r.type);
  r.tilde_wit_plus = r.ctx_degrees.m_minus * r.wit_plus * r.res_degrees.m_plus;

  const BigInt numerator = r.ctx_degrees.m_plus * r.res_degrees.m_minus;
  for (const auto& c : partition_by_symmetry(all))
    r.classes.push_back({c.members.size(), c.m_class, Rational(numerator, c.m_class)});
  return r;
}

NatInf weight_by_classes(const PositiveWitnessReport& report) {
  Rational sum = 0;
  for (const auto& c : report.classes) sum += c.contribution;
  if (boost::multiprecision::denominator(sum) != 1)
    throw InvariantViolation("class weights sum to the non-integer " + sum.str());
  return NatInf(boost::multiprecision::numerator(sum));
}

NatInf weight_by_classes(const TypingContext& ctx, const Term& m, const PointSpec& p,
                         std::optional<int> budget) {
  return weight_by_classes(positive_witnesses(ctx, m, p, budget));
}

bool class_witness_count_check(const PositiveWitnessReport& report) {
  for (const auto& c : report.classes)
    if (Rational(BigInt(c.size)) != c.contribution) return false;
  return true;
}

bool class_witness_count_check(const TypingContext& ctx, const Term& m, const PointSpec& p) {
  return class_witness_count_check(positive_witnesses(ctx, m, p, std::nullopt));
}

bool esp_wrel_check(const PositiveWitnessReport& report, const NatInf& wrel) {
  const BigInt d = report.ctx_degrees.m_minus * report.res_degrees.m_plus;
  if (report.esp_count % d != 0)
    throw InvariantViolation("esp count " + report.esp_count.str() + " is not divisible by " +
                             d.str());
  return NatInf(report.esp_count / d) == wrel;
}

bool esp_wrel_check(const TypingContext& ctx, const Term& m, const PointSpec& p,
                    std::optional<int> budget) {
  return esp_wrel_check(positive_witnesses(ctx, m, p, budget), wrel_coefficient(ctx, m, p));
}

bool VerificationReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

namespace {

std::string degrees_detail(const Degrees& d) {
  return "m=" + d.m.str() + " m+=" + d.m_plus.str() + " m-=" + d.m_minus.str();
}

}  // namespace

VerificationReport verify_identities(const TypingContext& ctx, const Term& m, const PointSpec& p,
                                     std::optional<int> budget) {
  VerificationReport v{positive_witnesses(ctx, m, p, budget), wrel_coefficient(ctx, m, p), {}, {}};
  const auto& r = v.witnesses;
  auto add = [&](std::string name, bool ok, std::string detail) {
    v.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  add("wit_plus=wrel", NatInf(r.wit_plus) == v.wrel,
      "wit_plus=" + r.wit_plus.str() + " wrel=" + v.wrel.str());
  try {
    v.class_weight = weight_by_classes(r);
    add("classes=wit_plus", v.class_weight == NatInf(r.wit_plus),
        "by_classes=" + v.class_weight.str() + " classes=" + std::to_string(r.classes.size()));
  } catch (const InvariantViolation& e) {
    add("classes=wit_plus", false, e.what());
  }
  add("class_counts", class_witness_count_check(r), "");
  add("tilde_witnesses", r.esp_count == r.tilde_wit_plus,
      "enumerated=" + r.esp_count.str() + " formula=" + r.tilde_wit_plus.str());
  try {
    add("esp_wrel_division", esp_wrel_check(r, v.wrel), "esp=" + r.esp_count.str());
  } catch (const InvariantViolation& e) {
    add("esp_wrel_division", false, e.what());
  }
  add("degrees_ctx", r.ctx_degrees.m == r.ctx_degrees.m_plus * r.ctx_degrees.m_minus,
      degrees_detail(r.ctx_degrees));
  add("degrees_res", r.res_degrees.m == r.res_degrees.m_plus * r.res_degrees.m_minus,
      degrees_detail(r.res_degrees));

  if (!is_beta_normal(r.term)) {
    const Term nf = beta_normalize(r.term);
    const auto nr = positive_witnesses(ctx, nf, p, std::nullopt);
    add("normal_form", nr.wit_plus == r.wit_plus && NatInf(nr.wit_plus) == v.wrel,
        "normal_form_wit_plus=" + nr.wit_plus.str());
    const auto next = positive_witnesses(ctx, m, p, *budget + 1);
    add("stabilization", next.wit_plus == r.wit_plus,
        "budget " + std::to_string(*budget) + ": " + r.wit_plus.str() + ", budget " +
            std::to_string(*budget + 1) + ": " + next.wit_plus.str());
  }
  return v;
}

}  // namespace thinspan
