#include "thinspan/wrel.hpp"

#include "thinspan/error.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>

namespace thinspan {

namespace {

using Int = NatInf::Int;

// Distinct elements of a sorted multiset with their multiplicities.
std::vector<std::pair<MIType, std::size_t>> runs(const MultisetType& mu) {
  std::vector<std::pair<MIType, std::size_t>> out;
  for (const auto& e : mu) {
    if (!out.empty() && out.back().first == e)
      ++out.back().second;
    else
      out.emplace_back(e, 1);
  }
  return out;
}

struct Scope {
  std::vector<std::string> names;
  std::vector<SimpleType> types;
  std::vector<MultisetType> gamma;

  std::optional<std::size_t> index_of(const std::string& x) const {
    for (std::size_t i = names.size(); i-- > 0;)
      if (names[i] == x) return i;
    return std::nullopt;
  }

  std::string key() const {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
      out += names[i] + ":" + to_string(gamma[i]) + ";";
    }
    return out;
  }
};

// Entry-wise evaluation over a β-normal, fully annotated term.
class Evaluator {
 public:
  Int coef(const Term& m, const Scope& s, const MIType& a) {
    // Unused resources make the coefficient vanish.
    const auto& fv = free_vars(m);
    for (std::size_t i = 0; i < s.names.size(); ++i)
      if (!s.gamma[i].empty() && (!fv.count(s.names[i]) || s.index_of(s.names[i]) != i)) return 0;

    auto key = std::make_tuple(m.node(), s.key(), to_string(a));
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Int out = m.kind() == TermKind::Lam ? coef_lam(m, s, a) : coef_spine(m, s, a);
    memo_.emplace(std::move(key), out);
    return out;
  }

 private:
  const std::set<std::string>& free_vars(const Term& m) {
    auto it = fv_.find(m.node());
    if (it == fv_.end()) it = fv_.emplace(m.node(), free_variables(m)).first;
    return it->second;
  }

  Int coef_lam(const Term& m, const Scope& s, const MIType& a) {
    if (!a.is_arrow()) return 0;
    Scope inner = s;
    inner.names.push_back(m.binder());
    inner.types.push_back(*m.annotation());
    inner.gamma.push_back(a.domain());
    return coef(m.body(), inner, a.codomain());
  }

  Int coef_spine(const Term& m, const Scope& s, const MIType& a) {
    const Spine sp = spine(m);
    if (sp.head.kind() != TermKind::Var) throw InvariantViolation("term is not β-normal");
    const auto idx = s.index_of(sp.head.name());
    if (!idx) throw TypeError("unbound variable " + sp.head.name());

    Int total = 0;
    // The head consumes one element of its variable's multiset; summing over
    // distinct elements counts each sub-multiset [e] once.
    for (const auto& run : runs(s.gamma[*idx])) {
      const MIType& e = run.first;
      std::vector<std::pair<Term, MIType>> copies;
      MIType cur = e;
      bool shape = true;
      for (const auto& arg : sp.args) {
        if (!cur.is_arrow()) {
          shape = false;
          break;
        }
        // Promotion: the argument multiset is taken in one fixed
        // presentation; the sum over presentations happens on the context
        // side as ordered decompositions.
        for (const auto& ai : cur.domain()) copies.emplace_back(arg, ai);
        cur = cur.codomain();
      }
      if (!shape || !(cur == a)) continue;
      Scope rest = s;
      auto& g = rest.gamma[*idx];
      g.erase(std::find(g.begin(), g.end(), e));
      total += decompose(copies, 0, rest);
    }
    return total;
  }

  // Σ over ordered decompositions rest = γ_i + … + γ_n of Π coef(N_j, γ_j, a_j).
  Int decompose(const std::vector<std::pair<Term, MIType>>& copies, std::size_t i,
                const Scope& rest) {
    if (i == copies.size()) {
      for (const auto& g : rest.gamma)
        if (!g.empty()) return 0;
      return 1;
    }
    const auto& [arg, type] = copies[i];
    const auto& fv = free_vars(arg);
    // Per variable: how many of each distinct element this copy takes.
    std::vector<std::vector<std::pair<MIType, std::size_t>>> avail(rest.gamma.size());
    std::vector<std::pair<std::size_t, std::size_t>> where;
    for (std::size_t v = 0; v < rest.gamma.size(); ++v) {
      if (!fv.count(rest.names[v]) || rest.index_of(rest.names[v]) != v) continue;
      avail[v] = runs(rest.gamma[v]);
      for (std::size_t r = 0; r < avail[v].size(); ++r) where.emplace_back(v, r);
    }
    std::vector<std::size_t> take(where.size(), 0);
    Int total = 0;
    while (true) {
      Scope seg = rest;
      Scope rem = rest;
      for (std::size_t v = 0; v < rest.gamma.size(); ++v) seg.gamma[v].clear();
      for (std::size_t w = 0; w < where.size(); ++w) {
        const auto [v, r] = where[w];
        const MIType& e = avail[v][r].first;
        for (std::size_t c = 0; c < take[w]; ++c) {
          seg.gamma[v].push_back(e);
          auto& g = rem.gamma[v];
          g.erase(std::find(g.begin(), g.end(), e));
        }
      }
      for (auto& g : seg.gamma) g = make_multiset(std::move(g));
      const Int here = coef(arg, seg, type);
      if (here != 0) total += here * decompose(copies, i + 1, rem);

      std::size_t w = 0;
      for (; w < where.size(); ++w) {
        const auto [v, r] = where[w];
        if (take[w] == avail[v][r].second) {
          take[w] = 0;
          continue;
        }
        ++take[w];
        break;
      }
      if (w == where.size()) break;
    }
    return total;
  }

  std::map<std::tuple<const TermNode*, std::string, std::string>, Int> memo_;
  std::map<const TermNode*, std::set<std::string>> fv_;
};

}  // namespace

NatInf wrel_coefficient(const TypingContext& ctx, const Term& m, const MultiPoint& p) {
  const Term annotated = elaborate(ctx, m);
  const SimpleType type = typecheck(ctx, annotated);
  // Validates the point against the judgement.
  canonicalize_point(p, ctx, type);

  Scope s;
  for (const auto& b : ctx.bindings()) {
    MultisetType mu;
    for (const auto& [name, m2] : p.ctx)
      if (name == b.name) mu = make_multiset(m2);
    s.names.push_back(b.name);
    s.types.push_back(b.type);
    s.gamma.push_back(std::move(mu));
  }
  Evaluator ev;
  return NatInf(ev.coef(beta_normalize(annotated), s, p.type));
}

bool rel_inhabited(const TypingContext& ctx, const Term& m, const MultiPoint& p) {
  return !wrel_coefficient(ctx, m, p).is_zero();
}

}  // namespace thinspan
