// Head-directed witness enumeration. On β-normal subjects every choice is
// forced by the head variable's first resource, so the search is finite
// and complete. Redexes guess the argument multiplicity and, for non-variable
// arguments, the argument types, within the budget.

#include <algorithm>

#include "thinspan/derivation.hpp"

namespace thinspan {

namespace {

ResourceContext with_seqs(const ResourceContext& like, std::vector<SeqType> seqs) {
  std::vector<ResourceBinding> bs;
  bs.reserve(like.size());
  for (std::size_t i = 0; i < like.size(); ++i)
    bs.push_back({like[i].name, std::move(seqs[i]), like[i].simple});
  return ResourceContext(std::move(bs));
}

bool all_empty(const ResourceContext& c) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c.seq(i).empty()) return false;
  return true;
}

// Calls f(segment, remainder) for every split of `rest` into a consecutive
// prefix (the segment) and the remainder, with the prefix empty outside
// `usable`.
template <class F>
void for_each_prefix(const ResourceContext& rest, const std::vector<bool>& usable, F&& f) {
  const std::size_t n = rest.size();
  std::vector<std::size_t> len(n, 0);
  while (true) {
    std::vector<SeqType> seg(n), rem(n);
    for (std::size_t v = 0; v < n; ++v) {
      const SeqType& s = rest.seq(v);
      seg[v].assign(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(len[v]));
      rem[v].assign(s.begin() + static_cast<std::ptrdiff_t>(len[v]), s.end());
    }
    f(with_seqs(rest, std::move(seg)), with_seqs(rest, std::move(rem)));
    std::size_t v = 0;
    for (; v < n; ++v) {
      if (!usable[v] || len[v] == rest.seq(v).size()) {
        len[v] = 0;
        continue;
      }
      ++len[v];
      break;
    }
    if (v == n) return;
  }
}

// The type a variable-headed spine receives from its head's first resource
// in `theta`, if any.
std::optional<IType> head_type(const Term& m, const ResourceContext& theta,
                               const TypingContext& scope) {
  const Spine sp = spine(m);
  if (sp.head.kind() != TermKind::Var) return std::nullopt;
  const auto idx = scope.index_of(sp.head.name());
  if (!idx || theta.seq(*idx).empty()) return std::nullopt;
  IType cur = theta.seq(*idx).front();
  for (std::size_t j = 0; j < sp.args.size(); ++j) {
    if (!cur.is_arrow()) return std::nullopt;
    cur = cur.codomain();
  }
  return cur;
}

}  // namespace

WitnessEnumerator::WitnessEnumerator(TypingContext ctx, const Term& term,
                                     std::optional<int> budget)
    : ctx_(std::move(ctx)),
      term_(elaborate(ctx_, term)),
      type_(typecheck(ctx_, term_)),
      budget_(budget),
      normal_(is_beta_normal(term_)) {
  if (budget_ && *budget_ < 0) throw Error("budget must be non-negative");
  if (!normal_ && !budget_)
    throw BudgetRequired("term " + to_string(term_) + " has a redex; a budget is required");
}

Completeness WitnessEnumerator::completeness() const {
  if (normal_) return Exact{};
  return BoundedAt{*budget_};
}

std::vector<Derivation> WitnessEnumerator::at(const RigidPoint& point) {
  if (point.ctx.underlying() != ctx_)
    throw RefinementError("point context " + to_string(point.ctx) + " is not over " +
                          to_string(ctx_));
  if (!refines(point.type, type_))
    throw RefinementError(to_string(point.type) + " does not refine " + to_string(type_));
  std::vector<Derivation> out = enumerate(term_, point.ctx, point.type);
  std::vector<std::pair<std::string, Derivation>> keyed;
  keyed.reserve(out.size());
  for (auto& d : out) keyed.emplace_back(serialize(d), std::move(d));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  out.clear();
  for (auto& [k, d] : keyed) out.push_back(std::move(d));
  return out;
}

std::vector<bool> WitnessEnumerator::live(const Term& m, const TypingContext& scope) {
  auto it = free_.find(m.node());
  if (it == free_.end()) it = free_.emplace(m.node(), free_variables(m)).first;
  std::vector<bool> out(scope.size(), false);
  for (const auto& x : it->second)
    if (auto idx = scope.index_of(x)) out[*idx] = true;
  return out;
}

SimpleType WitnessEnumerator::type_of(const Term& m, const TypingContext& scope) {
  auto key = std::make_pair(m.node(), to_string(scope));
  auto it = types_.find(key);
  if (it == types_.end()) it = types_.emplace(key, typecheck(scope, m)).first;
  return it->second;
}

const std::vector<IType>& WitnessEnumerator::candidates(const SimpleType& a) {
  const std::string key = to_string(a);
  auto it = candidates_.find(key);
  if (it == candidates_.end()) it = candidates_.emplace(key, bounded_refinements(a, *budget_)).first;
  return it->second;
}

const std::vector<Derivation>& WitnessEnumerator::enumerate(const Term& m,
                                                            const ResourceContext& theta,
                                                            const IType& alpha) {
  Key key{m.node(), to_string(theta), to_string(alpha)};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  std::vector<Derivation> out;
  const TypingContext scope = theta.underlying();
  const std::vector<bool> usable = live(m, scope);
  bool possible = true;
  for (std::size_t v = 0; v < theta.size(); ++v)
    if (!usable[v] && !theta.seq(v).empty()) possible = false;

  if (possible) {
    switch (m.kind()) {
      case TermKind::Lam: {
        if (!alpha.is_arrow()) break;
        auto bs = theta.bindings();
        bs.push_back({m.binder(), alpha.domain(), *m.annotation()});
        const ResourceContext inner(std::move(bs));
        for (const auto& b : enumerate(m.body(), inner, alpha.codomain()))
          out.push_back(Derivation::lam(m, b));
        break;
      }
      case TermKind::Var:
        out = enumerate_spine(m, theta, alpha);
        break;
      case TermKind::App:
        out = spine(m).head.kind() == TermKind::Var ? enumerate_spine(m, theta, alpha)
                                                    : enumerate_redex(m, theta, alpha);
        break;
    }
  }
  return memo_.emplace(std::move(key), std::move(out)).first->second;
}

std::vector<Derivation> WitnessEnumerator::enumerate_spine(const Term& m,
                                                           const ResourceContext& theta,
                                                           const IType& alpha) {
  const TypingContext scope = theta.underlying();
  const Spine sp = spine(m);
  const auto idx = scope.index_of(sp.head.name());
  if (!idx) throw TypeError("unbound variable " + sp.head.name());
  const SeqType& own = theta.seq(*idx);
  if (own.empty()) return {};

  // The head consumes the first resource of its variable.
  const IType& h = own.front();
  std::vector<std::pair<Term, IType>> copies;
  IType cur = h;
  for (const auto& arg : sp.args) {
    if (!cur.is_arrow()) return {};
    for (const auto& e : cur.domain()) copies.emplace_back(arg, e);
    cur = cur.codomain();
  }
  if (cur != alpha) return {};

  std::vector<SeqType> seqs;
  for (std::size_t v = 0; v < theta.size(); ++v) seqs.push_back(theta.seq(v));
  seqs[*idx].erase(seqs[*idx].begin());
  const ResourceContext rest = with_seqs(theta, std::move(seqs));

  std::vector<Term> apps;
  for (Term t = m; t.kind() == TermKind::App; t = t.fn()) apps.push_back(t);
  std::reverse(apps.begin(), apps.end());

  std::vector<std::vector<Derivation>> assignments;
  std::vector<Derivation> acc;
  distribute(copies, 0, rest, acc, assignments);

  std::vector<Derivation> out;
  out.reserve(assignments.size());
  for (const auto& as : assignments) {
    Derivation node = Derivation::var(scope, sp.head, h);
    std::size_t offset = 0;
    IType t = h;
    for (std::size_t j = 0; j < sp.args.size(); ++j) {
      const std::size_t n = t.domain().size();
      std::vector<Derivation> args(as.begin() + static_cast<std::ptrdiff_t>(offset),
                                   as.begin() + static_cast<std::ptrdiff_t>(offset + n));
      node = Derivation::app(apps[j], std::move(node), std::move(args));
      offset += n;
      t = t.codomain();
    }
    out.push_back(std::move(node));
  }
  return out;
}

void WitnessEnumerator::distribute(const std::vector<std::pair<Term, IType>>& copies,
                                   std::size_t i, const ResourceContext& rest,
                                   std::vector<Derivation>& acc,
                                   std::vector<std::vector<Derivation>>& out) {
  if (i == copies.size()) {
    if (all_empty(rest)) out.push_back(acc);
    return;
  }
  const TypingContext scope = rest.underlying();
  // Every remaining resource must be usable by some remaining copy.
  std::vector<bool> reachable(rest.size(), false);
  for (std::size_t j = i; j < copies.size(); ++j) {
    const auto l = live(copies[j].first, scope);
    for (std::size_t v = 0; v < l.size(); ++v) reachable[v] = reachable[v] || l[v];
  }
  for (std::size_t v = 0; v < rest.size(); ++v)
    if (!reachable[v] && !rest.seq(v).empty()) return;

  const auto& [arg, type] = copies[i];
  for_each_prefix(rest, live(arg, scope), [&](const ResourceContext& seg,
                                              const ResourceContext& rem) {
    for (const auto& d : enumerate(arg, seg, type)) {
      acc.push_back(d);
      distribute(copies, i + 1, rem, acc, out);
      acc.pop_back();
    }
  });
}

std::vector<Derivation> WitnessEnumerator::enumerate_redex(const Term& m,
                                                           const ResourceContext& theta,
                                                           const IType& alpha) {
  const TypingContext scope = theta.underlying();
  const Term& fn = m.fn();
  const Term& arg = m.arg();
  const std::vector<bool> arg_live = live(arg, scope);
  std::vector<Derivation> out;
  for_each_prefix(theta, live(fn, scope), [&](const ResourceContext& prefix,
                                              const ResourceContext& suffix) {
    for (std::size_t v = 0; v < suffix.size(); ++v)
      if (!arg_live[v] && !suffix.seq(v).empty()) return;
    for (int n = 0; n <= *budget_; ++n) {
      std::vector<std::vector<Derivation>> assignments;
      std::vector<Derivation> acc;
      distribute_guessed(arg, static_cast<std::size_t>(n), suffix, acc, assignments);
      for (const auto& as : assignments) {
        SeqType dom;
        for (const auto& d : as) dom.push_back(d.type());
        for (const auto& f : enumerate(fn, prefix, IType::arrow(dom, alpha)))
          out.push_back(Derivation::app(m, f, as));
      }
    }
  });
  return out;
}

void WitnessEnumerator::distribute_guessed(const Term& arg, std::size_t n,
                                           const ResourceContext& rest,
                                           std::vector<Derivation>& acc,
                                           std::vector<std::vector<Derivation>>& out) {
  if (acc.size() == n) {
    if (all_empty(rest)) out.push_back(acc);
    return;
  }
  const TypingContext scope = rest.underlying();
  const bool var_headed = spine(arg).head.kind() == TermKind::Var;
  for_each_prefix(rest, live(arg, scope), [&](const ResourceContext& seg,
                                              const ResourceContext& rem) {
    auto recurse = [&](const IType& type) {
      for (const auto& d : enumerate(arg, seg, type)) {
        acc.push_back(d);
        distribute_guessed(arg, n, rem, acc, out);
        acc.pop_back();
      }
    };
    if (var_headed) {
      if (auto t = head_type(arg, seg, scope)) recurse(*t);
    } else {
      for (const auto& t : candidates(type_of(arg, scope))) recurse(t);
    }
  });
}

WitnessSet enumerate_witnesses(const TypingContext& ctx, const Term& m, const RigidPoint& point,
                               std::optional<int> budget) {
  WitnessEnumerator e(ctx, m, budget);
  WitnessSet ws{ctx, e.term(), e.simple_type(), point, e.at(point), e.completeness()};
  return ws;
}

}  // namespace thinspan
