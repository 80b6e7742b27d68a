#include <numeric>

#include "thinspan/derivation.hpp"

namespace thinspan {

namespace {

SeqMorphism empty_seq_morphism() { return SeqMorphism(Permutation::identity(0), {}); }

SeqMorphism concat(const SeqMorphism& a, const SeqMorphism& b) {
  std::vector<ITMorphism> comps = a.components;
  comps.insert(comps.end(), b.components.begin(), b.components.end());
  return SeqMorphism(concat(a.sigma, b.sigma), std::move(comps));
}

CtxMorphism concat(const CtxMorphism& a, const CtxMorphism& b) {
  CtxMorphism out;
  for (std::size_t v = 0; v < a.parts.size(); ++v) out.parts.push_back(concat(a.parts[v], b.parts[v]));
  return out;
}

CtxMorphism empty_ctx_morphism(std::size_t n) {
  return CtxMorphism{std::vector<SeqMorphism>(n, empty_seq_morphism())};
}

using Node = DerivationMorphism::Node;

}  // namespace

DerivationMorphism DerivationMorphism::var(const TypingContext& scope, const Term& term,
                                           ITMorphism phi) {
  if (term.kind() != TermKind::Var) throw Error("variable morphism on a non-variable term");
  const auto idx = scope.index_of(term.name());
  if (!idx) throw TypeError("unbound variable " + term.name());
  CtxMorphism xi = empty_ctx_morphism(scope.size());
  xi.parts[*idx] = SeqMorphism(Permutation::identity(1), {phi});
  DerivationMorphism p;
  p.node_ = std::make_shared<const Node>(
      Node{Rule::Var, term, scope, std::move(phi), std::move(xi), {}, {}});
  return p;
}

DerivationMorphism DerivationMorphism::app(const Term& term, DerivationMorphism fn,
                                           Permutation sigma,
                                           std::vector<DerivationMorphism> copies) {
  const ITMorphism& f = fn.phi();
  if (!f.is_arrow()) throw Error("applying a morphism on *");
  const SeqMorphism& dom = f.domain();
  if (dom.sigma != sigma || dom.size() != copies.size())
    throw Error("argument permutation does not match the function's domain morphism");
  for (std::size_t i = 0; i < copies.size(); ++i)
    if (!(copies[i].phi() == dom.components[i]))
      throw Error("argument morphism does not match the function's domain component");

  CtxMorphism multi = empty_ctx_morphism(fn.scope().size());
  if (!copies.empty()) {
    std::vector<CtxMorphism> family;
    for (const auto& c : copies) family.push_back(c.xi());
    multi = block_action(sigma, family);
  }
  CtxMorphism xi = concat(fn.xi(), multi);
  ITMorphism phi = f.codomain();
  TypingContext scope = fn.scope();
  std::vector<DerivationMorphism> children{std::move(fn)};
  for (auto& c : copies) children.push_back(std::move(c));
  DerivationMorphism p;
  p.node_ = std::make_shared<const Node>(Node{Rule::App, term, std::move(scope), std::move(phi),
                                              std::move(xi), std::move(sigma),
                                              std::move(children)});
  return p;
}

DerivationMorphism DerivationMorphism::lam(const Term& term, DerivationMorphism body) {
  auto parts = body.xi().parts;
  if (parts.empty()) throw Error("abstraction morphism over an empty scope");
  SeqMorphism bound = parts.back();
  parts.pop_back();
  std::vector<Binding> bs = body.scope().bindings();
  bs.pop_back();
  ITMorphism phi = ITMorphism::arrow(std::move(bound), body.phi());
  DerivationMorphism p;
  p.node_ = std::make_shared<const Node>(Node{Rule::Lam, term, TypingContext(std::move(bs)),
                                              std::move(phi), CtxMorphism{std::move(parts)},
                                              {}, {std::move(body)}});
  return p;
}

bool operator==(const DerivationMorphism& a, const DerivationMorphism& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.rule == y.rule && x.phi == y.phi && x.xi == y.xi && x.sigma == y.sigma &&
         x.term == y.term && x.scope == y.scope && x.children == y.children;
}

namespace {

Derivation side(const DerivationMorphism& p, bool source) {
  switch (p.rule()) {
    case Rule::Var:
      return Derivation::var(p.scope(), p.term(), source ? src(p.phi()) : tgt(p.phi()));
    case Rule::Lam:
      return Derivation::lam(p.term(), side(p.body(), source));
    case Rule::App: {
      const auto copies = p.copies();
      std::vector<Derivation> args(copies.size());
      for (std::size_t i = 0; i < copies.size(); ++i) {
        // Copy i lands in target slot σ(i).
        const std::size_t slot = source ? i : p.sigma()(i);
        args[slot] = side(copies[i], source);
      }
      return Derivation::app(p.term(), side(p.fn(), source), std::move(args));
    }
  }
  throw Error("unknown rule");
}

void collect(const Derivation& d1, const Derivation& d2, const ITMorphism* constraint,
             std::vector<DerivationMorphism>& out);

// Every tuple of morphisms copy_i : a1[i] → a2[σ(i)] carrying dom.components[i].
void collect_copies(std::span<const Derivation> a1, std::span<const Derivation> a2,
                    const SeqMorphism& dom, std::size_t i, std::vector<DerivationMorphism>& acc,
                    std::vector<std::vector<DerivationMorphism>>& out) {
  if (i == a1.size()) {
    out.push_back(acc);
    return;
  }
  std::vector<DerivationMorphism> here;
  collect(a1[i], a2[dom.sigma(i)], &dom.components[i], here);
  for (auto& m : here) {
    acc.push_back(std::move(m));
    collect_copies(a1, a2, dom, i + 1, acc, out);
    acc.pop_back();
  }
}

void collect(const Derivation& d1, const Derivation& d2, const ITMorphism* constraint,
             std::vector<DerivationMorphism>& out) {
  if (d1.rule() != d2.rule() || !(d1.term() == d2.term())) return;
  if (constraint && (src(*constraint) != d1.type() || tgt(*constraint) != d2.type())) return;
  const TypingContext scope = d1.ctx().underlying();
  switch (d1.rule()) {
    case Rule::Var:
      if (constraint) {
        out.push_back(DerivationMorphism::var(scope, d1.term(), *constraint));
      } else {
        for (auto& phi : enumerate_homs(d1.type(), d2.type()))
          out.push_back(DerivationMorphism::var(scope, d1.term(), std::move(phi)));
      }
      return;
    case Rule::Lam: {
      std::vector<DerivationMorphism> bodies;
      collect(d1.body(), d2.body(), constraint ? &constraint->codomain() : nullptr, bodies);
      for (auto& b : bodies) {
        auto p = DerivationMorphism::lam(d1.term(), std::move(b));
        if (!constraint || p.phi() == *constraint) out.push_back(std::move(p));
      }
      return;
    }
    case Rule::App: {
      if (d1.args().size() != d2.args().size()) return;
      std::vector<DerivationMorphism> fns;
      collect(d1.fn(), d2.fn(), nullptr, fns);
      for (auto& f : fns) {
        if (constraint && !(f.phi().codomain() == *constraint)) continue;
        const SeqMorphism dom = f.phi().domain();
        std::vector<std::vector<DerivationMorphism>> tuples;
        std::vector<DerivationMorphism> acc;
        collect_copies(d1.args(), d2.args(), dom, 0, acc, tuples);
        for (auto& t : tuples) out.push_back(DerivationMorphism::app(d1.term(), f, dom.sigma, std::move(t)));
      }
      return;
    }
  }
}

bool same_subject(const Derivation& d1, const Derivation& d2) {
  return d1.term() == d2.term() && d1.ctx().underlying() == d2.ctx().underlying();
}

}  // namespace

Derivation src(const DerivationMorphism& p) { return side(p, true); }
Derivation tgt(const DerivationMorphism& p) { return side(p, false); }

std::vector<DerivationMorphism> enumerate_derivation_morphisms(const Derivation& d1,
                                                               const Derivation& d2) {
  if (!same_subject(d1, d2)) throw Error("derivations have different subjects");
  std::vector<DerivationMorphism> out;
  collect(d1, d2, nullptr, out);
  return out;
}

bool symmetric(const Derivation& d1, const Derivation& d2) {
  if (!same_subject(d1, d2)) throw Error("derivations have different subjects");
  if (d1.ctx() == d2.ctx() && d1.type() == d2.type() && d1 == d2) return true;
  // Morphisms preserve the multiset collapse, so differing collapses rule
  // them out cheaply.
  if (multiset_collapse_term(derivation_to_resource(d1)) !=
      multiset_collapse_term(derivation_to_resource(d2)))
    return false;
  return !enumerate_derivation_morphisms(d1, d2).empty();
}

namespace {

DerivationMorphism compose_raw(const DerivationMorphism& p2, const DerivationMorphism& p1) {
  if (p1.rule() != p2.rule() || !(p1.term() == p2.term()))
    throw Error("non-composable derivation morphisms");
  switch (p1.rule()) {
    case Rule::Var:
      return DerivationMorphism::var(p1.scope(), p1.term(), compose(p2.phi(), p1.phi()));
    case Rule::Lam:
      return DerivationMorphism::lam(p1.term(), compose_raw(p2.body(), p1.body()));
    case Rule::App: {
      const auto c1 = p1.copies();
      const auto c2 = p2.copies();
      if (c1.size() != c2.size()) throw Error("non-composable derivation morphisms");
      DerivationMorphism fn = compose_raw(p2.fn(), p1.fn());
      // Copy i of p1 lands in slot σ₁(i), where p2's copy σ₁(i) continues it.
      std::vector<DerivationMorphism> copies;
      for (std::size_t i = 0; i < c1.size(); ++i)
        copies.push_back(compose_raw(c2[p1.sigma()(i)], c1[i]));
      return DerivationMorphism::app(p1.term(), std::move(fn), compose(p2.sigma(), p1.sigma()),
                                     std::move(copies));
    }
  }
  throw Error("unknown rule");
}

}  // namespace

DerivationMorphism compose(const DerivationMorphism& p2, const DerivationMorphism& p1) {
  if (!(tgt(p1) == src(p2))) throw Error("non-composable derivation morphisms: target differs from source");
  return compose_raw(p2, p1);
}

DerivationMorphism identity_morphism(const Derivation& d) {
  const TypingContext scope = d.ctx().underlying();
  switch (d.rule()) {
    case Rule::Var:
      return DerivationMorphism::var(scope, d.term(), identity(d.type()));
    case Rule::Lam:
      return DerivationMorphism::lam(d.term(), identity_morphism(d.body()));
    case Rule::App: {
      std::vector<DerivationMorphism> copies;
      for (const auto& a : d.args()) copies.push_back(identity_morphism(a));
      Permutation id = Permutation::identity(copies.size());
      return DerivationMorphism::app(d.term(), identity_morphism(d.fn()), std::move(id),
                                     std::move(copies));
    }
  }
  throw Error("unknown rule");
}

DerivationMorphism invert(const DerivationMorphism& p) {
  switch (p.rule()) {
    case Rule::Var:
      return DerivationMorphism::var(p.scope(), p.term(), inverse(p.phi()));
    case Rule::Lam:
      return DerivationMorphism::lam(p.term(), invert(p.body()));
    case Rule::App: {
      const auto c = p.copies();
      std::vector<DerivationMorphism> copies(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) copies[p.sigma()(i)] = invert(c[i]);
      return DerivationMorphism::app(p.term(), invert(p.fn()), p.sigma().inverse(),
                                     std::move(copies));
    }
  }
  throw Error("unknown rule");
}

std::string to_string(const DerivationMorphism& p) {
  switch (p.rule()) {
    case Rule::Var:
      return p.term().name() + "{" + to_string(p.phi()) + "}";
    case Rule::Lam:
      return "\\" + p.term().binder() + ". " + to_string(p.body());
    case Rule::App: {
      std::string out = p.fn().rule() == Rule::Lam ? "(" + to_string(p.fn()) + ")"
                                                   : to_string(p.fn());
      out += " " + to_string(p.sigma()) + "<";
      const auto c = p.copies();
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ",";
        out += to_string(c[i]);
      }
      return out + ">";
    }
  }
  return "?";
}

std::vector<SymmetryClass> partition_by_symmetry(const std::vector<Derivation>& ds) {
  std::vector<std::size_t> parent(ds.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = i + 1; j < ds.size(); ++j)
      if (find(i) != find(j) && symmetric(ds[i], ds[j])) parent[find(j)] = find(i);

  std::vector<SymmetryClass> out;
  std::vector<std::size_t> slot(ds.size(), ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const std::size_t r = find(i);
    if (slot[r] == ds.size()) {
      slot[r] = out.size();
      out.push_back({{}, 0});
    }
    out[slot[r]].members.push_back(ds[i]);
  }
  for (auto& c : out)
    c.m_class = enumerate_derivation_morphisms(c.members.front(), c.members.front()).size();
  return out;
}

}  // namespace thinspan
