#pragma once

// Rigid intersection-type derivations over a simply-typed subject term,
// their resource-term encoding, witness enumeration, and the morphisms
// between derivations of the same subject.

#include <map>
#include <memory>
#include <span>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "thinspan/rigidtypes.hpp"
#include "thinspan/symmetry.hpp"
#include "thinspan/syntax.hpp"

namespace thinspan {

enum class Rule { Var, App, Lam };

/// Immutable derivation tree. Every node records its subject subterm and
/// its conclusion (Θ, α); Θ ranges over the full scope at that node.
class Derivation {
 public:
  struct Node {
    Rule rule;
    Term term;
    ResourceContext ctx;
    IType type;
    std::vector<Derivation> children;  // App: fn, then arguments; Lam: body
  };

  Derivation() = default;
  explicit Derivation(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  /// x:⟨α⟩ and every other variable in `scope` empty; `x` is a Var term.
  static Derivation var(const TypingContext& scope, const Term& x, const IType& alpha);
  /// Conclusion Θ_fn ⧺ Θ_1 ⧺ … ⧺ Θ_n ⊢ M N : β. Throws RefinementError
  /// when the argument types do not match the function's domain.
  static Derivation app(const Term& term, Derivation fn, std::vector<Derivation> args);
  /// Discharges the last scope variable. Throws on a scope mismatch.
  static Derivation lam(const Term& term, Derivation body);

  Rule rule() const { return node_->rule; }
  const Term& term() const { return node_->term; }
  const ResourceContext& ctx() const { return node_->ctx; }
  const IType& type() const { return node_->type; }
  const Derivation& fn() const { return node_->children.at(0); }
  std::span<const Derivation> args() const {
    return std::span<const Derivation>(node_->children).subspan(1);
  }
  const Derivation& body() const { return node_->children.at(0); }
  const std::vector<Derivation>& children() const { return node_->children; }
  const Node* node() const { return node_.get(); }

  friend bool operator==(const Derivation& a, const Derivation& b);

 private:
  std::shared_ptr<const Node> node_;
};

struct CheckResult {
  bool ok = true;
  std::string diagnostic;  // first failing node, empty when ok
  explicit operator bool() const { return ok; }
};

/// True iff every node is an instance of a typing rule, including the
/// per-variable context concatenation order.
CheckResult check_derivation(const Derivation& d);

/// Rigid resource terms: x^α, λx.m, m⟨n1,…,nk⟩.
class ResourceTerm {
 public:
  struct Node {
    Rule rule;
    std::string name;  // variable or binder
    IType label;       // Var
    std::vector<ResourceTerm> children;  // App: fn then args; Lam: body
  };

  ResourceTerm() = default;
  static ResourceTerm var(std::string x, IType label);
  static ResourceTerm lam(std::string x, ResourceTerm body);
  static ResourceTerm app(ResourceTerm fn, std::vector<ResourceTerm> args);

  Rule rule() const { return node_->rule; }
  const std::string& name() const { return node_->name; }
  const IType& label() const { return node_->label; }
  const ResourceTerm& fn() const { return node_->children.at(0); }
  std::span<const ResourceTerm> args() const {
    return std::span<const ResourceTerm>(node_->children).subspan(1);
  }
  const ResourceTerm& body() const { return node_->children.at(0); }

  friend bool operator==(const ResourceTerm& a, const ResourceTerm& b);

 private:
  std::shared_ptr<const Node> node_;
};

std::string to_string(const ResourceTerm& r);
ResourceTerm parse_resource_term(std::string_view text);

ResourceTerm derivation_to_resource(const Derivation& d);

struct Reconstructed {
  ResourceContext ctx;
  IType type;
  Derivation derivation;
};

/// The unique derivation over subject `m` (binders annotated) whose
/// resource term is `r`. Throws RefinementError when none exists.
Reconstructed resource_to_derivation(const TypingContext& ctx, const Term& m,
                                     const ResourceTerm& r);

/// Canonical serialization of a derivation: its conclusion and resource
/// term. Used for deterministic ordering.
std::string serialize(const Derivation& d);

struct Exact {
  friend bool operator==(Exact, Exact) = default;
};
struct BoundedAt {
  int budget;
  friend bool operator==(BoundedAt, BoundedAt) = default;
};
using Completeness = std::variant<Exact, BoundedAt>;
std::string to_string(const Completeness& c);

struct WitnessSet {
  TypingContext ctx;
  Term term;
  SimpleType simple_type;
  RigidPoint point;
  std::vector<Derivation> derivations;  // sorted by serialize()
  Completeness completeness;
};

/// Memoizing enumerator for one subject term. Not thread-safe; use one
/// instance per thread.
class WitnessEnumerator {
 public:
  /// `term` must typecheck under `ctx`; unannotated binders are annotated
  /// by elaboration.
  WitnessEnumerator(TypingContext ctx, const Term& term, std::optional<int> budget);

  const TypingContext& ctx() const { return ctx_; }
  const Term& term() const { return term_; }
  const SimpleType& simple_type() const { return type_; }
  bool normal() const { return normal_; }
  Completeness completeness() const;

  /// All derivations concluding exactly `point`, sorted by serialize().
  std::vector<Derivation> at(const RigidPoint& point);

 private:
  using Key = std::tuple<const TermNode*, std::string, std::string>;

  const std::vector<Derivation>& enumerate(const Term& m, const ResourceContext& theta,
                                           const IType& alpha);
  std::vector<Derivation> enumerate_spine(const Term& m, const ResourceContext& theta,
                                          const IType& alpha);
  std::vector<Derivation> enumerate_redex(const Term& m, const ResourceContext& theta,
                                          const IType& alpha);
  /// Every way to split `rest` into consecutive per-variable segments, one
  /// per requested (argument, type) copy, with a derivation for each.
  void distribute(const std::vector<std::pair<Term, IType>>& copies, std::size_t i,
                  const ResourceContext& rest, std::vector<Derivation>& acc,
                  std::vector<std::vector<Derivation>>& out);
  /// Every split of `rest` into `n` consecutive segments, each with a
  /// derivation of `arg` at some type; types guessed within the budget.
  void distribute_guessed(const Term& arg, std::size_t n, const ResourceContext& rest,
                          std::vector<Derivation>& acc,
                          std::vector<std::vector<Derivation>>& out);
  const std::vector<IType>& candidates(const SimpleType& a);
  SimpleType type_of(const Term& m, const TypingContext& scope);
  /// Scope positions that `m` can use: the innermost binding of each of
  /// its free variables.
  std::vector<bool> live(const Term& m, const TypingContext& scope);

  TypingContext ctx_;
  Term term_;
  SimpleType type_;
  std::optional<int> budget_;
  bool normal_;
  std::map<Key, std::vector<Derivation>> memo_;
  std::map<std::string, std::vector<IType>> candidates_;
  std::map<std::pair<const TermNode*, std::string>, SimpleType> types_;
  std::map<const TermNode*, std::set<std::string>> free_;
};

/// Throws BudgetRequired when `m` has a redex and no budget is given.
WitnessSet enumerate_witnesses(const TypingContext& ctx, const Term& m,
                               const RigidPoint& point, std::optional<int> budget);

/// A morphism between two derivations of the same subject.
class DerivationMorphism {
 public:
  struct Node {
    Rule rule;
    Term term;
    TypingContext scope;
    ITMorphism phi;                             // Var: leaf morphism; otherwise result morphism
    CtxMorphism xi;                             // context morphism
    Permutation sigma;                          // App: permutation of the argument copies
    std::vector<DerivationMorphism> children;   // App: fn then per-copy morphisms; Lam: body
  };

  DerivationMorphism() = default;
  static DerivationMorphism var(const TypingContext& scope, const Term& term, ITMorphism phi);
  /// `sigma` must be the permutation of fn's domain morphism and child i
  /// must carry that morphism's i-th component.
  static DerivationMorphism app(const Term& term, DerivationMorphism fn, Permutation sigma,
                                std::vector<DerivationMorphism> copies);
  static DerivationMorphism lam(const Term& term, DerivationMorphism body);

  Rule rule() const { return node_->rule; }
  const Term& term() const { return node_->term; }
  const TypingContext& scope() const { return node_->scope; }
  const ITMorphism& phi() const { return node_->phi; }
  const CtxMorphism& xi() const { return node_->xi; }
  const Permutation& sigma() const { return node_->sigma; }
  const DerivationMorphism& fn() const { return node_->children.at(0); }
  std::span<const DerivationMorphism> copies() const {
    return std::span<const DerivationMorphism>(node_->children).subspan(1);
  }
  const DerivationMorphism& body() const { return node_->children.at(0); }

  friend bool operator==(const DerivationMorphism& a, const DerivationMorphism& b);

 private:
  std::shared_ptr<const Node> node_;
};

Derivation src(const DerivationMorphism& p);
Derivation tgt(const DerivationMorphism& p);

/// Throws Error when the derivations have different subjects.
std::vector<DerivationMorphism> enumerate_derivation_morphisms(const Derivation& d1,
                                                               const Derivation& d2);
bool symmetric(const Derivation& d1, const Derivation& d2);

/// p2 ∘ p1. Throws Error when tgt(p1) ≠ src(p2).
DerivationMorphism compose(const DerivationMorphism& p2, const DerivationMorphism& p1);
DerivationMorphism identity_morphism(const Derivation& d);
DerivationMorphism invert(const DerivationMorphism& p);

std::string to_string(const DerivationMorphism& p);

struct SymmetryClass {
  std::vector<Derivation> members;
  BigInt m_class;  // endomorphisms of the first member
};

std::vector<SymmetryClass> partition_by_symmetry(const std::vector<Derivation>& ds);

/// Toplevel redex (λx.m)⟨n1..nk⟩ ↦ m with the i-th occurrence of x (left to
/// right) replaced by ni. Throws Error on count or label mismatch.
ResourceTerm omega_substitute(const ResourceTerm& r);

/// Resource terms with every sequence collapsed to a multiset, arguments
/// stored in canonical order.
class MRTerm {
 public:
  struct Node {
    Rule rule;
    std::string name;
    MIType label;
    std::vector<MRTerm> children;  // App: fn then sorted args; Lam: body
  };
  MRTerm() = default;
  explicit MRTerm(Node n);
  Rule rule() const { return node_->rule; }
  const Node& node() const { return *node_; }
  const std::string& text() const { return text_; }
  friend bool operator==(const MRTerm& a, const MRTerm& b) { return a.text_ == b.text_; }
  friend auto operator<=>(const MRTerm& a, const MRTerm& b) { return a.text_ <=> b.text_; }

 private:
  std::shared_ptr<const Node> node_;
  std::string text_;
};

MRTerm multiset_collapse_term(const ResourceTerm& r);
std::string to_string(const MRTerm& t);

}  // namespace thinspan
