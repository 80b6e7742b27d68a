#pragma once

// Simply-typed λ-calculus: types, terms, parsing, typing, normalization.

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace thinspan {

class SimpleType {
 public:
  SimpleType() = default;  // the base type o
  static SimpleType base() { return {}; }
  static SimpleType arrow(SimpleType domain, SimpleType codomain);

  bool is_base() const { return node_ == nullptr; }
  bool is_arrow() const { return node_ != nullptr; }
  const SimpleType& domain() const;
  const SimpleType& codomain() const;

  /// Number of leading arrows.
  std::size_t arity() const;

  friend bool operator==(const SimpleType& a, const SimpleType& b);

 private:
  struct Arrow;
  std::shared_ptr<const Arrow> node_;
};

struct SimpleType::Arrow {
  SimpleType domain;
  SimpleType codomain;
};

std::string to_string(const SimpleType& t);
SimpleType parse_simple_type(std::string_view text);

class Term;

struct Binding {
  std::string name;
  SimpleType type;
  friend bool operator==(const Binding&, const Binding&) = default;
};

/// Ordered bindings with pairwise distinct variables.
class TypingContext {
 public:
  TypingContext() = default;
  explicit TypingContext(std::vector<Binding> bindings);

  const std::vector<Binding>& bindings() const { return bindings_; }
  std::size_t size() const { return bindings_.size(); }
  const Binding& operator[](std::size_t i) const { return bindings_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  const SimpleType* lookup(std::string_view name) const;

  TypingContext extended(std::string name, SimpleType type) const;

  friend bool operator==(const TypingContext&, const TypingContext&) = default;

 private:
  std::vector<Binding> bindings_;
};

/// Parses `x:T, y:T, ...`; the empty string is the empty context.
TypingContext parse_context(std::string_view text);
std::string to_string(const TypingContext& ctx);

enum class TermKind { Var, App, Lam };

struct TermNode;

/// Immutable λ-term. Nodes are shared; node identity is stable and is used
/// as a memoization key by the enumerators.
class Term {
 public:
  Term() = default;
  static Term var(std::string name);
  static Term app(Term fn, Term arg);
  static Term lam(std::string binder, std::optional<SimpleType> annotation,
                  Term body);

  TermKind kind() const;
  const std::string& name() const;    // Var
  const Term& fn() const;             // App
  const Term& arg() const;            // App
  const std::string& binder() const;  // Lam
  const std::optional<SimpleType>& annotation() const;  // Lam
  const Term& body() const;           // Lam

  const TermNode* node() const { return node_.get(); }
  explicit operator bool() const { return node_ != nullptr; }

  /// Syntactic equality including binder names and annotations.
  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermKind kind;
  std::string name;  // variable name or binder
  std::optional<SimpleType> annotation;
  Term left;   // App: function, Lam: body
  Term right;  // App: argument
};

/// Parses the concrete grammar; binders are renamed apart (Barendregt).
Term parse_term(std::string_view text);
std::string to_string(const Term& t);

std::set<std::string> free_variables(const Term& t);

/// Renames binders so that they are pairwise distinct and distinct from
/// every free variable and from `reserved`.
Term rename_apart(const Term& t, const std::set<std::string>& reserved = {});

bool alpha_equivalent(const Term& a, const Term& b);

/// Head-spine view: t = head a1 ... ak.
struct Spine {
  Term head;
  std::vector<Term> args;
};
Spine spine(const Term& t);

/// Unique simple type of `term` under `ctx`. Unannotated binders are
/// accepted when their type is forced by an argument (redex) position.
SimpleType typecheck(const TypingContext& ctx, const Term& term);

/// Annotates every binder. With `expected`, leading unannotated λs take
/// their types from it; otherwise annotations must be present or forced by
/// a redex argument. Throws TypeError.
Term elaborate(const TypingContext& ctx, const Term& term,
               const std::optional<SimpleType>& expected = std::nullopt);

bool is_beta_normal(const Term& t);

/// Normal-order (leftmost-outermost) normalization; the result is renamed
/// apart against the free variables of the input.
Term beta_normalize(const Term& t);

/// Capture-avoiding t[value/x].
Term substitute(const Term& t, const std::string& x, const Term& value);

}  // namespace thinspan
