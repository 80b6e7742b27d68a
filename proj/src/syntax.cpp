#include "thinspan/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "thinspan/error.hpp"

namespace thinspan {

// ---------------------------------------------------------------- types

SimpleType SimpleType::arrow(SimpleType domain, SimpleType codomain) {
  SimpleType t;
  t.node_ = std::make_shared<const Arrow>(
      Arrow{std::move(domain), std::move(codomain)});
  return t;
}

const SimpleType& SimpleType::domain() const {
  if (!node_) throw TypeError("base type o has no domain");
  return node_->domain;
}

const SimpleType& SimpleType::codomain() const {
  if (!node_) throw TypeError("base type o has no codomain");
  return node_->codomain;
}

std::size_t SimpleType::arity() const {
  std::size_t n = 0;
  for (const SimpleType* t = this; t->is_arrow(); t = &t->codomain()) ++n;
  return n;
}

bool operator==(const SimpleType& a, const SimpleType& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return a.node_->domain == b.node_->domain &&
         a.node_->codomain == b.node_->codomain;
}

std::string to_string(const SimpleType& t) {
  if (t.is_base()) return "o";
  std::string dom = to_string(t.domain());
  if (t.domain().is_arrow()) dom = "(" + dom + ")";
  return dom + " -> " + to_string(t.codomain());
}

// ---------------------------------------------------------------- lexer

namespace {

enum class Tok { Ident, Lambda, Dot, Colon, LParen, RParen, Arrow, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    switch (c) {
      case '\\': out.push_back({Tok::Lambda, "\\", start}); ++i; break;
      case '.': out.push_back({Tok::Dot, ".", start}); ++i; break;
      case ':': out.push_back({Tok::Colon, ":", start}); ++i; break;
      case '(': out.push_back({Tok::LParen, "(", start}); ++i; break;
      case ')': out.push_back({Tok::RParen, ")", start}); ++i; break;
      case ',': out.push_back({Tok::Comma, ",", start}); ++i; break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          out.push_back({Tok::Arrow, "->", start});
          i += 2;
          break;
        }
        [[fallthrough]];
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", i);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : toks_(lex(s)) {}

  SimpleType type() {
    SimpleType dom = type_atom();
    if (peek().kind == Tok::Arrow) {
      next();
      return SimpleType::arrow(dom, type());
    }
    return dom;
  }

  Term term() {
    if (peek().kind == Tok::Lambda) return lambda();
    Term t = atom();
    while (true) {
      Tok k = peek().kind;
      if (k == Tok::Ident || k == Tok::LParen) {
        t = Term::app(t, atom());
      } else if (k == Tok::Lambda) {
        t = Term::app(t, lambda());
      } else {
        return t;
      }
    }
  }

  TypingContext context() {
    std::vector<Binding> bs;
    if (peek().kind == Tok::End) return TypingContext{};
    while (true) {
      std::string name = expect(Tok::Ident, "variable").text;
      expect(Tok::Colon, "':'");
      bs.push_back({name, type()});
      if (peek().kind != Tok::Comma) break;
      next();
    }
    return TypingContext(std::move(bs));
  }

  void finish() {
    if (peek().kind != Tok::End)
      throw SyntaxError("unexpected '" + peek().text + "'", peek().pos);
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k)
      throw SyntaxError(std::string("expected ") + what, peek().pos);
    return next();
  }

  SimpleType type_atom() {
    if (peek().kind == Tok::LParen) {
      next();
      SimpleType t = type();
      expect(Tok::RParen, "')'");
      return t;
    }
    const Token& t = expect(Tok::Ident, "simple type");
    if (t.text != "o") throw SyntaxError("unknown base type '" + t.text + "'", t.pos);
    return SimpleType::base();
  }

  Term lambda() {
    expect(Tok::Lambda, "'\\'");
    std::string x = expect(Tok::Ident, "binder").text;
    std::optional<SimpleType> ann;
    if (peek().kind == Tok::Colon) {
      next();
      ann = type();
    }
    expect(Tok::Dot, "'.'");
    return Term::lam(x, ann, term());
  }

  Term atom() {
    if (peek().kind == Tok::LParen) {
      next();
      Term t = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    return Term::var(expect(Tok::Ident, "term").text);
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

SimpleType parse_simple_type(std::string_view text) {
  Parser p(text);
  SimpleType t = p.type();
  p.finish();
  return t;
}

// ---------------------------------------------------------------- contexts

TypingContext::TypingContext(std::vector<Binding> bindings)
    : bindings_(std::move(bindings)) {
  for (std::size_t i = 0; i < bindings_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (bindings_[i].name == bindings_[j].name)
        throw TypeError("duplicate variable '" + bindings_[i].name +
                        "' in context");
}

std::optional<std::size_t> TypingContext::index_of(std::string_view name) const {
  // Innermost binding wins.
  for (std::size_t i = bindings_.size(); i-- > 0;)
    if (bindings_[i].name == name) return i;
  return std::nullopt;
}

const SimpleType* TypingContext::lookup(std::string_view name) const {
  auto i = index_of(name);
  return i ? &bindings_[*i].type : nullptr;
}

TypingContext TypingContext::extended(std::string name, SimpleType type) const {
  TypingContext c;
  c.bindings_ = bindings_;
  c.bindings_.push_back({std::move(name), std::move(type)});
  return c;
}

TypingContext parse_context(std::string_view text) {
  Parser p(text);
  TypingContext c = p.context();
  p.finish();
  return c;
}

std::string to_string(const TypingContext& ctx) {
  std::string out;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) out += ", ";
    out += ctx[i].name + ":" + to_string(ctx[i].type);
  }
  return out;
}

// ---------------------------------------------------------------- terms

Term Term::var(std::string name) {
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::Var, std::move(name), std::nullopt, {}, {}}));
}

Term Term::app(Term fn, Term arg) {
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::App, {}, std::nullopt, std::move(fn), std::move(arg)}));
}

Term Term::lam(std::string binder, std::optional<SimpleType> annotation,
               Term body) {
  return Term(std::make_shared<const TermNode>(TermNode{
      TermKind::Lam, std::move(binder), std::move(annotation), std::move(body), {}}));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Term& Term::fn() const { return node_->left; }
const Term& Term::arg() const { return node_->right; }
const std::string& Term::binder() const { return node_->name; }
const std::optional<SimpleType>& Term::annotation() const {
  return node_->annotation;
}
const Term& Term::body() const { return node_->left; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var: return a.name() == b.name();
    case TermKind::App: return a.fn() == b.fn() && a.arg() == b.arg();
    case TermKind::Lam:
      return a.binder() == b.binder() && a.annotation() == b.annotation() &&
             a.body() == b.body();
  }
  return false;
}

namespace {

bool needs_parens_as_arg(const Term& t) { return t.kind() != TermKind::Var; }

}  // namespace

std::string to_string(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var: return t.name();
    case TermKind::Lam: {
      std::string s = "\\" + t.binder();
      if (t.annotation()) s += ":" + to_string(*t.annotation());
      return s + ". " + to_string(t.body());
    }
    case TermKind::App: {
      std::string f = to_string(t.fn());
      if (t.fn().kind() == TermKind::Lam) f = "(" + f + ")";
      std::string a = to_string(t.arg());
      if (needs_parens_as_arg(t.arg())) a = "(" + a + ")";
      return f + " " + a;
    }
  }
  return {};
}

std::set<std::string> free_variables(const Term& t) {
  std::set<std::string> out;
  std::function<void(const Term&, std::vector<std::string>&)> go =
      [&](const Term& u, std::vector<std::string>& bound) {
        switch (u.kind()) {
          case TermKind::Var:
            if (std::find(bound.begin(), bound.end(), u.name()) == bound.end())
              out.insert(u.name());
            break;
          case TermKind::App:
            go(u.fn(), bound);
            go(u.arg(), bound);
            break;
          case TermKind::Lam:
            bound.push_back(u.binder());
            go(u.body(), bound);
            bound.pop_back();
            break;
        }
      };
  std::vector<std::string> bound;
  go(t, bound);
  return out;
}

namespace {

void collect_names(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Var: out.insert(t.name()); break;
    case TermKind::App:
      collect_names(t.fn(), out);
      collect_names(t.arg(), out);
      break;
    case TermKind::Lam:
      out.insert(t.binder());
      collect_names(t.body(), out);
      break;
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
  std::string stem = base;
  // Strip an existing numeric suffix so renaming x_1 yields x_2, not x_1_1.
  if (auto us = stem.rfind('_'); us != std::string::npos && us + 1 < stem.size() &&
      std::all_of(stem.begin() + static_cast<long>(us) + 1, stem.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    stem = stem.substr(0, us);
  if (!used.count(stem)) return stem;
  for (int k = 1;; ++k) {
    std::string cand = stem + "_" + std::to_string(k);
    if (!used.count(cand)) return cand;
  }
}

}  // namespace

Term rename_apart(const Term& t, const std::set<std::string>& reserved) {
  std::set<std::string> used = free_variables(t);
  used.insert(reserved.begin(), reserved.end());
  std::map<std::string, std::vector<std::string>> scope;
  std::function<Term(const Term&)> go = [&](const Term& u) -> Term {
    switch (u.kind()) {
      case TermKind::Var: {
        auto it = scope.find(u.name());
        if (it != scope.end() && !it->second.empty())
          return Term::var(it->second.back());
        return u;
      }
      case TermKind::App: return Term::app(go(u.fn()), go(u.arg()));
      case TermKind::Lam: {
        std::string fresh = fresh_name(u.binder(), used);
        used.insert(fresh);
        scope[u.binder()].push_back(fresh);
        Term body = go(u.body());
        scope[u.binder()].pop_back();
        return Term::lam(fresh, u.annotation(), body);
      }
    }
    return u;
  };
  return go(t);
}

Term parse_term(std::string_view text) {
  Parser p(text);
  Term t = p.term();
  p.finish();
  return rename_apart(t);
}

bool alpha_equivalent(const Term& a, const Term& b) {
  std::vector<std::string> ba, bb;
  std::function<bool(const Term&, const Term&)> go = [&](const Term& x,
                                                         const Term& y) {
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case TermKind::Var: {
        auto ix = std::find(ba.rbegin(), ba.rend(), x.name());
        auto iy = std::find(bb.rbegin(), bb.rend(), y.name());
        bool fx = ix == ba.rend(), fy = iy == bb.rend();
        if (fx || fy) return fx && fy && x.name() == y.name();
        return (ix - ba.rbegin()) == (iy - bb.rbegin());
      }
      case TermKind::App: return go(x.fn(), y.fn()) && go(x.arg(), y.arg());
      case TermKind::Lam: {
        if (x.annotation() != y.annotation()) return false;
        ba.push_back(x.binder());
        bb.push_back(y.binder());
        bool r = go(x.body(), y.body());
        ba.pop_back();
        bb.pop_back();
        return r;
      }
    }
    return false;
  };
  return go(a, b);
}

Spine spine(const Term& t) {
  Spine s;
  Term cur = t;
  while (cur.kind() == TermKind::App) {
    s.args.push_back(cur.arg());
    cur = cur.fn();
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = cur;
  return s;
}

// ---------------------------------------------------------------- typing

namespace {

class Elaborator {
 public:
  Term check(const TypingContext& ctx, const Term& t, const SimpleType& expected) {
    if (t.kind() == TermKind::Lam) {
      if (!expected.is_arrow())
        throw TypeError("abstraction '" + to_string(t) + "' checked against o");
      if (t.annotation() && !(*t.annotation() == expected.domain()))
        throw TypeError("binder '" + t.binder() + "' annotated " +
                        to_string(*t.annotation()) + " but expected " +
                        to_string(expected.domain()));
      Term body = check(ctx.extended(t.binder(), expected.domain()), t.body(),
                        expected.codomain());
      return Term::lam(t.binder(), expected.domain(), body);
    }
    auto [term, type] = synth(ctx, t);
    if (!(type == expected))
      throw TypeError("'" + to_string(t) + "' has type " + to_string(type) +
                      " but " + to_string(expected) + " was expected");
    return term;
  }

  std::pair<Term, SimpleType> synth(const TypingContext& ctx, const Term& t) {
    switch (t.kind()) {
      case TermKind::Var: {
        const SimpleType* ty = ctx.lookup(t.name());
        if (!ty) throw TypeError("unbound variable '" + t.name() + "'");
        return {t, *ty};
      }
      case TermKind::Lam: {
        if (!t.annotation())
          throw TypeError("cannot infer the type of binder '" + t.binder() +
                          "' in '" + to_string(t) +
                          "'; annotate it or supply the term's type");
        auto [body, bt] = synth(ctx.extended(t.binder(), *t.annotation()), t.body());
        return {Term::lam(t.binder(), t.annotation(), body),
                SimpleType::arrow(*t.annotation(), bt)};
      }
      case TermKind::App: {
        const Term& f = t.fn();
        if (f.kind() == TermKind::Lam && !f.annotation()) {
          // Redex with an unannotated binder: the argument fixes its type.
          auto [arg, at] = synth(ctx, t.arg());
          auto [body, bt] = synth(ctx.extended(f.binder(), at), f.body());
          return {Term::app(Term::lam(f.binder(), at, body), arg), bt};
        }
        auto [fn, ft] = synth(ctx, f);
        if (!ft.is_arrow())
          throw TypeError("'" + to_string(f) + "' of type o is applied to '" +
                          to_string(t.arg()) + "'");
        Term arg = check(ctx, t.arg(), ft.domain());
        return {Term::app(fn, arg), ft.codomain()};
      }
    }
    throw TypeError("unreachable");
  }
};

}  // namespace

Term elaborate(const TypingContext& ctx, const Term& term,
               const std::optional<SimpleType>& expected) {
  Elaborator e;
  if (expected) return e.check(ctx, term, *expected);
  return e.synth(ctx, term).first;
}

SimpleType typecheck(const TypingContext& ctx, const Term& term) {
  Elaborator e;
  return e.synth(ctx, term).second;
}

// ---------------------------------------------------------------- reduction

bool is_beta_normal(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var: return true;
    case TermKind::Lam: return is_beta_normal(t.body());
    case TermKind::App:
      return t.fn().kind() != TermKind::Lam && is_beta_normal(t.fn()) &&
             is_beta_normal(t.arg());
  }
  return true;
}

Term substitute(const Term& t, const std::string& x, const Term& value) {
  const std::set<std::string> fv = free_variables(value);
  std::function<Term(const Term&)> go = [&](const Term& u) -> Term {
    switch (u.kind()) {
      case TermKind::Var: return u.name() == x ? value : u;
      case TermKind::App: return Term::app(go(u.fn()), go(u.arg()));
      case TermKind::Lam: {
        if (u.binder() == x) return u;
        if (!fv.count(u.binder())) return Term::lam(u.binder(), u.annotation(), go(u.body()));
        std::set<std::string> used = fv;
        collect_names(u.body(), used);
        used.insert(x);
        std::string fresh = fresh_name(u.binder(), used);
        Term body = substitute(u.body(), u.binder(), Term::var(fresh));
        return Term::lam(fresh, u.annotation(), go(body));
      }
    }
    return u;
  };
  return go(t);
}

namespace {

Term whnf(const Term& t) {
  if (t.kind() != TermKind::App) return t;
  Term f = whnf(t.fn());
  if (f.kind() == TermKind::Lam) return whnf(substitute(f.body(), f.binder(), t.arg()));
  return Term::app(f, t.arg());
}

Term normal_order(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var: return t;
    case TermKind::Lam:
      return Term::lam(t.binder(), t.annotation(), normal_order(t.body()));
    case TermKind::App: {
      Term f = whnf(t.fn());
      if (f.kind() == TermKind::Lam)
        return normal_order(substitute(f.body(), f.binder(), t.arg()));
      return Term::app(normal_order(f), normal_order(t.arg()));
    }
  }
  return t;
}

}  // namespace

Term beta_normalize(const Term& t) { return rename_apart(normal_order(t)); }

}  // namespace thinspan
