#include <algorithm>
#include <cctype>

#include "thinspan/derivation.hpp"

namespace thinspan {

namespace {

ResourceContext single(const TypingContext& scope, const std::string& x, const IType& alpha) {
  const auto idx = scope.index_of(x);
  if (!idx) throw TypeError("unbound variable " + x);
  std::vector<ResourceBinding> bs;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    SeqType seq;
    if (i == *idx) seq.push_back(alpha);
    bs.push_back({scope[i].name, std::move(seq), scope[i].type});
  }
  return ResourceContext(std::move(bs));
}

ResourceContext drop_last(const ResourceContext& ctx) {
  auto bs = ctx.bindings();
  bs.pop_back();
  return ResourceContext(std::move(bs));
}

}  // namespace

Derivation Derivation::var(const TypingContext& scope, const Term& x, const IType& alpha) {
  if (x.kind() != TermKind::Var) throw Error("variable rule on a non-variable term");
  return Derivation(Node{Rule::Var, x, single(scope, x.name(), alpha), alpha, {}});
}

Derivation Derivation::app(const Term& term, Derivation fn, std::vector<Derivation> args) {
  if (!fn.type().is_arrow()) throw RefinementError("applying a derivation of type *");
  const SeqType& dom = fn.type().domain();
  if (dom.size() != args.size())
    throw RefinementError("argument count " + std::to_string(args.size()) +
                          " does not match domain " + to_string(dom));
  ResourceContext ctx = fn.ctx();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].type() != dom[i])
      throw RefinementError("argument type " + to_string(args[i].type()) +
                            " does not match " + to_string(dom[i]));
    ctx = concat_ctx(ctx, args[i].ctx());
  }
  IType type = fn.type().codomain();
  std::vector<Derivation> children;
  children.reserve(args.size() + 1);
  children.push_back(std::move(fn));
  for (auto& a : args) children.push_back(std::move(a));
  return Derivation(Node{Rule::App, term, std::move(ctx), std::move(type), std::move(children)});
}

Derivation Derivation::lam(const Term& term, Derivation body) {
  const auto& bctx = body.ctx();
  if (bctx.size() == 0 || bctx[bctx.size() - 1].name != term.binder())
    throw Error("abstraction over a body whose scope does not end in the binder");
  IType type = IType::arrow(bctx.seq(bctx.size() - 1), body.type());
  return Derivation(Node{Rule::Lam, term, drop_last(bctx), std::move(type), {std::move(body)}});
}

bool operator==(const Derivation& a, const Derivation& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.rule == y.rule && x.type == y.type && x.ctx == y.ctx && x.term == y.term &&
         x.children == y.children;
}

// --- checking ----------------------------------------------------------------

namespace {

CheckResult fail(const Derivation& d, const std::string& why) {
  return {false, why + " at " + to_string(d.term())};
}

CheckResult check_node(const Derivation& d, const TypingContext& scope) {
  if (d.ctx().underlying() != scope) return fail(d, "context is not over the scope");
  switch (d.rule()) {
    case Rule::Var: {
      if (d.term().kind() != TermKind::Var) return fail(d, "variable rule on non-variable");
      if (!d.children().empty()) return fail(d, "variable rule with premises");
      const auto idx = scope.index_of(d.term().name());
      if (!idx) return fail(d, "unbound variable");
      if (!refines(d.type(), scope[*idx].type)) return fail(d, "type does not refine variable");
      for (std::size_t i = 0; i < scope.size(); ++i) {
        const SeqType want = i == *idx ? SeqType{d.type()} : SeqType{};
        if (d.ctx().seq(i) != want) return fail(d, "variable rule context mismatch");
      }
      return {};
    }
    case Rule::App: {
      if (d.term().kind() != TermKind::App) return fail(d, "application rule on non-application");
      if (d.children().empty()) return fail(d, "application rule without function premise");
      const Derivation& fn = d.fn();
      if (!(fn.term() == d.term().fn())) return fail(d, "function premise has wrong subject");
      if (!fn.type().is_arrow()) return fail(d, "function premise is not an arrow");
      const SeqType& dom = fn.type().domain();
      if (dom.size() != d.args().size()) return fail(d, "argument count mismatch");
      if (fn.type().codomain() != d.type()) return fail(d, "result type mismatch");
      ResourceContext ctx = fn.ctx();
      for (std::size_t i = 0; i < dom.size(); ++i) {
        const Derivation& a = d.args()[i];
        if (!(a.term() == d.term().arg())) return fail(d, "argument premise has wrong subject");
        if (a.type() != dom[i]) return fail(d, "argument type mismatch");
        if (a.ctx().underlying() != scope) return fail(d, "argument context is not over the scope");
        ctx = concat_ctx(ctx, a.ctx());
      }
      if (ctx != d.ctx()) return fail(d, "context is not the concatenation of the premises");
      for (const auto& c : d.children())
        if (auto r = check_node(c, scope); !r) return r;
      return {};
    }
    case Rule::Lam: {
      if (d.term().kind() != TermKind::Lam) return fail(d, "abstraction rule on non-abstraction");
      if (d.children().size() != 1) return fail(d, "abstraction rule needs one premise");
      const Derivation& b = d.body();
      if (!(b.term() == d.term().body())) return fail(d, "body premise has wrong subject");
      const auto& ann = d.term().annotation();
      if (!ann) return fail(d, "unannotated binder");
      const TypingContext inner = scope.extended(d.term().binder(), *ann);
      if (b.ctx().underlying() != inner) return fail(d, "body context is not over the extended scope");
      if (drop_last(b.ctx()) != d.ctx()) return fail(d, "context does not match the body's");
      if (d.type() != IType::arrow(b.ctx().seq(inner.size() - 1), b.type()))
        return fail(d, "type is not the binder's sequence into the body type");
      return check_node(b, inner);
    }
  }
  return fail(d, "unknown rule");
}

}  // namespace

CheckResult check_derivation(const Derivation& d) {
  if (!d.node()) return {false, "empty derivation"};
  try {
    const TypingContext scope = d.ctx().underlying();
    if (auto r = check_node(d, scope); !r) return r;
    if (!refines(d.type(), typecheck(scope, d.term())))
      return fail(d, "type does not refine the subject's simple type");
    return {};
  } catch (const Error& e) {
    return {false, e.what()};
  }
}

// --- resource terms ----------------------------------------------------------

ResourceTerm ResourceTerm::var(std::string x, IType label) {
  ResourceTerm r;
  r.node_ = std::make_shared<const Node>(Node{Rule::Var, std::move(x), std::move(label), {}});
  return r;
}

ResourceTerm ResourceTerm::lam(std::string x, ResourceTerm body) {
  ResourceTerm r;
  r.node_ = std::make_shared<const Node>(Node{Rule::Lam, std::move(x), {}, {std::move(body)}});
  return r;
}

ResourceTerm ResourceTerm::app(ResourceTerm fn, std::vector<ResourceTerm> args) {
  std::vector<ResourceTerm> children{std::move(fn)};
  for (auto& a : args) children.push_back(std::move(a));
  ResourceTerm r;
  r.node_ = std::make_shared<const Node>(Node{Rule::App, {}, {}, std::move(children)});
  return r;
}

bool operator==(const ResourceTerm& a, const ResourceTerm& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return a.node_->rule == b.node_->rule && a.node_->name == b.node_->name &&
         a.node_->label == b.node_->label && a.node_->children == b.node_->children;
}

std::string to_string(const ResourceTerm& r) {
  switch (r.rule()) {
    case Rule::Var:
      return r.name() + "^{" + to_string(r.label()) + "}";
    case Rule::Lam:
      return "\\" + r.name() + ". " + to_string(r.body());
    case Rule::App: {
      std::string out = r.fn().rule() == Rule::Lam ? "(" + to_string(r.fn()) + ")"
                                                   : to_string(r.fn());
      out += " <";
      for (std::size_t i = 0; i < r.args().size(); ++i) {
        if (i) out += ",";
        out += to_string(r.args()[i]);
      }
      return out + ">";
    }
  }
  return "?";
}

namespace {

class ResourceParser {
 public:
  explicit ResourceParser(std::string_view s) : s_(s) {}

  ResourceTerm parse() {
    ResourceTerm r = term();
    skip();
    if (pos_ != s_.size()) throw SyntaxError("trailing input in resource term", pos_);
    return r;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) throw SyntaxError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  std::string ident() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
      ++pos_;
    if (start == pos_) throw SyntaxError("expected identifier", pos_);
    return std::string(s_.substr(start, pos_ - start));
  }

  ResourceTerm term() {
    if (peek('\\')) {
      ++pos_;
      std::string x = ident();
      expect('.');
      return ResourceTerm::lam(std::move(x), term());
    }
    ResourceTerm r = atom();
    while (peek('<')) {
      ++pos_;
      std::vector<ResourceTerm> args;
      if (!peek('>')) {
        args.push_back(term());
        while (peek(',')) {
          ++pos_;
          args.push_back(term());
        }
      }
      expect('>');
      r = ResourceTerm::app(std::move(r), std::move(args));
    }
    return r;
  }

  ResourceTerm atom() {
    if (peek('(')) {
      ++pos_;
      ResourceTerm r = term();
      expect(')');
      return r;
    }
    std::string x = ident();
    expect('^');
    expect('{');
    const std::size_t start = pos_;
    int depth = 1;
    while (pos_ < s_.size() && depth > 0) {
      if (s_[pos_] == '{') ++depth;
      if (s_[pos_] == '}') --depth;
      if (depth > 0) ++pos_;
    }
    if (depth != 0) throw SyntaxError("unterminated label", start);
    IType label;
    try {
      label = parse_itype(s_.substr(start, pos_ - start));
    } catch (const SyntaxError& e) {
      throw SyntaxError("bad label", start + e.position());
    }
    ++pos_;
    return ResourceTerm::var(std::move(x), std::move(label));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

ResourceTerm parse_resource_term(std::string_view text) { return ResourceParser(text).parse(); }

ResourceTerm derivation_to_resource(const Derivation& d) {
  switch (d.rule()) {
    case Rule::Var:
      return ResourceTerm::var(d.term().name(), d.type());
    case Rule::Lam:
      return ResourceTerm::lam(d.term().binder(), derivation_to_resource(d.body()));
    case Rule::App: {
      std::vector<ResourceTerm> args;
      for (const auto& a : d.args()) args.push_back(derivation_to_resource(a));
      return ResourceTerm::app(derivation_to_resource(d.fn()), std::move(args));
    }
  }
  throw Error("unknown rule");
}

namespace {

Derivation rebuild(const TypingContext& scope, const Term& m, const ResourceTerm& r) {
  switch (r.rule()) {
    case Rule::Var: {
      if (m.kind() != TermKind::Var || m.name() != r.name())
        throw RefinementError("resource variable " + r.name() + " does not match " + to_string(m));
      const SimpleType* t = scope.lookup(m.name());
      if (!t) throw TypeError("unbound variable " + m.name());
      if (!refines(r.label(), *t))
        throw RefinementError("label " + to_string(r.label()) + " does not refine " +
                              to_string(*t) + " at " + m.name());
      return Derivation::var(scope, m, r.label());
    }
    case Rule::Lam: {
      if (m.kind() != TermKind::Lam || m.binder() != r.name())
        throw RefinementError("resource abstraction does not match " + to_string(m));
      if (!m.annotation()) throw TypeError("unannotated binder " + m.binder());
      return Derivation::lam(m, rebuild(scope.extended(m.binder(), *m.annotation()), m.body(),
                                        r.body()));
    }
    case Rule::App: {
      if (m.kind() != TermKind::App)
        throw RefinementError("resource application does not match " + to_string(m));
      Derivation fn = rebuild(scope, m.fn(), r.fn());
      std::vector<Derivation> args;
      for (const auto& a : r.args()) args.push_back(rebuild(scope, m.arg(), a));
      return Derivation::app(m, std::move(fn), std::move(args));
    }
  }
  throw Error("unknown rule");
}

}  // namespace

Reconstructed resource_to_derivation(const TypingContext& ctx, const Term& m,
                                     const ResourceTerm& r) {
  Derivation d = rebuild(ctx, m, r);
  return {d.ctx(), d.type(), d};
}

std::string serialize(const Derivation& d) {
  return to_string(d.ctx()) + " |- " + to_string(derivation_to_resource(d)) + " : " +
         to_string(d.type());
}

std::string to_string(const Completeness& c) {
  if (const auto* b = std::get_if<BoundedAt>(&c)) return "bounded_at(" + std::to_string(b->budget) + ")";
  return "exact";
}

// --- Ω substitution ----------------------------------------------------------

namespace {

ResourceTerm replace_occurrences(const ResourceTerm& r, const std::string& x,
                                 std::span<const ResourceTerm> values, std::size_t& next) {
  switch (r.rule()) {
    case Rule::Var: {
      if (r.name() != x) return r;
      if (next >= values.size())
        throw Error("more occurrences of " + x + " than arguments");
      const ResourceTerm& v = values[next++];
      return v;
    }
    case Rule::Lam:
      if (r.name() == x) return r;
      return ResourceTerm::lam(r.name(), replace_occurrences(r.body(), x, values, next));
    case Rule::App: {
      ResourceTerm fn = replace_occurrences(r.fn(), x, values, next);
      std::vector<ResourceTerm> args;
      for (const auto& a : r.args()) args.push_back(replace_occurrences(a, x, values, next));
      return ResourceTerm::app(std::move(fn), std::move(args));
    }
  }
  throw Error("unknown rule");
}

void occurrence_labels(const ResourceTerm& r, const std::string& x, std::vector<IType>& out) {
  switch (r.rule()) {
    case Rule::Var:
      if (r.name() == x) out.push_back(r.label());
      return;
    case Rule::Lam:
      if (r.name() != x) occurrence_labels(r.body(), x, out);
      return;
    case Rule::App:
      occurrence_labels(r.fn(), x, out);
      for (const auto& a : r.args()) occurrence_labels(a, x, out);
      return;
  }
}

// The type of a resource term is determined by its labels: variables carry
// theirs, abstractions take the labels of their bound occurrences.
IType synthesize(const ResourceTerm& r) {
  switch (r.rule()) {
    case Rule::Var:
      return r.label();
    case Rule::Lam: {
      std::vector<IType> labels;
      occurrence_labels(r.body(), r.name(), labels);
      return IType::arrow(std::move(labels), synthesize(r.body()));
    }
    case Rule::App: {
      const IType f = synthesize(r.fn());
      if (!f.is_arrow()) throw Error("applying a resource term of type *");
      return f.codomain();
    }
  }
  throw Error("unknown rule");
}

}  // namespace

ResourceTerm omega_substitute(const ResourceTerm& r) {
  if (r.rule() != Rule::App || r.fn().rule() != Rule::Lam)
    throw Error("not a toplevel redex");
  const std::string& x = r.fn().name();
  const ResourceTerm& body = r.fn().body();
  std::vector<IType> labels;
  occurrence_labels(body, x, labels);
  if (labels.size() != r.args().size())
    throw Error(std::to_string(r.args().size()) + " arguments for " +
                std::to_string(labels.size()) + " occurrences of " + x);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (synthesize(r.args()[i]) != labels[i])
      throw Error("argument " + std::to_string(i + 1) + " does not match the label of occurrence " +
                  std::to_string(i + 1) + " of " + x);
  std::size_t next = 0;
  return replace_occurrences(body, x, r.args(), next);
}

// --- multiset collapse -------------------------------------------------------

MRTerm::MRTerm(Node n) : node_(std::make_shared<const Node>(std::move(n))) {
  const Node& x = *node_;
  switch (x.rule) {
    case Rule::Var:
      text_ = x.name + "^{" + to_string(x.label) + "}";
      break;
    case Rule::Lam:
      text_ = "\\" + x.name + ". " + x.children.at(0).text();
      break;
    case Rule::App: {
      const MRTerm& fn = x.children.at(0);
      text_ = fn.rule() == Rule::Lam ? "(" + fn.text() + ")" : fn.text();
      text_ += " [";
      for (std::size_t i = 1; i < x.children.size(); ++i) {
        if (i > 1) text_ += ",";
        text_ += x.children[i].text();
      }
      text_ += "]";
      break;
    }
  }
}

MRTerm multiset_collapse_term(const ResourceTerm& r) {
  switch (r.rule()) {
    case Rule::Var:
      return MRTerm({Rule::Var, r.name(), collapse_multiset(r.label()), {}});
    case Rule::Lam:
      return MRTerm({Rule::Lam, r.name(), {}, {multiset_collapse_term(r.body())}});
    case Rule::App: {
      std::vector<MRTerm> args;
      for (const auto& a : r.args()) args.push_back(multiset_collapse_term(a));
      std::sort(args.begin(), args.end());
      std::vector<MRTerm> children{multiset_collapse_term(r.fn())};
      children.insert(children.end(), args.begin(), args.end());
      return MRTerm({Rule::App, {}, {}, std::move(children)});
    }
  }
  throw Error("unknown rule");
}

std::string to_string(const MRTerm& t) { return t.text(); }

}  // namespace thinspan
