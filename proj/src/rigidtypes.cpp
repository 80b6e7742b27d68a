#include "thinspan/rigidtypes.hpp"

#include <algorithm>
#include <cctype>

#include "thinspan/error.hpp"

namespace thinspan {

// ---------------------------------------------------------------- IType

IType IType::arrow(SeqType domain, IType codomain) {
  IType t;
  t.node_ = std::make_shared<const Arrow>(Arrow{std::move(domain), std::move(codomain)});
  return t;
}

const SeqType& IType::domain() const {
  if (!node_) throw RefinementError("* has no domain");
  return node_->domain;
}

const IType& IType::codomain() const {
  if (!node_) throw RefinementError("* has no codomain");
  return node_->codomain;
}

bool operator==(const IType& a, const IType& b) {
  return compare_it(a, b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const IType& a, const IType& b) {
  return compare_it(a, b);
}

std::strong_ordering compare_seq(const SeqType& a, const SeqType& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (auto c = compare_it(a[i], b[i]); c != 0) return c;
  return std::strong_ordering::equal;
}

std::strong_ordering compare_it(const IType& a, const IType& b) {
  if (a.is_star() || b.is_star()) return b.is_star() <=> a.is_star();
  if (auto c = compare_seq(a.domain(), b.domain()); c != 0) return c;
  return compare_it(a.codomain(), b.codomain());
}

// ---------------------------------------------------------------- MIType

MIType MIType::arrow(MultisetType domain, MIType codomain) {
  std::sort(domain.begin(), domain.end());
  MIType t;
  t.node_ = std::make_shared<const Arrow>(Arrow{std::move(domain), std::move(codomain)});
  return t;
}

const MultisetType& MIType::domain() const {
  if (!node_) throw RefinementError("* has no domain");
  return node_->domain;
}

const MIType& MIType::codomain() const {
  if (!node_) throw RefinementError("* has no codomain");
  return node_->codomain;
}

bool operator==(const MIType& a, const MIType& b) {
  return compare_mit(a, b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const MIType& a, const MIType& b) {
  return compare_mit(a, b);
}

std::strong_ordering compare_mit(const MIType& a, const MIType& b) {
  if (a.is_star() || b.is_star()) return b.is_star() <=> a.is_star();
  const auto& da = a.domain();
  const auto& db = b.domain();
  if (auto c = da.size() <=> db.size(); c != 0) return c;
  for (std::size_t i = 0; i < da.size(); ++i)
    if (auto c = compare_mit(da[i], db[i]); c != 0) return c;
  return compare_mit(a.codomain(), b.codomain());
}

MultisetType make_multiset(std::vector<MIType> elems) {
  std::sort(elems.begin(), elems.end());
  return elems;
}

MultisetType multiset_sum(const MultisetType& a, const MultisetType& b) {
  MultisetType out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// ---------------------------------------------------------------- refinement

bool refines(const IType& alpha, const SimpleType& a) {
  if (alpha.is_star()) return a.is_base();
  if (!a.is_arrow()) return false;
  return refines_seq(alpha.domain(), a.domain()) &&
         refines(alpha.codomain(), a.codomain());
}

bool refines_seq(const SeqType& seq, const SimpleType& a) {
  return std::all_of(seq.begin(), seq.end(),
                     [&](const IType& t) { return refines(t, a); });
}

bool refines(const MIType& alpha, const SimpleType& a) {
  if (alpha.is_star()) return a.is_base();
  if (!a.is_arrow()) return false;
  return refines_multiset(alpha.domain(), a.domain()) &&
         refines(alpha.codomain(), a.codomain());
}

bool refines_multiset(const MultisetType& mu, const SimpleType& a) {
  return std::all_of(mu.begin(), mu.end(),
                     [&](const MIType& t) { return refines(t, a); });
}

// ---------------------------------------------------------------- contexts

ResourceContext::ResourceContext(std::vector<ResourceBinding> bindings)
    : bindings_(std::move(bindings)) {
  for (const auto& b : bindings_)
    if (!refines_seq(b.seq, b.simple))
      throw RefinementError(to_string(b.seq) + " does not refine " +
                            to_string(b.simple) + " at " + b.name);
}

ResourceContext ResourceContext::empty_for(const TypingContext& ctx) {
  std::vector<ResourceBinding> bs;
  for (const auto& b : ctx.bindings()) bs.push_back({b.name, {}, b.type});
  return ResourceContext(std::move(bs));
}

TypingContext ResourceContext::underlying() const {
  std::vector<Binding> bs;
  for (const auto& b : bindings_) bs.push_back({b.name, b.simple});
  return TypingContext(std::move(bs));
}

bool ResourceContext::refines(const TypingContext& ctx) const {
  if (ctx.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (ctx[i].name != bindings_[i].name || !(ctx[i].type == bindings_[i].simple) ||
        !refines_seq(bindings_[i].seq, ctx[i].type))
      return false;
  return true;
}

ResourceContext concat_ctx(const ResourceContext& s, const ResourceContext& t) {
  if (s.size() != t.size())
    throw RefinementError("concatenating resource contexts of different lengths");
  std::vector<ResourceBinding> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].name != t[i].name || !(s[i].simple == t[i].simple))
      throw RefinementError("concatenating resource contexts over different variables");
    SeqType seq = s[i].seq;
    seq.insert(seq.end(), t[i].seq.begin(), t[i].seq.end());
    out.push_back({s[i].name, std::move(seq), s[i].simple});
  }
  return ResourceContext(std::move(out));
}

// ---------------------------------------------------------------- collapse

MIType collapse_multiset(const IType& alpha) {
  if (alpha.is_star()) return MIType::star();
  return MIType::arrow(collapse_multiset(alpha.domain()),
                       collapse_multiset(alpha.codomain()));
}

MultisetType collapse_multiset(const SeqType& seq) {
  std::vector<MIType> out;
  out.reserve(seq.size());
  for (const auto& t : seq) out.push_back(collapse_multiset(t));
  return make_multiset(std::move(out));
}

IType canonicalize(const IType& alpha) {
  if (alpha.is_star()) return alpha;
  return IType::arrow(canonicalize_seq(alpha.domain()), canonicalize(alpha.codomain()));
}

SeqType canonicalize_seq(const SeqType& seq) {
  SeqType out;
  out.reserve(seq.size());
  for (const auto& t : seq) out.push_back(canonicalize(t));
  std::sort(out.begin(), out.end());
  return out;
}

ResourceContext canonicalize_ctx(const ResourceContext& ctx) {
  std::vector<ResourceBinding> bs;
  for (const auto& b : ctx.bindings())
    bs.push_back({b.name, canonicalize_seq(b.seq), b.simple});
  return ResourceContext(std::move(bs));
}

IType rigidify(const MIType& alpha) {
  if (alpha.is_star()) return IType::star();
  return IType::arrow(rigidify(alpha.domain()), rigidify(alpha.codomain()));
}

SeqType rigidify(const MultisetType& mu) {
  SeqType out;
  out.reserve(mu.size());
  for (const auto& t : mu) out.push_back(rigidify(t));
  return out;
}

PointSpec collapse_point(const RigidPoint& p) {
  PointSpec out;
  for (const auto& b : p.ctx.bindings()) out.ctx.push_back({b.name, collapse_multiset(b.seq)});
  out.type = collapse_multiset(p.type);
  return out;
}

RigidPoint canonicalize_point(const PointSpec& p, const TypingContext& ctx,
                              const SimpleType& result) {
  for (const auto& [name, mu] : p.ctx)
    if (!ctx.index_of(name))
      throw RefinementError("point mentions '" + name + "' which is not in the context");
  std::vector<ResourceBinding> bs;
  for (const auto& b : ctx.bindings()) {
    MultisetType mu;
    for (const auto& [name, m] : p.ctx)
      if (name == b.name) mu = m;
    if (!refines_multiset(mu, b.type))
      throw RefinementError(to_string(mu) + " does not refine " + to_string(b.type) +
                            " at " + b.name);
    bs.push_back({b.name, canonicalize_seq(rigidify(mu)), b.type});
  }
  if (!refines(p.type, result))
    throw RefinementError(to_string(p.type) + " does not refine " + to_string(result));
  return {ResourceContext(std::move(bs)), canonicalize(rigidify(p.type))};
}

// ---------------------------------------------------------------- bounded

namespace {

void sequences_over(const std::vector<IType>& elems, int max_len, SeqType& cur,
                    std::vector<SeqType>& out) {
  out.push_back(cur);
  if (static_cast<int>(cur.size()) == max_len) return;
  for (const auto& e : elems) {
    cur.push_back(e);
    sequences_over(elems, max_len, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<IType> bounded_refinements(const SimpleType& a, int max_len) {
  if (a.is_base()) return {IType::star()};
  std::vector<IType> dom_elems = bounded_refinements(a.domain(), max_len);
  std::vector<IType> cods = bounded_refinements(a.codomain(), max_len);
  std::vector<SeqType> seqs;
  SeqType cur;
  sequences_over(dom_elems, max_len, cur, seqs);
  std::vector<IType> out;
  out.reserve(seqs.size() * cods.size());
  for (const auto& s : seqs)
    for (const auto& c : cods) out.push_back(IType::arrow(s, c));
  return out;
}

// ---------------------------------------------------------------- printing

std::string to_string(const IType& t) {
  if (t.is_star()) return "*";
  return to_string(t.domain()) + "-o" + to_string(t.codomain());
}

std::string to_string(const SeqType& s) {
  std::string out = "<";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += to_string(s[i]);
  }
  return out + ">";
}

std::string to_string(const MIType& t) {
  if (t.is_star()) return "*";
  return to_string(t.domain()) + "-o" + to_string(t.codomain());
}

std::string to_string(const MultisetType& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ",";
    out += to_string(m[i]);
  }
  return out + "]";
}

std::string to_string(const ResourceContext& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += c[i].name + ":" + to_string(c[i].seq);
  }
  return out;
}

std::string to_string(const PointSpec& p) {
  std::string out;
  for (std::size_t i = 0; i < p.ctx.size(); ++i) {
    if (i) out += ", ";
    out += p.ctx[i].first + ":" + to_string(p.ctx[i].second);
  }
  return out + " |- " + to_string(p.type);
}

// ---------------------------------------------------------------- parsing

namespace {

class ITypeParser {
 public:
  explicit ITypeParser(std::string_view s) : s_(s) {}

  IType itype() {
    skip();
    if (peek() == '*') {
      ++i_;
      return IType::star();
    }
    if (peek() == '(') {
      ++i_;
      IType t = itype();
      expect(')');
      return t;
    }
    SeqType dom = seq();
    skip();
    if (!(peek() == '-' && i_ + 1 < s_.size() && s_[i_ + 1] == 'o'))
      throw SyntaxError("expected '-o' after a sequence", i_);
    i_ += 2;
    return IType::arrow(std::move(dom), itype());
  }

  SeqType seq() {
    skip();
    char open = peek();
    char close;
    if (open == '<') close = '>';
    else if (open == '[') close = ']';
    else throw SyntaxError("expected '<' or '['", i_);
    ++i_;
    SeqType out;
    skip();
    if (peek() == close) {
      ++i_;
      return out;
    }
    while (true) {
      out.push_back(itype());
      skip();
      if (peek() == ',') {
        ++i_;
        continue;
      }
      expect(close);
      return out;
    }
  }

  void finish() {
    skip();
    if (i_ != s_.size()) throw SyntaxError("trailing input", i_);
  }

 private:
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  void expect(char c) {
    skip();
    if (peek() != c) throw SyntaxError(std::string("expected '") + c + "'", i_);
    ++i_;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

IType parse_itype(std::string_view text) {
  ITypeParser p(text);
  IType t = p.itype();
  p.finish();
  return t;
}

SeqType parse_seq_type(std::string_view text) {
  ITypeParser p(text);
  SeqType s = p.seq();
  p.finish();
  return s;
}

MIType parse_mitype(std::string_view text) { return collapse_multiset(parse_itype(text)); }

MultisetType parse_multiset(std::string_view text) {
  return collapse_multiset(parse_seq_type(text));
}

}  // namespace thinspan
