#pragma once

// Rigid (sequence-based) intersection types refining simple types, their
// multiset collapse, a fixed total order and canonical representatives.
//
// Text notation: `*` for the base refinement, `<a,b>` for sequences,
// `[a,b]` for multisets, `-o` for the (right-associative) arrow.

#include <compare>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thinspan/syntax.hpp"

namespace thinspan {

class IType;
using SeqType = std::vector<IType>;

/// α ::= ⋆ | ᾱ ⊸ β, with ᾱ an ordered sequence.
class IType {
 public:
  IType() = default;  // ⋆
  static IType star() { return {}; }
  static IType arrow(SeqType domain, IType codomain);

  bool is_star() const { return node_ == nullptr; }
  bool is_arrow() const { return node_ != nullptr; }
  const SeqType& domain() const;
  const IType& codomain() const;

  friend bool operator==(const IType& a, const IType& b);
  friend std::strong_ordering operator<=>(const IType& a, const IType& b);

 private:
  struct Arrow;
  std::shared_ptr<const Arrow> node_;
};

struct IType::Arrow {
  SeqType domain;
  IType codomain;
};

class MIType;
/// Multisets are stored sorted by compare_mit, so == decides multiset
/// equality.
using MultisetType = std::vector<MIType>;

/// Standard (multiset) non-idempotent intersection types.
class MIType {
 public:
  MIType() = default;  // ⋆
  static MIType star() { return {}; }
  /// Sorts `domain` into canonical storage order.
  static MIType arrow(MultisetType domain, MIType codomain);

  bool is_star() const { return node_ == nullptr; }
  bool is_arrow() const { return node_ != nullptr; }
  const MultisetType& domain() const;
  const MIType& codomain() const;

  friend bool operator==(const MIType& a, const MIType& b);
  friend std::strong_ordering operator<=>(const MIType& a, const MIType& b);

 private:
  struct Arrow;
  std::shared_ptr<const Arrow> node_;
};

struct MIType::Arrow {
  MultisetType domain;
  MIType codomain;
};

MultisetType make_multiset(std::vector<MIType> elems);
MultisetType multiset_sum(const MultisetType& a, const MultisetType& b);

/// Star < arrow; arrows by domain length, then domain lexicographically,
/// then codomain.
std::strong_ordering compare_it(const IType& a, const IType& b);
std::strong_ordering compare_seq(const SeqType& a, const SeqType& b);
std::strong_ordering compare_mit(const MIType& a, const MIType& b);

bool refines(const IType& alpha, const SimpleType& a);
bool refines_seq(const SeqType& seq, const SimpleType& a);
bool refines(const MIType& alpha, const SimpleType& a);
bool refines_multiset(const MultisetType& mu, const SimpleType& a);

struct ResourceBinding {
  std::string name;
  SeqType seq;
  SimpleType simple;
  friend bool operator==(const ResourceBinding&, const ResourceBinding&) = default;
};

/// Positional refinement of a TypingContext.
class ResourceContext {
 public:
  ResourceContext() = default;
  /// Validates that each sequence refines its simple type.
  explicit ResourceContext(std::vector<ResourceBinding> bindings);
  static ResourceContext empty_for(const TypingContext& ctx);

  const std::vector<ResourceBinding>& bindings() const { return bindings_; }
  std::size_t size() const { return bindings_.size(); }
  const ResourceBinding& operator[](std::size_t i) const { return bindings_[i]; }
  const SeqType& seq(std::size_t i) const { return bindings_[i].seq; }
  TypingContext underlying() const;
  bool refines(const TypingContext& ctx) const;

  friend bool operator==(const ResourceContext&, const ResourceContext&) = default;

 private:
  std::vector<ResourceBinding> bindings_;
};

/// Per-variable concatenation, `s` first. Throws RefinementError when the
/// underlying contexts differ.
ResourceContext concat_ctx(const ResourceContext& s, const ResourceContext& t);

MIType collapse_multiset(const IType& alpha);
MultisetType collapse_multiset(const SeqType& seq);

/// The chosen representative of a symmetry class: components canonicalized
/// recursively, every sequence sorted by compare_it.
IType canonicalize(const IType& alpha);
SeqType canonicalize_seq(const SeqType& seq);
ResourceContext canonicalize_ctx(const ResourceContext& ctx);

/// Sequence presentation of a multiset type in storage order. Since storage
/// order agrees with compare_it on canonical forms, this is canonical.
IType rigidify(const MIType& alpha);
SeqType rigidify(const MultisetType& mu);

/// A point of the web in multiset notation.
struct PointSpec {
  std::vector<std::pair<std::string, MultisetType>> ctx;  // missing → []
  MIType type;
  friend bool operator==(const PointSpec&, const PointSpec&) = default;
};

struct RigidPoint {
  ResourceContext ctx;
  IType type;
  friend bool operator==(const RigidPoint&, const RigidPoint&) = default;
};

/// Multiset-notation view of a rigid point.
PointSpec collapse_point(const RigidPoint& p);

/// The canonical rigid (Θ, α) of a multiset point. Throws RefinementError.
RigidPoint canonicalize_point(const PointSpec& p, const TypingContext& ctx,
                              const SimpleType& result);

/// Every refinement of `a` whose sequences (at any depth) have length at
/// most `max_len`.
std::vector<IType> bounded_refinements(const SimpleType& a, int max_len);

std::string to_string(const IType& t);
std::string to_string(const SeqType& s);
std::string to_string(const MIType& t);
std::string to_string(const MultisetType& m);
std::string to_string(const ResourceContext& c);
std::string to_string(const PointSpec& p);

/// Accepts either bracket style for sequences; order is kept as written.
IType parse_itype(std::string_view text);
SeqType parse_seq_type(std::string_view text);
MIType parse_mitype(std::string_view text);
MultisetType parse_multiset(std::string_view text);

}  // namespace thinspan
