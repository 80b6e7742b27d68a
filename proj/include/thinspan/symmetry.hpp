#pragma once

// Symmetries between rigid intersection types: the groupoids of
// refinements of a simple type (and of !A, and of contexts), their
// positive/negative subgroupoids, polar factorization and degrees.

#include <boost/multiprecision/cpp_int.hpp>
#include <memory>
#include <string>
#include <vector>

#include "thinspan/permutation.hpp"
#include "thinspan/rigidtypes.hpp"

namespace thinspan {

using BigInt = boost::multiprecision::cpp_int;

class ITMorphism;

/// (σ, ⟨φ1..φn⟩): component i maps source slot i to target slot σ(i).
struct SeqMorphism {
  Permutation sigma;
  std::vector<ITMorphism> components;

  SeqMorphism() = default;
  SeqMorphism(Permutation s, std::vector<ITMorphism> comps);
  std::size_t size() const { return components.size(); }
  friend bool operator==(const SeqMorphism&, const SeqMorphism&);
};

/// φ ::= ⋆_id | φ̃ ⊸ ψ
class ITMorphism {
 public:
  ITMorphism() = default;  // ⋆_id
  static ITMorphism star_id() { return {}; }
  static ITMorphism arrow(SeqMorphism domain, ITMorphism codomain);

  bool is_star() const { return node_ == nullptr; }
  bool is_arrow() const { return node_ != nullptr; }
  const SeqMorphism& domain() const;
  const ITMorphism& codomain() const;

  friend bool operator==(const ITMorphism& a, const ITMorphism& b);

 private:
  struct Arrow;
  std::shared_ptr<const Arrow> node_;
};

struct ITMorphism::Arrow {
  SeqMorphism domain;
  ITMorphism codomain;
};

/// One SeqMorphism per context variable, positionally.
struct CtxMorphism {
  std::vector<SeqMorphism> parts;
  friend bool operator==(const CtxMorphism&, const CtxMorphism&) = default;
};

enum class Polarity { Positive, Negative, Neither, Both };
std::string to_string(Polarity p);

IType src(const ITMorphism& phi);
IType tgt(const ITMorphism& phi);
SeqType src(const SeqMorphism& phi);
SeqType tgt(const SeqMorphism& phi);
ResourceContext src(const CtxMorphism& xi, const TypingContext& ctx);
ResourceContext tgt(const CtxMorphism& xi, const TypingContext& ctx);

/// Throws RefinementError unless src/tgt refine `a`.
void check_morphism(const ITMorphism& phi, const SimpleType& a);

ITMorphism identity(const IType& alpha);
SeqMorphism identity(const SeqType& seq);
CtxMorphism identity(const ResourceContext& ctx);

/// psi ∘ phi. Throws Error when tgt(phi) ≠ src(psi).
ITMorphism compose(const ITMorphism& psi, const ITMorphism& phi);
SeqMorphism compose(const SeqMorphism& psi, const SeqMorphism& phi);
CtxMorphism compose(const CtxMorphism& psi, const CtxMorphism& phi);

ITMorphism inverse(const ITMorphism& phi);
SeqMorphism inverse(const SeqMorphism& phi);
CtxMorphism inverse(const CtxMorphism& xi);

/// Concatenates the family, moving block j to block position rho(j).
SeqMorphism block_action(const Permutation& rho, const std::vector<SeqMorphism>& family);
CtxMorphism block_action(const Permutation& rho, const std::vector<CtxMorphism>& family);

/// Restricts enumeration/counting to a subgroupoid. At !A, Positive means
/// identity permutation with positive components, Negative means any
/// permutation with negative components; under ⊸ the domain takes the
/// flipped mode.
enum class Mode { Any, Positive, Negative };
Mode flip(Mode m);

std::vector<ITMorphism> enumerate_homs(const IType& alpha, const IType& beta,
                                       Mode mode = Mode::Any);
std::vector<SeqMorphism> enumerate_seq_homs(const SeqType& alpha, const SeqType& beta,
                                            Mode mode = Mode::Any);
std::vector<CtxMorphism> enumerate_ctx_homs(const ResourceContext& a,
                                            const ResourceContext& b,
                                            Mode mode = Mode::Any);

BigInt count_homs(const IType& alpha, const IType& beta, Mode mode = Mode::Any);
BigInt count_seq_homs(const SeqType& alpha, const SeqType& beta, Mode mode = Mode::Any);
BigInt count_ctx_homs(const ResourceContext& a, const ResourceContext& b,
                      Mode mode = Mode::Any);

bool in_mode(const ITMorphism& phi, Mode mode);
bool in_mode(const SeqMorphism& phi, Mode mode);
bool in_mode(const CtxMorphism& xi, Mode mode);

Polarity polarity(const ITMorphism& phi, const SimpleType& at);
/// Polarity as a morphism of !A.
Polarity polarity(const SeqMorphism& phi, const SimpleType& at);
Polarity polarity(const CtxMorphism& xi, const TypingContext& at);

template <class M>
struct Factorization {
  M pos;
  M neg;
};

/// The unique phi = neg ∘ pos with pos positive and neg negative.
Factorization<ITMorphism> polar_factorize(const ITMorphism& phi, const SimpleType& at);
Factorization<SeqMorphism> polar_factorize(const SeqMorphism& phi, const SimpleType& at);
Factorization<CtxMorphism> polar_factorize(const CtxMorphism& xi, const TypingContext& at);

/// Objects reachable from `alpha` by a morphism in `mode`, sorted and
/// deduplicated. Subgroupoids are closed under inverse, so these are also
/// the sources of morphisms into `alpha`.
std::vector<IType> reachable(const IType& alpha, Mode mode);
std::vector<SeqType> reachable_seq(const SeqType& alpha, Mode mode);
std::vector<ResourceContext> reachable_ctx(const ResourceContext& ctx, Mode mode);

struct Degrees {
  BigInt m;
  BigInt m_plus;
  BigInt m_minus;
  friend bool operator==(const Degrees&, const Degrees&) = default;
};

/// Symmetry degrees of a canonical object. Throws RefinementError on
/// non-canonical or non-refining input.
Degrees sym_degrees(const IType& alpha, const SimpleType& at);
Degrees sym_degrees_seq(const SeqType& alpha, const SimpleType& at);
Degrees sym_degrees_ctx(const ResourceContext& ctx);

std::string to_string(const ITMorphism& phi);
std::string to_string(const SeqMorphism& phi);
std::string to_string(const CtxMorphism& xi);

}  // namespace thinspan
