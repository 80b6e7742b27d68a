#include "thinspan/symmetry.hpp"

#include <algorithm>
#include <set>

namespace thinspan {

SeqMorphism::SeqMorphism(Permutation s, std::vector<ITMorphism> comps)
    : sigma(std::move(s)), components(std::move(comps)) {
  if (sigma.size() != components.size())
    throw RefinementError("permutation size does not match component count");
}

bool operator==(const SeqMorphism& a, const SeqMorphism& b) {
  return a.sigma == b.sigma && a.components == b.components;
}

ITMorphism ITMorphism::arrow(SeqMorphism domain, ITMorphism codomain) {
  ITMorphism m;
  m.node_ = std::make_shared<const Arrow>(Arrow{std::move(domain), std::move(codomain)});
  return m;
}

const SeqMorphism& ITMorphism::domain() const {
  if (!node_) throw Error("domain of identity on *");
  return node_->domain;
}

const ITMorphism& ITMorphism::codomain() const {
  if (!node_) throw Error("codomain of identity on *");
  return node_->codomain;
}

bool operator==(const ITMorphism& a, const ITMorphism& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return a.node_->domain == b.node_->domain && a.node_->codomain == b.node_->codomain;
}

std::string to_string(Polarity p) {
  switch (p) {
    case Polarity::Positive: return "positive";
    case Polarity::Negative: return "negative";
    case Polarity::Neither: return "neither";
    case Polarity::Both: return "both";
  }
  return "?";
}

// --- source and target -------------------------------------------------------

IType src(const ITMorphism& phi) {
  if (phi.is_star()) return IType::star();
  return IType::arrow(src(phi.domain()), src(phi.codomain()));
}

IType tgt(const ITMorphism& phi) {
  if (phi.is_star()) return IType::star();
  return IType::arrow(tgt(phi.domain()), tgt(phi.codomain()));
}

SeqType src(const SeqMorphism& phi) {
  SeqType out;
  out.reserve(phi.size());
  for (const auto& c : phi.components) out.push_back(src(c));
  return out;
}

SeqType tgt(const SeqMorphism& phi) {
  SeqType out(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) out[phi.sigma(i)] = tgt(phi.components[i]);
  return out;
}

namespace {

ResourceContext ctx_side(const CtxMorphism& xi, const TypingContext& ctx, bool source) {
  if (xi.parts.size() != ctx.size())
    throw RefinementError("context morphism does not match context length");
  std::vector<ResourceBinding> bs;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const auto& b = ctx.bindings()[i];
    bs.push_back({b.name, source ? src(xi.parts[i]) : tgt(xi.parts[i]), b.type});
  }
  return ResourceContext(std::move(bs));
}

}  // namespace

ResourceContext src(const CtxMorphism& xi, const TypingContext& ctx) {
  return ctx_side(xi, ctx, true);
}

ResourceContext tgt(const CtxMorphism& xi, const TypingContext& ctx) {
  return ctx_side(xi, ctx, false);
}

void check_morphism(const ITMorphism& phi, const SimpleType& a) {
  if (!refines(src(phi), a) || !refines(tgt(phi), a))
    throw RefinementError("morphism " + to_string(phi) + " is not a morphism over " +
                          to_string(a));
}

// --- groupoid structure ------------------------------------------------------

ITMorphism identity(const IType& alpha) {
  if (alpha.is_star()) return ITMorphism::star_id();
  return ITMorphism::arrow(identity(alpha.domain()), identity(alpha.codomain()));
}

SeqMorphism identity(const SeqType& seq) {
  std::vector<ITMorphism> comps;
  comps.reserve(seq.size());
  for (const auto& a : seq) comps.push_back(identity(a));
  return SeqMorphism(Permutation::identity(seq.size()), std::move(comps));
}

CtxMorphism identity(const ResourceContext& ctx) {
  CtxMorphism out;
  for (std::size_t i = 0; i < ctx.size(); ++i) out.parts.push_back(identity(ctx.seq(i)));
  return out;
}

namespace {

ITMorphism compose_raw(const ITMorphism& psi, const ITMorphism& phi);

SeqMorphism compose_raw(const SeqMorphism& psi, const SeqMorphism& phi) {
  if (psi.size() != phi.size()) throw Error("non-composable sequence morphisms");
  std::vector<ITMorphism> comps;
  comps.reserve(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    comps.push_back(compose_raw(psi.components[phi.sigma(i)], phi.components[i]));
  return SeqMorphism(compose(psi.sigma, phi.sigma), std::move(comps));
}

ITMorphism compose_raw(const ITMorphism& psi, const ITMorphism& phi) {
  if (psi.is_star() != phi.is_star()) throw Error("non-composable morphisms");
  if (phi.is_star()) return ITMorphism::star_id();
  return ITMorphism::arrow(compose_raw(psi.domain(), phi.domain()),
                           compose_raw(psi.codomain(), phi.codomain()));
}

}  // namespace

ITMorphism compose(const ITMorphism& psi, const ITMorphism& phi) {
  if (tgt(phi) != src(psi)) throw Error("non-composable morphisms: target differs from source");
  return compose_raw(psi, phi);
}

SeqMorphism compose(const SeqMorphism& psi, const SeqMorphism& phi) {
  if (tgt(phi) != src(psi)) throw Error("non-composable morphisms: target differs from source");
  return compose_raw(psi, phi);
}

CtxMorphism compose(const CtxMorphism& psi, const CtxMorphism& phi) {
  if (psi.parts.size() != phi.parts.size()) throw Error("non-composable context morphisms");
  CtxMorphism out;
  for (std::size_t i = 0; i < phi.parts.size(); ++i)
    out.parts.push_back(compose(psi.parts[i], phi.parts[i]));
  return out;
}

ITMorphism inverse(const ITMorphism& phi) {
  if (phi.is_star()) return phi;
  return ITMorphism::arrow(inverse(phi.domain()), inverse(phi.codomain()));
}

SeqMorphism inverse(const SeqMorphism& phi) {
  std::vector<ITMorphism> comps(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    comps[phi.sigma(i)] = inverse(phi.components[i]);
  return SeqMorphism(phi.sigma.inverse(), std::move(comps));
}

CtxMorphism inverse(const CtxMorphism& xi) {
  CtxMorphism out;
  for (const auto& p : xi.parts) out.parts.push_back(inverse(p));
  return out;
}

SeqMorphism block_action(const Permutation& rho, const std::vector<SeqMorphism>& family) {
  std::vector<Permutation> blocks;
  std::vector<ITMorphism> comps;
  for (const auto& f : family) {
    blocks.push_back(f.sigma);
    comps.insert(comps.end(), f.components.begin(), f.components.end());
  }
  return SeqMorphism(Permutation::block_action(rho, blocks), std::move(comps));
}

CtxMorphism block_action(const Permutation& rho, const std::vector<CtxMorphism>& family) {
  if (family.empty()) throw Error("block action on an empty family");
  CtxMorphism out;
  const std::size_t n = family.front().parts.size();
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<SeqMorphism> col;
    for (const auto& f : family) {
      if (f.parts.size() != n) throw Error("block action on mismatched contexts");
      col.push_back(f.parts[v]);
    }
    out.parts.push_back(block_action(rho, col));
  }
  return out;
}

// --- subgroupoids ------------------------------------------------------------

Mode flip(Mode m) {
  switch (m) {
    case Mode::Positive: return Mode::Negative;
    case Mode::Negative: return Mode::Positive;
    case Mode::Any: return Mode::Any;
  }
  return m;
}

bool in_mode(const ITMorphism& phi, Mode mode) {
  if (phi.is_star()) return true;
  return in_mode(phi.domain(), flip(mode)) && in_mode(phi.codomain(), mode);
}

bool in_mode(const SeqMorphism& phi, Mode mode) {
  if (mode == Mode::Positive && !phi.sigma.is_identity()) return false;
  return std::all_of(phi.components.begin(), phi.components.end(),
                     [&](const ITMorphism& c) { return in_mode(c, mode); });
}

bool in_mode(const CtxMorphism& xi, Mode mode) {
  return std::all_of(xi.parts.begin(), xi.parts.end(),
                     [&](const SeqMorphism& p) { return in_mode(p, mode); });
}

namespace {

template <class M>
Polarity classify(const M& m) {
  const bool pos = in_mode(m, Mode::Positive);
  const bool neg = in_mode(m, Mode::Negative);
  if (pos && neg) return Polarity::Both;
  if (pos) return Polarity::Positive;
  if (neg) return Polarity::Negative;
  return Polarity::Neither;
}

}  // namespace

Polarity polarity(const ITMorphism& phi, const SimpleType& at) {
  check_morphism(phi, at);
  return classify(phi);
}

Polarity polarity(const SeqMorphism& phi, const SimpleType& at) {
  if (!refines_seq(src(phi), at) || !refines_seq(tgt(phi), at))
    throw RefinementError("sequence morphism is not over !" + to_string(at));
  return classify(phi);
}

Polarity polarity(const CtxMorphism& xi, const TypingContext& at) {
  src(xi, at);
  tgt(xi, at);
  return classify(xi);
}

// --- polar factorization -----------------------------------------------------

namespace {

// phi = second ∘ first, with first in `first_mode` and second in the other.
template <class M>
struct Split {
  M first;
  M second;
};

Split<ITMorphism> split(const ITMorphism& phi, Mode first_mode);

Split<SeqMorphism> split(const SeqMorphism& phi, Mode first_mode) {
  const std::size_t n = phi.size();
  std::vector<ITMorphism> firsts(n), seconds(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto s = split(phi.components[i], first_mode);
    firsts[i] = std::move(s.first);
    seconds[i] = std::move(s.second);
  }
  if (first_mode == Mode::Positive) {
    // The reordering happens in the negative (second) half.
    return {SeqMorphism(Permutation::identity(n), std::move(firsts)),
            SeqMorphism(phi.sigma, std::move(seconds))};
  }
  // The reordering happens first; the positive half then runs in target order.
  std::vector<ITMorphism> moved(n);
  for (std::size_t i = 0; i < n; ++i) moved[phi.sigma(i)] = std::move(seconds[i]);
  return {SeqMorphism(phi.sigma, std::move(firsts)),
          SeqMorphism(Permutation::identity(n), std::move(moved))};
}

Split<ITMorphism> split(const ITMorphism& phi, Mode first_mode) {
  if (phi.is_star()) return {phi, phi};
  auto d = split(phi.domain(), flip(first_mode));
  auto c = split(phi.codomain(), first_mode);
  return {ITMorphism::arrow(std::move(d.first), std::move(c.first)),
          ITMorphism::arrow(std::move(d.second), std::move(c.second))};
}

}  // namespace

Factorization<ITMorphism> polar_factorize(const ITMorphism& phi, const SimpleType& at) {
  check_morphism(phi, at);
  auto s = split(phi, Mode::Positive);
  return {std::move(s.first), std::move(s.second)};
}

Factorization<SeqMorphism> polar_factorize(const SeqMorphism& phi, const SimpleType& at) {
  polarity(phi, at);
  auto s = split(phi, Mode::Positive);
  return {std::move(s.first), std::move(s.second)};
}

Factorization<CtxMorphism> polar_factorize(const CtxMorphism& xi, const TypingContext& at) {
  polarity(xi, at);
  Factorization<CtxMorphism> out;
  for (const auto& p : xi.parts) {
    auto s = split(p, Mode::Positive);
    out.pos.parts.push_back(std::move(s.first));
    out.neg.parts.push_back(std::move(s.second));
  }
  return out;
}

// --- enumeration and counting ------------------------------------------------

std::vector<ITMorphism> enumerate_homs(const IType& alpha, const IType& beta, Mode mode) {
  if (alpha.is_star() != beta.is_star()) return {};
  if (alpha.is_star()) return {ITMorphism::star_id()};
  auto doms = enumerate_seq_homs(alpha.domain(), beta.domain(), flip(mode));
  if (doms.empty()) return {};
  auto cods = enumerate_homs(alpha.codomain(), beta.codomain(), mode);
  std::vector<ITMorphism> out;
  out.reserve(doms.size() * cods.size());
  for (const auto& d : doms)
    for (const auto& c : cods) out.push_back(ITMorphism::arrow(d, c));
  return out;
}

std::vector<SeqMorphism> enumerate_seq_homs(const SeqType& alpha, const SeqType& beta,
                                            Mode mode) {
  const std::size_t n = alpha.size();
  if (beta.size() != n) return {};
  std::vector<Permutation> sigmas =
      mode == Mode::Positive ? std::vector<Permutation>{Permutation::identity(n)}
                             : Permutation::all(n);
  std::vector<SeqMorphism> out;
  for (const auto& sigma : sigmas) {
    std::vector<std::vector<ITMorphism>> choices(n);
    bool dead = false;
    for (std::size_t i = 0; i < n && !dead; ++i) {
      choices[i] = enumerate_homs(alpha[i], beta[sigma(i)], mode);
      dead = choices[i].empty();
    }
    if (dead) continue;
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      std::vector<ITMorphism> comps(n);
      for (std::size_t i = 0; i < n; ++i) comps[i] = choices[i][idx[i]];
      out.emplace_back(sigma, std::move(comps));
      std::size_t k = 0;
      while (k < n && ++idx[k] == choices[k].size()) idx[k++] = 0;
      if (k == n) break;
    }
  }
  return out;
}

std::vector<CtxMorphism> enumerate_ctx_homs(const ResourceContext& a, const ResourceContext& b,
                                            Mode mode) {
  if (a.underlying() != b.underlying()) return {};
  std::vector<CtxMorphism> out{CtxMorphism{}};
  for (std::size_t v = 0; v < a.size(); ++v) {
    auto parts = enumerate_seq_homs(a.seq(v), b.seq(v), mode);
    std::vector<CtxMorphism> next;
    next.reserve(out.size() * parts.size());
    for (const auto& prefix : out)
      for (const auto& p : parts) {
        CtxMorphism m = prefix;
        m.parts.push_back(p);
        next.push_back(std::move(m));
      }
    out = std::move(next);
  }
  return out;
}

BigInt count_homs(const IType& alpha, const IType& beta, Mode mode) {
  if (alpha.is_star() != beta.is_star()) return 0;
  if (alpha.is_star()) return 1;
  BigInt d = count_seq_homs(alpha.domain(), beta.domain(), flip(mode));
  if (d == 0) return 0;
  return d * count_homs(alpha.codomain(), beta.codomain(), mode);
}

BigInt count_seq_homs(const SeqType& alpha, const SeqType& beta, Mode mode) {
  const std::size_t n = alpha.size();
  if (beta.size() != n) return 0;
  if (mode == Mode::Positive) {
    BigInt prod = 1;
    for (std::size_t i = 0; i < n && prod != 0; ++i) prod *= count_homs(alpha[i], beta[i], mode);
    return prod;
  }
  if (n > 20) throw Error("sequence too long to count symmetries");
  // Permanent of the component-count matrix, by dynamic programming over
  // the set of target slots already used.
  std::vector<std::vector<BigInt>> w(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w[i][j] = count_homs(alpha[i], beta[j], mode);
  std::vector<BigInt> dp(std::size_t{1} << n, 0);
  dp[0] = 1;
  for (std::size_t mask = 0; mask < dp.size(); ++mask) {
    if (dp[mask] == 0) continue;
    const auto row = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (row == n) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (!(mask >> j & 1U) && w[row][j] != 0) dp[mask | std::size_t{1} << j] += dp[mask] * w[row][j];
  }
  return dp.back();
}

BigInt count_ctx_homs(const ResourceContext& a, const ResourceContext& b, Mode mode) {
  if (a.underlying() != b.underlying()) return 0;
  BigInt prod = 1;
  for (std::size_t v = 0; v < a.size() && prod != 0; ++v)
    prod *= count_seq_homs(a.seq(v), b.seq(v), mode);
  return prod;
}

// --- reachable objects -------------------------------------------------------

std::vector<IType> reachable(const IType& alpha, Mode mode) {
  if (alpha.is_star()) return {alpha};
  auto doms = reachable_seq(alpha.domain(), flip(mode));
  auto cods = reachable(alpha.codomain(), mode);
  std::vector<IType> out;
  for (const auto& d : doms)
    for (const auto& c : cods) out.push_back(IType::arrow(d, c));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SeqType> reachable_seq(const SeqType& alpha, Mode mode) {
  std::vector<std::vector<IType>> per;
  for (const auto& a : alpha) per.push_back(reachable(a, mode));
  std::set<SeqType> acc;
  SeqType cur(alpha.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == alpha.size()) {
      if (mode == Mode::Positive) {
        acc.insert(cur);
        return;
      }
      SeqType s = cur;
      std::sort(s.begin(), s.end());
      do acc.insert(s);
      while (std::next_permutation(s.begin(), s.end()));
      return;
    }
    for (const auto& c : per[i]) {
      cur[i] = c;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return {acc.begin(), acc.end()};
}

std::vector<ResourceContext> reachable_ctx(const ResourceContext& ctx, Mode mode) {
  std::vector<std::vector<ResourceBinding>> out{{}};
  for (std::size_t v = 0; v < ctx.size(); ++v) {
    auto seqs = reachable_seq(ctx.seq(v), mode);
    std::vector<std::vector<ResourceBinding>> next;
    for (const auto& prefix : out)
      for (const auto& s : seqs) {
        auto b = prefix;
        b.push_back({ctx[v].name, s, ctx[v].simple});
        next.push_back(std::move(b));
      }
    out = std::move(next);
  }
  std::vector<ResourceContext> res;
  res.reserve(out.size());
  for (auto& b : out) res.emplace_back(std::move(b));
  return res;
}

// --- degrees -----------------------------------------------------------------

Degrees sym_degrees(const IType& alpha, const SimpleType& at) {
  if (!refines(alpha, at)) throw RefinementError(to_string(alpha) + " does not refine " + to_string(at));
  if (canonicalize(alpha) != alpha) throw RefinementError(to_string(alpha) + " is not canonical");
  return {count_homs(alpha, alpha), count_homs(alpha, alpha, Mode::Positive),
          count_homs(alpha, alpha, Mode::Negative)};
}

Degrees sym_degrees_seq(const SeqType& alpha, const SimpleType& at) {
  if (!refines_seq(alpha, at))
    throw RefinementError(to_string(alpha) + " does not refine !" + to_string(at));
  if (canonicalize_seq(alpha) != alpha) throw RefinementError(to_string(alpha) + " is not canonical");
  return {count_seq_homs(alpha, alpha), count_seq_homs(alpha, alpha, Mode::Positive),
          count_seq_homs(alpha, alpha, Mode::Negative)};
}

Degrees sym_degrees_ctx(const ResourceContext& ctx) {
  if (canonicalize_ctx(ctx) != ctx) throw RefinementError(to_string(ctx) + " is not canonical");
  return {count_ctx_homs(ctx, ctx), count_ctx_homs(ctx, ctx, Mode::Positive),
          count_ctx_homs(ctx, ctx, Mode::Negative)};
}

// --- printing ----------------------------------------------------------------

std::string to_string(const ITMorphism& phi) {
  if (phi.is_star()) return "*id";
  return to_string(phi.domain()) + " -o " + to_string(phi.codomain());
}

std::string to_string(const SeqMorphism& phi) {
  std::string out = "(" + to_string(phi.sigma) + ";<";
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (i) out += ",";
    out += to_string(phi.components[i]);
  }
  return out + ">)";
}

std::string to_string(const CtxMorphism& xi) {
  std::string out = "{";
  for (std::size_t i = 0; i < xi.parts.size(); ++i) {
    if (i) out += "; ";
    out += to_string(xi.parts[i]);
  }
  return out + "}";
}

}  // namespace thinspan
