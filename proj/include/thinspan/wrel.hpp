#pragma once

// Coefficients of the weighted relational (ℕ∞) interpretation, computed
// entry-wise on the β-normal form.

#include "thinspan/natinf.hpp"
#include "thinspan/rigidtypes.hpp"
#include "thinspan/syntax.hpp"

namespace thinspan {

/// Per-variable multisets and a result multiset type. Variables missing
/// from the point are taken as [].
using MultiPoint = PointSpec;

/// Throws RefinementError when `p` does not refine the judgement.
NatInf wrel_coefficient(const TypingContext& ctx, const Term& m, const MultiPoint& p);

bool rel_inhabited(const TypingContext& ctx, const Term& m, const MultiPoint& p);

}  // namespace thinspan
