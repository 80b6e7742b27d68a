#pragma once

// Positive witnesses and the counting identities relating them to the
// weighted relational coefficient, symmetry classes and ~-witnesses.

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

#include "thinspan/derivation.hpp"
#include "thinspan/natinf.hpp"
#include "thinspan/symmetry.hpp"

namespace thinspan {

using Rational = boost::multiprecision::cpp_rational;

/// A derivation at (Θ, α) with the chosen witnesses of its polarity
/// conditions: θ⁻ : rep(γ) → Θ negative and θ⁺ : α → rep(a) positive.
struct PositiveWitness {
  Derivation derivation;
  CtxMorphism theta_minus;
  ITMorphism theta_plus;
};

struct ClassReport {
  std::size_t size;      // positive witnesses in the class
  BigInt m_class;        // endomorphisms of a member
  Rational contribution; // m₊(γ)·m₋(a)/m_class
};

struct PositiveWitnessReport {
  TypingContext ctx;
  Term term;  // elaborated
  SimpleType type;
  RigidPoint point;  // canonical
  Completeness completeness;
  std::vector<PositiveWitness> witnesses;
  std::vector<ClassReport> classes;
  Degrees ctx_degrees;
  Degrees res_degrees;
  BigInt wit_plus;
  BigInt tilde_wit_plus;  // m₋(γ)·wit_plus·m₊(a)
  BigInt esp_count;       // explicit (θ⁻, d, θ⁺) enumeration
};

enum class Exec { Serial, Parallel };

/// Throws RefinementError, TypeError, or BudgetRequired.
PositiveWitnessReport positive_witnesses(const TypingContext& ctx, const Term& m,
                                         const PointSpec& p, std::optional<int> budget,
                                         Exec exec = Exec::Parallel);

/// Σ over symmetry classes of m₊(γ)·m₋(a)/m(w). Throws InvariantViolation
/// when the sum is not an integer.
NatInf weight_by_classes(const PositiveWitnessReport& report);
NatInf weight_by_classes(const TypingContext& ctx, const Term& m, const PointSpec& p,
                         std::optional<int> budget);

/// Every class has exactly m₊(γ)·m₋(a)/m(s) positive witnesses.
bool class_witness_count_check(const PositiveWitnessReport& report);
bool class_witness_count_check(const TypingContext& ctx, const Term& m, const PointSpec& p);

/// wrel·m₋(γ)·m₊(a) = esp_count, by exact division. Throws
/// InvariantViolation when the division is not exact.
bool esp_wrel_check(const PositiveWitnessReport& report, const NatInf& wrel);
bool esp_wrel_check(const TypingContext& ctx, const Term& m, const PointSpec& p,
                    std::optional<int> budget = std::nullopt);

struct CheckOutcome {
  std::string name;
  bool passed;
  std::string detail;
};

struct VerificationReport {
  PositiveWitnessReport witnesses;
  NatInf wrel;
  NatInf class_weight;
  std::vector<CheckOutcome> checks;
  bool all_passed() const;
};

/// Runs every identity; failures are recorded, not thrown. Errors in the
/// input itself (type, refinement, budget) still throw.
VerificationReport verify_identities(const TypingContext& ctx, const Term& m, const PointSpec& p,
                                     std::optional<int> budget);

}  // namespace thinspan
