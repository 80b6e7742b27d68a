#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace thinspan {

/// ℕ ∪ {∞} with the completed semiring operations (∞·0 = 0).
class NatInf {
 public:
  using Int = boost::multiprecision::cpp_int;

  NatInf() = default;
  NatInf(Int n) : value_(std::move(n)) {  // NOLINT: implicit from integers
    if (value_ < 0) throw std::invalid_argument("NatInf must be non-negative");
  }
  NatInf(long long n) : NatInf(Int(n)) {}  // NOLINT
  static NatInf infinity() {
    NatInf n;
    n.inf_ = true;
    return n;
  }

  bool is_infinite() const { return inf_; }
  bool is_zero() const { return !inf_ && value_ == 0; }
  /// Throws when infinite.
  const Int& value() const {
    if (inf_) throw std::domain_error("infinite coefficient has no finite value");
    return value_;
  }

  friend NatInf operator+(const NatInf& a, const NatInf& b) {
    if (a.inf_ || b.inf_) return infinity();
    return NatInf(a.value_ + b.value_);
  }
  friend NatInf operator*(const NatInf& a, const NatInf& b) {
    if (a.is_zero() || b.is_zero()) return NatInf();
    if (a.inf_ || b.inf_) return infinity();
    return NatInf(a.value_ * b.value_);
  }
  NatInf& operator+=(const NatInf& o) { return *this = *this + o; }
  NatInf& operator*=(const NatInf& o) { return *this = *this * o; }

  friend bool operator==(const NatInf& a, const NatInf& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.value_ == b.value_);
  }

  std::string str() const { return inf_ ? "inf" : value_.str(); }

 private:
  Int value_ = 0;
  bool inf_ = false;
};

inline std::string to_string(const NatInf& n) { return n.str(); }

}  // namespace thinspan
