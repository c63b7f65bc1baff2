#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pacqe/errors.hpp"
#include "pacqe/ints.hpp"

namespace pacqe {

/// Variable assignment: variable name -> integer value.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::map<std::string, Int> values)
      : values_(std::move(values)) {}

  bool has(const std::string& var) const { return values_.count(var) != 0; }

  const Int& get(const std::string& var) const {
    auto it = values_.find(var);
    if (it == values_.end())
      fail(ErrorCode::IncompleteAssignment,
           "assignment has no value for variable '" + var + "'");
    return it->second;
  }

  void set(const std::string& var, Int value) {
    values_[var] = std::move(value);
  }

  /// nu[n/y]: copy with one variable updated.
  Assignment with(const std::string& var, Int value) const {
    Assignment copy = *this;
    copy.set(var, std::move(value));
    return copy;
  }

  const std::map<std::string, Int>& values() const { return values_; }

 private:
  std::map<std::string, Int> values_;
};

/// A linear term: sum of coefficient * variable plus a constant.
/// Canonical form: zero coefficients are never stored, so structural equality
/// coincides with term equality.
class LinearTerm {
 public:
  LinearTerm() : constant_(0) {}
  explicit LinearTerm(Int constant) : constant_(std::move(constant)) {}

  static LinearTerm variable(const std::string& name, Int coeff = 1) {
    LinearTerm t;
    if (sign(coeff) != 0) t.coeffs_[name] = std::move(coeff);
    return t;
  }

  static LinearTerm constant(Int c) { return LinearTerm(std::move(c)); }

  const std::map<std::string, Int>& coeffs() const { return coeffs_; }
  const Int& constant_part() const { return constant_; }

  Int coeff(const std::string& var) const {
    auto it = coeffs_.find(var);
    return it == coeffs_.end() ? Int(0) : it->second;
  }

  bool is_constant() const { return coeffs_.empty(); }
  bool is_zero() const { return coeffs_.empty() && sign(constant_) == 0; }
  bool is_homogeneous() const { return sign(constant_) == 0; }

  /// True iff the term is a bare variable: coefficient 1, nothing else.
  bool is_single_variable() const {
    return coeffs_.size() == 1 && coeffs_.begin()->second == 1 &&
           sign(constant_) == 0;
  }

  bool mentions(const std::string& var) const {
    return coeffs_.count(var) != 0;
  }

  std::set<std::string> vars() const {
    std::set<std::string> out;
    for (const auto& [v, c] : coeffs_) out.insert(v);
    return out;
  }

  /// Same term with the constant zeroed (the "homogeneous part").
  LinearTerm homogeneous() const {
    LinearTerm t = *this;
    t.constant_ = 0;
    return t;
  }

  /// Same term with the given variable's monomial removed.
  LinearTerm without(const std::string& var) const {
    LinearTerm t = *this;
    t.coeffs_.erase(var);
    return t;
  }

  LinearTerm operator+(const LinearTerm& other) const {
    LinearTerm t = *this;
    for (const auto& [v, c] : other.coeffs_) {
      Int& slot = t.coeffs_[v];
      slot += c;
      if (sign(slot) == 0) t.coeffs_.erase(v);
    }
    t.constant_ += other.constant_;
    return t;
  }

  LinearTerm operator-() const {
    LinearTerm t;
    for (const auto& [v, c] : coeffs_) t.coeffs_[v] = -c;
    t.constant_ = -constant_;
    return t;
  }

  LinearTerm operator-(const LinearTerm& other) const {
    return *this + (-other);
  }

  LinearTerm scaled(const Int& factor) const {
    LinearTerm t;
    if (sign(factor) == 0) return t;
    for (const auto& [v, c] : coeffs_) t.coeffs_[v] = c * factor;
    t.constant_ = constant_ * factor;
    return t;
  }

  /// Exact division of every coefficient and the constant.
  LinearTerm divided(const Int& d) const {
    LinearTerm t;
    for (const auto& [v, c] : coeffs_) {
      if (!divides(d, c))
        fail(ErrorCode::SubstitutionShape,
             "coefficient not divisible during scaled substitution");
      t.coeffs_[v] = c / d;
    }
    if (!divides(d, constant_))
      fail(ErrorCode::SubstitutionShape,
           "constant not divisible during scaled substitution");
    t.constant_ = constant_ / d;
    return t;
  }

  Int evaluate(const Assignment& nu) const {
    Int value = constant_;
    for (const auto& [v, c] : coeffs_) value += c * nu.get(v);
    return value;
  }

  /// Max absolute value over coefficients and the constant.
  Int norm() const {
    Int n = abs_int(constant_);
    for (const auto& [v, c] : coeffs_) {
      Int a = abs_int(c);
      if (a > n) n = a;
    }
    return n;
  }

  bool operator==(const LinearTerm& other) const {
    return constant_ == other.constant_ && coeffs_ == other.coeffs_;
  }
  bool operator!=(const LinearTerm& other) const { return !(*this == other); }

  // Total order used for canonical/deterministic iteration everywhere.
  bool operator<(const LinearTerm& other) const {
    auto it = coeffs_.begin();
    auto jt = other.coeffs_.begin();
    for (; it != coeffs_.end() && jt != other.coeffs_.end(); ++it, ++jt) {
      if (it->first != jt->first) return it->first < jt->first;
      if (it->second != jt->second) return it->second < jt->second;
    }
    if (it != coeffs_.end()) return false;
    if (jt != other.coeffs_.end()) return true;
    return constant_ < other.constant_;
  }

 private:
  std::map<std::string, Int> coeffs_;
  Int constant_;
};

}  // namespace pacqe
