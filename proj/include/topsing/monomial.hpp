#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>

#include "topsing/errors.hpp"

namespace topsing {

inline constexpr std::size_t kMaxVariables = 64;
inline constexpr unsigned kMaxExponent = 255;

/// Dense exponent vector with inline storage. Exponents are capped at 255,
/// which is far above anything the truncated computations reach.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t num_vars) : size_(check_size(num_vars)) {}

  Monomial(std::initializer_list<unsigned> exps) : size_(check_size(exps.size())) {
    std::size_t i = 0;
    for (unsigned e : exps) set(i++, e);
  }

  static Monomial from_exponents(std::span<const unsigned> exps) {
    Monomial m(exps.size());
    for (std::size_t i = 0; i < exps.size(); ++i) m.set(i, exps[i]);
    return m;
  }

  static Monomial unit(std::size_t num_vars, std::size_t var, unsigned power = 1) {
    Monomial m(num_vars);
    m.set(var, power);
    return m;
  }

  std::size_t size() const { return size_; }
  unsigned degree() const { return degree_; }
  unsigned operator[](std::size_t i) const { return exps_[i]; }

  void set(std::size_t i, unsigned e) {
    if (e > kMaxExponent) throw ExponentOverflow("exponent exceeds 255");
    degree_ = static_cast<std::uint16_t>(degree_ - exps_[i] + e);
    exps_[i] = static_cast<std::uint8_t>(e);
  }

  bool is_one() const { return degree_ == 0; }

  /// Bit i set iff variable i occurs (variables >= 64 are not representable).
  std::uint64_t support() const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < size_; ++i)
      if (exps_[i] != 0) s |= (std::uint64_t{1} << i);
    return s;
  }

  Monomial operator*(const Monomial& o) const {
    Monomial r(size_);
    for (std::size_t i = 0; i < size_; ++i) {
      unsigned e = unsigned{exps_[i]} + o.exps_[i];
      if (e > kMaxExponent) throw ExponentOverflow("exponent exceeds 255");
      r.exps_[i] = static_cast<std::uint8_t>(e);
    }
    r.degree_ = static_cast<std::uint16_t>(degree_ + o.degree_);
    return r;
  }

  bool divides(const Monomial& o) const {
    if (degree_ > o.degree_) return false;
    for (std::size_t i = 0; i < size_; ++i)
      if (exps_[i] > o.exps_[i]) return false;
    return true;
  }

  /// Quotient o / *this; requires divides(o).
  Monomial quotient_of(const Monomial& o) const {
    Monomial r(size_);
    for (std::size_t i = 0; i < size_; ++i) r.exps_[i] = static_cast<std::uint8_t>(o.exps_[i] - exps_[i]);
    r.degree_ = static_cast<std::uint16_t>(o.degree_ - degree_);
    return r;
  }

  Monomial lcm(const Monomial& o) const {
    Monomial r(size_);
    unsigned deg = 0;
    for (std::size_t i = 0; i < size_; ++i) {
      r.exps_[i] = std::max(exps_[i], o.exps_[i]);
      deg += r.exps_[i];
    }
    r.degree_ = static_cast<std::uint16_t>(deg);
    return r;
  }

  bool coprime(const Monomial& o) const {
    for (std::size_t i = 0; i < size_; ++i)
      if (exps_[i] != 0 && o.exps_[i] != 0) return false;
    return true;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.size_ == b.size_ && a.degree_ == b.degree_ &&
           std::memcmp(a.exps_.data(), b.exps_.data(), a.size_) == 0;
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < size_; ++i) h = (h ^ exps_[i]) * 1099511628211ull;
    return h;
  }

 private:
  static std::uint8_t check_size(std::size_t n) {
    if (n > kMaxVariables) throw UsageError("more than 64 variables are not supported");
    return static_cast<std::uint8_t>(n);
  }

  std::array<std::uint8_t, kMaxVariables> exps_{};
  std::uint8_t size_ = 0;
  std::uint16_t degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Graded reverse lexicographic comparison: true iff a > b.
inline bool grevlex_greater(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() > b.degree();
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

struct GrevlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_greater(a, b); }
};

}  // namespace topsing
