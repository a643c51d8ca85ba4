#pragma once

#include <algorithm>
#include <climits>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topsing/errors.hpp"
#include "topsing/monomial.hpp"
#include "topsing/rational.hpp"

namespace topsing {

/// Terms of total degree below the precision are exact; nothing is known at
/// or above it. An infinite precision marks an exact polynomial.
class Precision {
 public:
  constexpr Precision() = default;  // infinite
  constexpr explicit Precision(unsigned p) : value_(p) {
    if (p == 0) throw UsageError("precision must be positive");
  }
  static constexpr Precision infinite() { return Precision(); }

  constexpr bool is_infinite() const { return value_ == kInf; }
  constexpr unsigned value() const { return value_; }

  /// True iff a term of this degree is retained.
  constexpr bool keeps(unsigned degree) const { return degree < value_; }

  friend constexpr bool operator==(Precision a, Precision b) { return a.value_ == b.value_; }
  friend constexpr Precision min(Precision a, Precision b) { return a.value_ <= b.value_ ? a : b; }

  std::string str() const { return is_infinite() ? "inf" : std::to_string(value_); }

 private:
  static constexpr unsigned kInf = UINT_MAX;
  unsigned value_ = kInf;
};

/// Order (multiplicity) of a series: a finite value, infinity (the exact zero
/// polynomial), or only a lower bound when truncation hides every term.
class Order {
 public:
  enum class Kind { Finite, Infinite, AtLeast };

  static Order finite(unsigned v) { return Order(Kind::Finite, v); }
  static Order infinite() { return Order(Kind::Infinite, 0); }
  static Order at_least(unsigned v) { return Order(Kind::AtLeast, v); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_infinite() const { return kind_ == Kind::Infinite; }
  bool is_unknown() const { return kind_ == Kind::AtLeast; }

  /// Exact value for Finite, lower bound for AtLeast.
  unsigned value() const { return value_; }

  bool equals(unsigned v) const { return is_finite() && value_ == v; }
  /// Certainly >= v.
  bool at_least_certainly(unsigned v) const { return is_infinite() || value_ >= v; }

  Order scaled(unsigned k) const {
    return kind_ == Kind::Infinite ? *this : Order(kind_, value_ * k);
  }

  friend bool operator==(const Order& a, const Order& b) {
    return a.kind_ == b.kind_ && (a.kind_ == Kind::Infinite || a.value_ == b.value_);
  }

  std::string str() const {
    switch (kind_) {
      case Kind::Finite: return std::to_string(value_);
      case Kind::Infinite: return "inf";
      case Kind::AtLeast: return ">=" + std::to_string(value_);
    }
    return "?";
  }

 private:
  Order(Kind k, unsigned v) : kind_(k), value_(v) {}
  Kind kind_;
  unsigned value_;
};

/// Minimum of two orders; stays a bound when the bound might be the minimum.
inline Order min(const Order& a, const Order& b) {
  if (a.is_infinite()) return b;
  if (b.is_infinite()) return a;
  if (a.is_finite() && b.is_finite()) return Order::finite(std::min(a.value(), b.value()));
  if (a.is_finite() && a.value() <= b.value()) return a;
  if (b.is_finite() && b.value() <= a.value()) return b;
  return Order::at_least(std::min(a.value(), b.value()));
}

/// Exact multivariate polynomial or truncated power series over Q.
/// Terms are kept sorted by descending grevlex order with nonzero coefficients
/// and degrees below the precision.
class SparseSeries {
 public:
  using Term = std::pair<Monomial, Rational>;

  SparseSeries() = default;
  explicit SparseSeries(std::size_t num_vars, Precision prec = Precision::infinite())
      : num_vars_(num_vars), precision_(prec) {
    if (num_vars > kMaxVariables) throw UsageError("more than 64 variables are not supported");
  }

  static SparseSeries constant(std::size_t num_vars, const Rational& c,
                               Precision prec = Precision::infinite()) {
    SparseSeries s(num_vars, prec);
    if (c != 0 && prec.keeps(0)) s.terms_.emplace_back(Monomial(num_vars), c);
    return s;
  }

  static SparseSeries variable(std::size_t num_vars, std::size_t var,
                               Precision prec = Precision::infinite()) {
    return monomial(num_vars, Monomial::unit(num_vars, var), Rational(1), prec);
  }

  static SparseSeries monomial(std::size_t num_vars, const Monomial& m, const Rational& c,
                               Precision prec = Precision::infinite()) {
    SparseSeries s(num_vars, prec);
    if (m.size() != num_vars) throw UsageError("monomial arity does not match series");
    if (c != 0 && prec.keeps(m.degree())) s.terms_.emplace_back(m, c);
    return s;
  }

  /// Builds from arbitrary (possibly repeated, unsorted) terms.
  static SparseSeries from_terms(std::size_t num_vars, std::vector<Term> terms,
                                 Precision prec = Precision::infinite()) {
    SparseSeries s(num_vars, prec);
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    for (auto& [m, c] : terms) {
      if (m.size() != num_vars) throw UsageError("monomial arity does not match series");
      if (!prec.keeps(m.degree())) continue;
      acc[m] += c;
    }
    s.adopt(acc);
    return s;
  }

  std::size_t num_vars() const { return num_vars_; }
  Precision precision() const { return precision_; }
  bool is_exact() const { return precision_.is_infinite(); }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  /// Empty term map (zero polynomial, or zero below the precision).
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& k) { return grevlex_greater(t.first, k); });
    if (it != terms_.end() && it->first == m) return it->second;
    return Rational(0);
  }

  Rational constant_term() const { return coefficient(Monomial(num_vars_)); }

  /// Largest total degree of a stored term (0 for the empty series).
  unsigned degree() const { return terms_.empty() ? 0 : terms_.front().first.degree(); }

  Order order() const {
    if (terms_.empty()) return precision_.is_infinite() ? Order::infinite() : Order::at_least(precision_.value());
    return Order::finite(terms_.back().first.degree());
  }

  SparseSeries truncated(Precision p) const {
    SparseSeries r(num_vars_, min(p, precision_));
    for (const auto& t : terms_)
      if (r.precision_.keeps(t.first.degree())) r.terms_.push_back(t);
    return r;
  }

  /// Same terms with precision forced to p; drops terms at degree >= p.
  SparseSeries with_precision(Precision p) const {
    SparseSeries r = truncated(p);
    r.precision_ = p;
    return r;
  }

  SparseSeries homogeneous_component(unsigned k) const {
    SparseSeries r(num_vars_);
    for (const auto& t : terms_)
      if (t.first.degree() == k) r.terms_.push_back(t);
    return r;
  }

  /// Lowest-degree homogeneous part, as an exact form.
  SparseSeries initial_form() const {
    if (terms_.empty()) return SparseSeries(num_vars_);
    return homogeneous_component(terms_.back().first.degree());
  }

  bool is_homogeneous() const {
    return terms_.empty() || terms_.front().first.degree() == terms_.back().first.degree();
  }

  bool involves(std::size_t var) const {
    for (const auto& t : terms_)
      if (t.first[var] != 0) return true;
    return false;
  }

  /// Partial derivative; precision drops by one for truncated series.
  SparseSeries derivative(std::size_t var) const {
    Precision p = precision_.is_infinite() ? precision_
                  : precision_.value() > 1 ? Precision(precision_.value() - 1)
                                           : Precision(1);
    std::vector<Term> out;
    for (const auto& [m, c] : terms_) {
      unsigned e = m[var];
      if (e == 0) continue;
      Monomial d = m;
      d.set(var, e - 1);
      out.emplace_back(d, c * e);
    }
    SparseSeries r = from_terms(num_vars_, std::move(out), p);
    if (!precision_.is_infinite() && precision_.value() == 1) r.terms_.clear();
    return r;
  }

  SparseSeries operator-() const {
    SparseSeries r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }

  friend SparseSeries operator+(const SparseSeries& a, const SparseSeries& b) { return combine(a, b, false); }
  friend SparseSeries operator-(const SparseSeries& a, const SparseSeries& b) { return combine(a, b, true); }

  friend SparseSeries operator*(const Rational& c, const SparseSeries& a) {
    SparseSeries r(a.num_vars_, a.precision_);
    if (c == 0) return r;
    r.terms_.reserve(a.terms_.size());
    for (const auto& [m, v] : a.terms_) r.terms_.emplace_back(m, c * v);
    return r;
  }

  friend SparseSeries operator*(const SparseSeries& a, const SparseSeries& b) {
    check_arity(a, b);
    return multiply(a, b, min(a.precision_, b.precision_));
  }

  /// Lowest stored degree; the precision itself when nothing is stored.
  unsigned low_degree() const {
    return terms_.empty() ? precision_.value() : terms_.back().first.degree();
  }

  /// a = A + O(pa), b = B + O(pb) give ab correct below min(pa + ord B, pb + ord A).
  static Precision product_precision(const SparseSeries& a, const SparseSeries& b) {
    auto shifted = [](Precision p, unsigned d) {
      if (p.is_infinite() || d == Precision::infinite().value()) return Precision::infinite();
      return Precision(p.value() + d);
    };
    return min(shifted(a.precision_, b.low_degree()), shifted(b.precision_, a.low_degree()));
  }

  /// Product truncated below `target` (in addition to what the operands determine).
  static SparseSeries multiply(const SparseSeries& a, const SparseSeries& b, Precision target) {
    check_arity(a, b);
    Precision p = min(target, product_precision(a, b));
    SparseSeries r(a.num_vars_, p);
    if (a.terms_.empty() || b.terms_.empty()) return r;
    if (b.terms_.size() == 1 || a.terms_.size() == 1) {
      const SparseSeries& big = a.terms_.size() == 1 ? b : a;
      const Term& t = a.terms_.size() == 1 ? a.terms_.front() : b.terms_.front();
      for (const auto& [m, c] : big.terms_) {
        if (!p.keeps(m.degree() + t.first.degree())) continue;
        r.terms_.emplace_back(m * t.first, c * t.second);
      }
      // multiplication by a monomial preserves the monomial order
      return r;
    }
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    acc.reserve(a.terms_.size() * 2 + b.terms_.size() * 2);
    Rational prod;
    for (const auto& [ma, ca] : a.terms_) {
      // b is sorted by descending degree; skip the prefix that overflows p
      for (auto it = b.terms_.rbegin(); it != b.terms_.rend(); ++it) {
        if (!p.keeps(ma.degree() + it->first.degree())) break;
        mpq_mul(prod.get_mpq_t(), ca.get_mpq_t(), it->second.get_mpq_t());
        auto [slot, inserted] = acc.try_emplace(ma * it->first);
        if (inserted)
          slot->second = prod;
        else
          slot->second += prod;
      }
    }
    r.adopt(acc);
    return r;
  }

  /// Integer power with truncation at `target`.
  SparseSeries pow(unsigned k, Precision target = Precision::infinite()) const {
    SparseSeries result = constant(num_vars_, Rational(1), min(target, precision_));
    SparseSeries base = truncated(target);
    while (k > 0) {
      if (k & 1u) result = multiply(result, base, target);
      k >>= 1u;
      if (k > 0) base = multiply(base, base, target);
    }
    return result;
  }

  friend bool operator==(const SparseSeries& a, const SparseSeries& b) {
    if (a.num_vars_ != b.num_vars_ || !(a.precision_ == b.precision_)) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].first == b.terms_[i].first) || a.terms_[i].second != b.terms_[i].second) return false;
    return true;
  }

  /// Equality of the term maps below the smaller of the two precisions.
  bool agrees_with(const SparseSeries& o) const {
    Precision p = min(precision_, o.precision_);
    SparseSeries d = truncated(p) - o.truncated(p);
    return d.is_zero();
  }

  /// Embeds into a larger variable space; variable i maps to positions[i].
  SparseSeries relabeled(std::size_t new_num_vars, const std::vector<std::size_t>& positions) const {
    if (positions.size() != num_vars_) throw UsageError("relabel map has wrong length");
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [m, c] : terms_) {
      Monomial n(new_num_vars);
      for (std::size_t i = 0; i < num_vars_; ++i)
        if (m[i] != 0) n.set(positions[i], n[positions[i]] + m[i]);
      out.emplace_back(n, c);
    }
    return from_terms(new_num_vars, std::move(out), precision_);
  }

  /// Restricts to the variables listed (all other variables must be absent).
  SparseSeries restricted_to(const std::vector<std::size_t>& keep) const {
    std::vector<Term> out;
    for (const auto& [m, c] : terms_) {
      Monomial n(keep.size());
      unsigned kept = 0;
      for (std::size_t j = 0; j < keep.size(); ++j) {
        n.set(j, m[keep[j]]);
        kept += m[keep[j]];
      }
      if (kept != m.degree()) throw InvariantViolation("restriction drops a variable that occurs");
      out.emplace_back(n, c);
    }
    return from_terms(keep.size(), std::move(out), precision_);
  }

 private:
  static void check_arity(const SparseSeries& a, const SparseSeries& b) {
    if (a.num_vars_ != b.num_vars_) throw UsageError("series have different numbers of variables");
  }

  void adopt(std::unordered_map<Monomial, Rational, MonomialHash>& acc) {
    terms_.clear();
    terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (c != 0) terms_.emplace_back(m, std::move(c));
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& x, const Term& y) { return grevlex_greater(x.first, y.first); });
  }

  static SparseSeries combine(const SparseSeries& a, const SparseSeries& b, bool subtract) {
    check_arity(a, b);
    Precision p = min(a.precision_, b.precision_);
    SparseSeries r(a.num_vars_, p);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    auto push = [&](const Monomial& m, const Rational& c) {
      if (c != 0 && p.keeps(m.degree())) r.terms_.emplace_back(m, c);
    };
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && grevlex_greater(a.terms_[i].first, b.terms_[j].first))) {
        push(a.terms_[i].first, a.terms_[i].second);
        ++i;
      } else if (i == a.terms_.size() || grevlex_greater(b.terms_[j].first, a.terms_[i].first)) {
        push(b.terms_[j].first, subtract ? Rational(-b.terms_[j].second) : b.terms_[j].second);
        ++j;
      } else {
        Rational c = subtract ? Rational(a.terms_[i].second - b.terms_[j].second)
                              : Rational(a.terms_[i].second + b.terms_[j].second);
        push(a.terms_[i].first, c);
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::size_t num_vars_ = 0;
  Precision precision_;
  std::vector<Term> terms_;
};

/// Precision of f(images): exact images and exact f give `target`; otherwise
/// the smallest known precision bounds the result.
inline Precision substitution_precision(const SparseSeries& f, const std::vector<SparseSeries>& images,
                                        Precision target) {
  Precision p = min(target, f.precision());
  for (const auto& g : images) p = min(p, g.precision());
  return p;
}

/// f(images) truncated below target_precision.
inline SparseSeries substitute(const SparseSeries& f, const std::vector<SparseSeries>& images,
                               Precision target_precision = Precision::infinite()) {
  if (images.size() != f.num_vars()) throw UsageError("substitute: need one image per variable");
  if (images.empty()) return f.truncated(target_precision);
  const std::size_t out_vars = images.front().num_vars();
  for (const auto& g : images)
    if (g.num_vars() != out_vars) throw UsageError("substitute: images live in different rings");
  bool any_constant = false;
  for (std::size_t i = 0; i < images.size(); ++i)
    if (f.involves(i) && images[i].constant_term() != 0) any_constant = true;
  if (any_constant && !f.is_exact())
    throw UsageError("substitute: image with nonzero constant term into a truncated series");

  Precision p = substitution_precision(f, images, target_precision);
  // power cache per variable
  std::vector<std::vector<SparseSeries>> powers(images.size());
  auto power = [&](std::size_t var, unsigned k) -> const SparseSeries& {
    auto& cache = powers[var];
    if (cache.empty()) cache.push_back(SparseSeries::constant(out_vars, Rational(1), p));
    while (cache.size() <= k) cache.push_back(SparseSeries::multiply(cache.back(), images[var], p));
    return cache[k];
  };

  SparseSeries acc(out_vars, p);
  for (const auto& [m, c] : f.terms()) {
    SparseSeries term = SparseSeries::constant(out_vars, c, p);
    for (std::size_t v = 0; v < m.size() && !term.is_zero(); ++v)
      if (m[v] != 0) term = SparseSeries::multiply(term, power(v, m[v]), p);
    acc = acc + term;
  }
  return acc.with_precision(p);
}

/// f with variable `var` replaced by x_var + shift, computed through the Taylor
/// expansion sum_l (d^l f / dx_var^l) shift^l / l!. Cheap when shift has high order.
inline SparseSeries shift_variable(const SparseSeries& f, std::size_t var, const SparseSeries& shift,
                                   Precision target = Precision::infinite()) {
  if (shift.num_vars() != f.num_vars()) throw UsageError("shift_variable: arity mismatch");
  if (!f.is_exact() && shift.constant_term() != 0)
    throw UsageError("shift_variable: shift with constant term into a truncated series");
  Precision p = min(target, min(f.precision(), shift.precision()));
  SparseSeries result = f.truncated(p);
  if (shift.is_zero()) return result.with_precision(p);
  const Order shift_order = shift.order();
  SparseSeries deriv = f;
  SparseSeries shift_power = SparseSeries::constant(f.num_vars(), Rational(1), p);
  Rational factorial(1);
  for (unsigned l = 1;; ++l) {
    deriv = deriv.derivative(var);
    if (deriv.is_zero()) break;
    if (shift_order.is_finite() && !p.is_infinite() && shift_order.value() * l >= p.value()) break;
    shift_power = SparseSeries::multiply(shift_power, shift, p);
    if (shift_power.is_zero()) break;
    factorial *= l;
    Rational inv = 1 / factorial;
    // derivative precision loss does not matter: exact f keeps infinite precision,
    // and for truncated f the term degree bound below is what counts
    SparseSeries d = deriv.is_exact() ? deriv : deriv.with_precision(p);
    result = result + inv * SparseSeries::multiply(d, shift_power, p);
  }
  return result.with_precision(p);
}

}  // namespace topsing
