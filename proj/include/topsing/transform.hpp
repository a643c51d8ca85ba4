#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "topsing/errors.hpp"
#include "topsing/linalg.hpp"
#include "topsing/random.hpp"
#include "topsing/series.hpp"

namespace topsing {

/// Formal change of coordinates x_i -> sum_j linear[i][j] x_j + higher[i], with
/// every higher[i] of order >= 2. Applying it to f gives f composed with these
/// images, known below `precision`.
class CoordinateChange {
 public:
  CoordinateChange() = default;

  CoordinateChange(Matrix linear, std::vector<SparseSeries> higher, Precision precision)
      : num_vars_(linear.size()), linear_(std::move(linear)), higher_(std::move(higher)), precision_(precision) {
    if (higher_.empty()) higher_.assign(num_vars_, SparseSeries(num_vars_));
    if (higher_.size() != num_vars_) throw UsageError("coordinate change: one correction per variable");
    for (const auto& row : linear_)
      if (row.size() != num_vars_) throw UsageError("coordinate change: linear part must be square");
    for (auto& h : higher_) {
      if (h.num_vars() != num_vars_) throw UsageError("coordinate change: correction arity mismatch");
      if (!h.is_zero() && h.order().value() < 2)
        throw UsageError("coordinate change: corrections must have order >= 2");
      h = h.truncated(precision_).with_precision(min(h.precision(), precision_));
    }
    if (determinant(linear_) == 0) throw UsageError("coordinate change: singular linear part");
  }

  static CoordinateChange identity(std::size_t n) { return linear_change(identity_matrix(n)); }

  static CoordinateChange linear_change(Matrix m) { return CoordinateChange(std::move(m), {}, Precision::infinite()); }

  /// Splits images without constant term into linear and higher parts.
  static CoordinateChange from_images(const std::vector<SparseSeries>& images, Precision precision) {
    const std::size_t n = images.size();
    Matrix lin(n, std::vector<Rational>(n, Rational(0)));
    std::vector<SparseSeries> higher;
    for (std::size_t i = 0; i < n; ++i) {
      const SparseSeries& g = images[i];
      if (g.num_vars() != n) throw UsageError("coordinate change: image arity mismatch");
      if (g.constant_term() != 0) throw UsageError("coordinate change: image with constant term");
      std::vector<SparseSeries::Term> rest;
      for (const auto& [m, c] : g.terms()) {
        if (m.degree() == 1) {
          for (std::size_t j = 0; j < n; ++j)
            if (m[j] == 1) lin[i][j] = c;
        } else {
          rest.emplace_back(m, c);
        }
      }
      higher.push_back(SparseSeries::from_terms(n, std::move(rest), g.precision()));
    }
    Precision p = precision;
    for (const auto& g : images) p = min(p, g.precision());
    return CoordinateChange(std::move(lin), std::move(higher), p);
  }

  std::size_t num_vars() const { return num_vars_; }
  const Matrix& linear() const { return linear_; }
  const std::vector<SparseSeries>& higher() const { return higher_; }
  Precision precision() const { return precision_; }

  bool is_linear() const {
    for (const auto& h : higher_)
      if (!h.is_zero()) return false;
    return true;
  }

  /// Image series of every coordinate.
  std::vector<SparseSeries> images() const {
    std::vector<SparseSeries> out;
    out.reserve(num_vars_);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      std::vector<SparseSeries::Term> terms;
      for (std::size_t j = 0; j < num_vars_; ++j)
        if (linear_[i][j] != 0) terms.emplace_back(Monomial::unit(num_vars_, j), linear_[i][j]);
      SparseSeries lin = SparseSeries::from_terms(num_vars_, std::move(terms));
      out.push_back((lin + higher_[i]).with_precision(is_linear() ? Precision::infinite() : precision_));
    }
    return out;
  }

  /// First `this`, then `next`: apply(f, compose) = apply(apply(f, this), next).
  CoordinateChange then(const CoordinateChange& next) const {
    if (next.num_vars_ != num_vars_) throw UsageError("coordinate change: arity mismatch");
    if (is_linear() && next.is_linear()) return linear_change(matrix_product(linear_, next.linear_));
    Precision p = min(precision_, next.precision_);
    std::vector<SparseSeries> inner = next.images();
    std::vector<SparseSeries> out;
    for (const auto& g : images()) out.push_back(substitute(g, inner, p));
    return from_images(out, p);
  }

  /// Inverse change below `target` (the stored precision by default). A
  /// nonlinear exact change has an infinite inverse, so it needs a finite target.
  CoordinateChange inverse(Precision target = Precision::infinite()) const {
    auto inv = matrix_inverse(linear_);
    if (!inv) throw UsageError("coordinate change: singular linear part");
    if (is_linear()) return linear_change(*inv);
    Precision p = min(target, precision_);
    if (p.is_infinite()) throw UsageError("inverse of a nonlinear change needs a finite precision");
    // psi = L^{-1} (y - H(psi)), each round fixes one more degree
    CoordinateChange lin_inv = linear_change(*inv);
    std::vector<SparseSeries> psi = lin_inv.images();
    for (auto& s : psi) s = s.with_precision(p);
    for (unsigned round = 0; round < p.value(); ++round) {
      std::vector<SparseSeries> rhs;
      for (std::size_t i = 0; i < num_vars_; ++i) {
        SparseSeries y = SparseSeries::variable(num_vars_, i, p);
        rhs.push_back(y - substitute(higher_[i], psi, p));
      }
      std::vector<SparseSeries> next;
      for (std::size_t i = 0; i < num_vars_; ++i) {
        SparseSeries acc(num_vars_, p);
        for (std::size_t j = 0; j < num_vars_; ++j)
          if ((*inv)[i][j] != 0) acc = acc + (*inv)[i][j] * rhs[j];
        next.push_back(acc);
      }
      bool stable = true;
      for (std::size_t i = 0; i < num_vars_; ++i)
        if (!(next[i] == psi[i])) stable = false;
      psi = std::move(next);
      if (stable) break;
    }
    return from_images(psi, p);
  }

 private:
  std::size_t num_vars_ = 0;
  Matrix linear_;
  std::vector<SparseSeries> higher_;
  Precision precision_;
};

inline SparseSeries apply_change(const SparseSeries& f, const CoordinateChange& c) {
  if (f.num_vars() != c.num_vars()) throw UsageError("apply_change: arity mismatch");
  if (determinant(c.linear()) == 0) throw UsageError("apply_change: singular linear part");
  return substitute(f, c.images(), c.precision());
}

/// Result of the splitting lemma: f after the change equals
/// sum_i lambda_i x_i^2 (i < tau) + g(x_tau, ...).
struct SplitResult {
  SparseSeries g;                // in the last num_vars - tau variables
  std::vector<Rational> lambda;  // nonzero diagonal coefficients
  CoordinateChange change;
  SparseSeries normal_form;      // the transformed f, in all variables
};

namespace detail {

/// Symmetric matrix of the quadratic form q: q(x) = x^T Q x.
inline Matrix quadratic_form_matrix(const SparseSeries& f) {
  const std::size_t n = f.num_vars();
  Matrix q(n, std::vector<Rational>(n, Rational(0)));
  for (const auto& [m, c] : f.terms()) {
    if (m.degree() != 2) continue;
    std::size_t a = n, b = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (m[i] == 2) a = b = i;
      if (m[i] == 1) (a == n ? a : b) = i;
    }
    if (a == b) {
      q[a][a] = c;
    } else {
      q[a][b] = c / 2;
      q[b][a] = c / 2;
    }
  }
  return q;
}

/// Congruence diagonalization: returns P with P^T Q P diagonal, nonzero
/// entries first.
inline Matrix diagonalizing_congruence(Matrix q) {
  const std::size_t n = q.size();
  Matrix p = identity_matrix(n);
  auto add_column = [&](std::size_t dst, std::size_t src, const Rational& s) {
    // x_dst' = x_dst + s x_src on columns: column dst += s * column src, same for rows
    for (std::size_t r = 0; r < n; ++r) p[r][dst] += s * p[r][src];
    for (std::size_t r = 0; r < n; ++r) q[r][dst] += s * q[r][src];
    for (std::size_t c = 0; c < n; ++c) q[dst][c] += s * q[src][c];
  };
  auto swap_index = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < n; ++r) std::swap(p[r][a], p[r][b]);
    for (std::size_t r = 0; r < n; ++r) std::swap(q[r][a], q[r][b]);
    std::swap(q[a], q[b]);
  };
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = n;
    for (std::size_t i = k; i < n && pivot == n; ++i)
      if (q[i][i] != 0) pivot = i;
    if (pivot == n) {
      for (std::size_t i = k; i < n && pivot == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (q[i][j] != 0) {
            add_column(i, j, Rational(1));  // q_ii becomes 2 q_ij
            pivot = i;
            break;
          }
    }
    if (pivot == n) break;
    swap_index(k, pivot);
    for (std::size_t j = k + 1; j < n; ++j) {
      if (q[k][j] == 0) continue;
      add_column(j, k, -q[k][j] / q[k][k]);
    }
  }
  return p;
}

}  // namespace detail

/// Splitting lemma by iterated completion of squares. The output is known
/// below `prec`; when the input already has the split shape after the linear
/// step, g keeps the input precision.
inline SplitResult split_quadratic(const SparseSeries& f, std::size_t tau, Precision prec) {
  const std::size_t n = f.num_vars();
  if (!f.order().equals(2)) throw UsageError("split_quadratic: input must have order 2");
  Matrix q = detail::quadratic_form_matrix(f);
  std::size_t rank = matrix_rank(q);
  if (rank != tau)
    throw InvariantViolation("split_quadratic: supplied tau " + std::to_string(tau) +
                             " differs from quadratic rank " + std::to_string(rank));
  CoordinateChange change = CoordinateChange::linear_change(detail::diagonalizing_congruence(q));
  SparseSeries h = apply_change(f, change);
  std::vector<Rational> lambda;
  for (std::size_t i = 0; i < tau; ++i) lambda.push_back(h.coefficient(Monomial::unit(n, i, 2)));

  auto block_var = [&](const Monomial& m) -> std::size_t {
    for (std::size_t i = 0; i < tau; ++i)
      if (m[i] != 0) return i;
    return tau;
  };
  auto is_square_term = [&](const Monomial& m) {
    return m.degree() == 2 && block_var(m) < tau && m[block_var(m)] == 2;
  };
  auto already_split = [&](const SparseSeries& s) {
    for (const auto& [m, c] : s.terms())
      if (block_var(m) < tau && !is_square_term(m)) return false;
    return true;
  };

  if (!already_split(h)) {
    Precision p = min(prec, f.precision());
    if (p.is_infinite()) throw UsageError("split_quadratic: needs a finite precision");
    h = h.truncated(p).with_precision(p);
    std::vector<SparseSeries> images = change.images();
    for (auto& s : images) s = s.with_precision(p);
    for (unsigned k = 3; k < p.value(); ++k) {
      // degree-k terms x_i * P_i with x_i the first block variable dividing them
      std::vector<std::vector<SparseSeries::Term>> parts(tau);
      for (const auto& [m, c] : h.terms()) {
        if (m.degree() != k) continue;
        std::size_t i = block_var(m);
        if (i == tau) continue;
        Monomial rest = m;
        rest.set(i, m[i] - 1);
        parts[i].emplace_back(rest, c);
      }
      for (std::size_t i = 0; i < tau; ++i) {
        if (parts[i].empty()) continue;
        SparseSeries shift = Rational(-1) / (2 * lambda[i]) * SparseSeries::from_terms(n, std::move(parts[i]));
        h = shift_variable(h, i, shift, p);
        for (auto& s : images) s = shift_variable(s, i, shift, p);
      }
    }
    change = CoordinateChange::from_images(images, p);
  }

  for (const auto& [m, c] : h.terms())
    if (block_var(m) < tau && !is_square_term(m))
      throw InvariantViolation("split_quadratic: cross term survived completion of squares");
  std::vector<std::size_t> keep;
  for (std::size_t i = tau; i < n; ++i) keep.push_back(i);
  SparseSeries rest(n, h.precision());
  {
    std::vector<SparseSeries::Term> terms;
    for (const auto& [m, c] : h.terms())
      if (block_var(m) == tau) terms.emplace_back(m, c);
    rest = SparseSeries::from_terms(n, std::move(terms), h.precision());
  }
  SplitResult out{rest.restricted_to(keep), lambda, change, h};
  return out;
}

/// Depressed cubic normal form u * (z^3 + g3 z + g4) of a residual g whose
/// first variable z is regular of order 3.
struct DepressedCubic {
  SparseSeries g3;    // in the variables after z
  SparseSeries g4;    // in the variables after z
  SparseSeries unit;  // in all variables of g
  CoordinateChange change;
};

namespace detail {

/// Splits s = low + z^3 * high, low of z-degree < 3.
inline std::pair<SparseSeries, SparseSeries> split_by_cube(const SparseSeries& s) {
  const std::size_t n = s.num_vars();
  std::vector<SparseSeries::Term> low, high;
  for (const auto& [m, c] : s.terms()) {
    if (m[0] < 3) {
      low.emplace_back(m, c);
    } else {
      Monomial r = m;
      r.set(0, m[0] - 3);
      high.emplace_back(r, c);
    }
  }
  Precision hp = s.precision().is_infinite() ? s.precision()
                 : s.precision().value() > 3 ? Precision(s.precision().value() - 3)
                                             : Precision(1);
  return {SparseSeries::from_terms(n, std::move(low), s.precision()),
          SparseSeries::from_terms(n, std::move(high), hp)};
}

/// Inverse of a unit series below p.
inline SparseSeries unit_inverse(const SparseSeries& u, Precision p) {
  if (p.is_infinite()) throw UsageError("unit_inverse: needs a finite precision");
  Rational c0 = u.constant_term();
  if (c0 == 0) throw UsageError("unit_inverse: not a unit");
  const std::size_t n = u.num_vars();
  // u = c0 (1 - e), u^{-1} = c0^{-1} sum e^k
  SparseSeries e = SparseSeries::constant(n, Rational(1)) - (1 / c0) * u.truncated(p);
  e = e.with_precision(min(p, u.precision()));
  SparseSeries sum = SparseSeries::constant(n, Rational(1), e.precision());
  SparseSeries power = sum;
  for (unsigned k = 1; k < p.value(); ++k) {
    power = SparseSeries::multiply(power, e, p);
    if (power.is_zero()) break;
    sum = sum + power;
  }
  return (1 / c0) * sum;
}

/// Coefficient of z^k as a series in the remaining variables.
inline SparseSeries z_coefficient(const SparseSeries& s, unsigned k, Precision p) {
  const std::size_t n = s.num_vars();
  std::vector<SparseSeries::Term> terms;
  for (const auto& [m, c] : s.terms()) {
    if (m[0] != k) continue;
    Monomial r(n - 1);
    for (std::size_t i = 1; i < n; ++i) r.set(i - 1, m[i]);
    terms.emplace_back(r, c);
  }
  return SparseSeries::from_terms(n - 1, std::move(terms), p);
}

inline Precision lowered(Precision p, unsigned by) {
  if (p.is_infinite()) return p;
  return p.value() > by ? Precision(p.value() - by) : Precision(1);
}

inline DepressedCubic depress_tschirnhausen(const SparseSeries& p2, const SparseSeries& p1, const SparseSeries& p0,
                                            std::size_t n, Precision p) {
  SparseSeries g3 = p1 - Rational(1, 3) * (p2 * p2);
  SparseSeries g4 = p0 - Rational(1, 3) * (p1 * p2) + Rational(2, 27) * (p2 * p2 * p2);
  std::vector<std::size_t> tail;
  for (std::size_t i = 1; i < n; ++i) tail.push_back(i);
  SparseSeries shift = Rational(-1, 3) * p2.relabeled(n, tail);
  std::vector<SparseSeries> images;
  for (std::size_t i = 0; i < n; ++i) images.push_back(SparseSeries::variable(n, i, p));
  images[0] = images[0] + shift;
  DepressedCubic out{g3, g4, SparseSeries(n), CoordinateChange::from_images(images, p)};
  return out;
}

/// g = c z^3 + a2 z^2 + a1 z + a0 exactly: no division needed, only the shift.
inline DepressedCubic depress_exact(const SparseSeries& g) {
  const std::size_t n = g.num_vars();
  const Rational c = g.coefficient(Monomial::unit(n, 0, 3));
  const Precision inf = Precision::infinite();
  SparseSeries scaled = (1 / c) * g;
  DepressedCubic out = depress_tschirnhausen(z_coefficient(scaled, 2, inf), z_coefficient(scaled, 1, inf),
                                             z_coefficient(scaled, 0, inf), n, inf);
  out.unit = SparseSeries::constant(n, c);
  return out;
}

}  // namespace detail

/// Weierstrass division by z^3 followed by the Tschirnhausen shift
/// z -> z - p2/3. Requires the coefficient of z^3 to be nonzero.
inline DepressedCubic depress_cubic(const SparseSeries& g, Precision prec) {
  const std::size_t n = g.num_vars();
  if (n == 0) throw UsageError("depress_cubic: no variables");
  if (!g.order().equals(3)) throw UsageError("depress_cubic: residual must have order 3");
  const Monomial cube = Monomial::unit(n, 0, 3);
  if (g.coefficient(cube) == 0) throw NeedsRotation("depress_cubic: residual is not regular of order 3 in its first variable");
  if (g.is_exact()) {
    bool polynomial_in_z = true;
    for (const auto& [m, c] : g.terms())
      if (m[0] >= 3 && !(m == cube)) polynomial_in_z = false;
    if (polynomial_in_z) return detail::depress_exact(g);
  }
  Precision p = min(prec, g.precision());
  if (p.is_infinite()) throw UsageError("depress_cubic: needs a finite precision");
  SparseSeries gt = g.truncated(p).with_precision(p);

  auto [a, b] = detail::split_by_cube(gt);
  SparseSeries b_inv = detail::unit_inverse(b, p);
  // z^3 = Q g + r by iterated division; the z'-adic order rises every round
  SparseSeries remainder(n, p), quotient(n, p);
  SparseSeries current = SparseSeries::monomial(n, cube, Rational(1), p);
  for (unsigned round = 0; round <= p.value() && !current.is_zero(); ++round) {
    auto [low, high] = detail::split_by_cube(current);
    remainder = remainder + low;
    SparseSeries q_part = SparseSeries::multiply(b_inv, high, p);
    quotient = quotient + q_part;
    current = -SparseSeries::multiply(q_part, a, p);
  }
  if (!current.is_zero()) throw InvariantViolation("depress_cubic: division did not converge");

  // P = z^3 - r = z^3 + p2 z^2 + p1 z + p0
  // remainder known below total degree q leaves its z^k coefficient known below q - k
  const Precision q = remainder.precision();
  SparseSeries p2 = -detail::z_coefficient(remainder, 2, detail::lowered(q, 2));
  SparseSeries p1 = -detail::z_coefficient(remainder, 1, detail::lowered(q, 1));
  SparseSeries p0 = -detail::z_coefficient(remainder, 0, q);
  DepressedCubic out = detail::depress_tschirnhausen(p2, p1, p0, n, p);
  SparseSeries shift = out.change.higher()[0];
  for (std::size_t j = 0; j < n; ++j)
    if (out.change.linear()[0][j] != 0 && j != 0)
      shift = shift + SparseSeries::monomial(n, Monomial::unit(n, j), out.change.linear()[0][j]);

  // g = Q^{-1} P, so after the shift the unit is Q^{-1} composed with it
  SparseSeries unit = detail::unit_inverse(quotient, detail::lowered(p, 3));
  out.unit = shift_variable(unit, 0, shift, unit.precision());
  return out;
}

/// Invertible linear change with integer entries in [-range, range].
inline CoordinateChange random_linear_change(std::size_t n, SeededRng& rng, int range = 3) {
  if (range < 1) throw UsageError("random_linear_change: range must be positive");
  while (true) {
    Matrix m(n, std::vector<Rational>(n, Rational(0)));
    for (auto& row : m)
      for (auto& e : row) e = Rational(static_cast<long>(rng.uniform(-range, range)));
    if (determinant(m) != 0) return CoordinateChange::linear_change(std::move(m));
  }
}

/// Draws a random linear change with entries in [-range, range] until the
/// coefficient of z^3 is nonzero. The identity is tried first.
inline std::pair<SparseSeries, CoordinateChange> regularize_cubic(const SparseSeries& g, std::uint64_t seed,
                                                                  unsigned retry_limit = 16, int range = 3) {
  const std::size_t n = g.num_vars();
  const Monomial cube = Monomial::unit(n, 0, 3);
  if (g.coefficient(cube) != 0) return {g, CoordinateChange::identity(n)};
  SeededRng rng(seed);
  for (unsigned attempt = 0; attempt < retry_limit; ++attempt) {
    Matrix m(n, std::vector<Rational>(n, Rational(0)));
    for (auto& row : m)
      for (auto& e : row) e = Rational(static_cast<long>(rng.uniform(-range, range)));
    if (determinant(m) == 0) continue;
    CoordinateChange c = CoordinateChange::linear_change(m);
    SparseSeries h = apply_change(g, c);
    if (h.coefficient(cube) != 0) return {h, c};
  }
  throw NeedsRotation("no regularizing rotation found within the retry limit");
}

/// Restricts f to the hyperplane sum_j lambda_j x_j = 0 by solving for the
/// eliminated variable; the remaining variables keep their relative order.
inline SparseSeries hyperplane_cut(const SparseSeries& f, const std::vector<Rational>& lambda,
                                   std::size_t eliminated_var) {
  const std::size_t n = f.num_vars();
  if (lambda.size() != n) throw UsageError("hyperplane_cut: one coefficient per variable");
  if (eliminated_var >= n) throw UsageError("hyperplane_cut: eliminated variable out of range");
  if (lambda[eliminated_var] == 0) throw UsageError("hyperplane_cut: eliminated variable has zero coefficient");
  if (n == 1) throw UsageError("hyperplane_cut: nothing left after the cut");
  const std::size_t m = n - 1;
  std::vector<SparseSeries> images(n, SparseSeries(m));
  std::vector<SparseSeries::Term> solved;
  std::size_t next = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == eliminated_var) continue;
    images[j] = SparseSeries::variable(m, next);
    if (lambda[j] != 0) solved.emplace_back(Monomial::unit(m, next), -lambda[j] / lambda[eliminated_var]);
    ++next;
  }
  images[eliminated_var] = SparseSeries::from_terms(m, std::move(solved));
  return substitute(f, images, f.precision());
}

}  // namespace topsing
