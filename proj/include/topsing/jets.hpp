#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "topsing/errors.hpp"
#include "topsing/series.hpp"

namespace topsing {

/// Flattened index of X_{i,n} (both 0-based base index i, level n >= 1) in
/// the origin-centered jet ring, ordered by (level, base index).
inline std::size_t origin_jet_index(std::size_t base_vars, std::size_t i, unsigned level) {
  return (level - 1) * base_vars + i;
}

/// Name X_<i>_<n> with 1-based base index, for the flattened origin index.
inline std::string origin_jet_name(std::size_t base_vars, std::size_t index) {
  return "X_" + std::to_string(index % base_vars + 1) + "_" + std::to_string(index / base_vars + 1);
}

/// Same for the full jet ring that includes level 0.
inline std::string full_jet_name(std::size_t base_vars, std::size_t index) {
  return "X_" + std::to_string(index % base_vars + 1) + "_" + std::to_string(index / base_vars);
}

/// Level-weight of every origin jet variable, w(X_{i,n}) = n.
inline std::vector<unsigned> origin_level_weights(std::size_t base_vars, unsigned m) {
  std::vector<unsigned> w;
  for (unsigned n = 1; n <= m; ++n)
    for (std::size_t i = 0; i < base_vars; ++i) w.push_back(n);
  return w;
}

namespace detail {

using TSeries = std::vector<SparseSeries>;  // coefficient of t^n at position n

inline TSeries t_multiply(const TSeries& a, const TSeries& b, unsigned m, std::size_t nv) {
  TSeries r(m + 1, SparseSeries(nv));
  for (unsigned i = 0; i <= m; ++i) {
    if (a[i].is_zero()) continue;
    for (unsigned j = 0; i + j <= m; ++j) {
      if (b[j].is_zero()) continue;
      r[i + j] = r[i + j] + a[i] * b[j];
    }
  }
  return r;
}

/// Coefficients of t^0..t^m of f(sum_n X_n t^n), where images[i] holds the
/// t-expansion of x_i.
inline TSeries t_expand(const SparseSeries& f, const std::vector<TSeries>& images, unsigned m, std::size_t nv) {
  const std::size_t base = f.num_vars();
  std::vector<std::vector<TSeries>> powers(base);
  auto power = [&](std::size_t v, unsigned k) -> const TSeries& {
    auto& cache = powers[v];
    if (cache.empty()) {
      TSeries one(m + 1, SparseSeries(nv));
      one[0] = SparseSeries::constant(nv, Rational(1));
      cache.push_back(std::move(one));
    }
    while (cache.size() <= k) cache.push_back(t_multiply(cache.back(), images[v], m, nv));
    return cache[k];
  };
  TSeries acc(m + 1, SparseSeries(nv));
  for (const auto& [mono, c] : f.terms()) {
    TSeries term(m + 1, SparseSeries(nv));
    term[0] = SparseSeries::constant(nv, c);
    for (std::size_t v = 0; v < base; ++v)
      if (mono[v] != 0) term = t_multiply(term, power(v, mono[v]), m, nv);
    for (unsigned n = 0; n <= m; ++n) acc[n] = acc[n] + term[n];
  }
  return acc;
}

}  // namespace detail

/// Taylor coefficients F_0..F_m of f(sum_{n>=0} X_n t^n) in N(m+1) variables,
/// X_{i,n} at index n*N + i.
inline std::vector<SparseSeries> taylor_coefficients(const SparseSeries& f, unsigned m) {
  if (!f.is_exact()) throw UsageError("taylor_coefficients: input must be an exact polynomial");
  const std::size_t base = f.num_vars();
  const std::size_t nv = base * (m + 1);
  if (nv > kMaxVariables) throw UsageError("jet ring would exceed 64 variables");
  std::vector<detail::TSeries> images(base, detail::TSeries(m + 1, SparseSeries(nv)));
  for (std::size_t i = 0; i < base; ++i)
    for (unsigned n = 0; n <= m; ++n) images[i][n] = SparseSeries::variable(nv, n * base + i);
  return detail::t_expand(f, images, m, nv);
}

struct JetIdeal {
  unsigned level = 0;
  std::size_t base_vars = 0;
  std::vector<SparseSeries> generators;  // in base_vars * level variables
  std::vector<unsigned> generator_levels;  // n of each F^0_n kept

  std::size_t num_vars() const { return base_vars * level; }
};

/// Generators F^0_n (1 <= n <= m) of the jet scheme at the origin, with the
/// level-0 variables set to zero. Zero generators are dropped.
inline JetIdeal jet_ideal_at_origin(const std::vector<SparseSeries>& fs, unsigned m) {
  if (fs.empty()) throw UsageError("jet ideal: no equations");
  if (m == 0) throw UsageError("jet ideal: level must be at least 1");
  const std::size_t base = fs.front().num_vars();
  const std::size_t nv = base * m;
  if (nv > kMaxVariables) throw UsageError("jet ring would exceed 64 variables");
  JetIdeal out;
  out.level = m;
  out.base_vars = base;
  std::vector<detail::TSeries> images(base, detail::TSeries(m + 1, SparseSeries(nv)));
  for (std::size_t i = 0; i < base; ++i)
    for (unsigned n = 1; n <= m; ++n) images[i][n] = SparseSeries::variable(nv, origin_jet_index(base, i, n));
  for (const auto& f : fs) {
    if (f.num_vars() != base) throw UsageError("jet ideal: equations live in different rings");
    if (!f.is_exact()) throw UsageError("jet ideal: equations must be exact polynomials");
    if (f.constant_term() != 0) throw UsageError("jet ideal: equation does not vanish at the origin");
    detail::TSeries coeffs = detail::t_expand(f, images, m, nv);
    for (unsigned n = 1; n <= m; ++n) {
      if (coeffs[n].is_zero()) continue;
      out.generators.push_back(coeffs[n]);
      out.generator_levels.push_back(n);
    }
  }
  return out;
}

/// The partial derivatives of f.
inline std::vector<SparseSeries> jacobian_ideal(const SparseSeries& f) {
  std::vector<SparseSeries> out;
  for (std::size_t i = 0; i < f.num_vars(); ++i) out.push_back(f.derivative(i));
  return out;
}

}  // namespace topsing
