#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "topsing/errors.hpp"
#include "topsing/groebner.hpp"
#include "topsing/jets.hpp"

namespace topsing {

struct JetLevel {
  unsigned m = 0;
  std::optional<int> dim;            // absent when the computation hit a cap
  std::optional<int> value;          // (m+1) d - dim
  std::string order;                 // monomial order that produced the dimension
  std::optional<std::string> error;  // cap message when both orders failed
  double seconds = 0;
};

struct MldEstimate {
  unsigned d = 0;
  unsigned m_max = 0;
  std::vector<JetLevel> levels;  // computed levels, stopping after a failed one
  std::optional<int> min_value;
  bool top_certified_up_to_m_max = false;
  bool minus_infinity_flag = false;
  bool levels_truncated = false;  // a capped level stopped the sweep
  std::optional<std::string> annotation;
};

struct JetDimensionOptions {
  GbLimits limits;
  bool fallback_to_weighted = true;
};

/// Dimension of the jet scheme at the origin at level m, trying graded
/// reverse lex first and the level-weighted order after a cap error.
inline JetLevel jet_dimension(const SparseSeries& f, unsigned d, unsigned m, const JetDimensionOptions& opts = {}) {
  JetLevel lvl;
  lvl.m = m;
  auto start = std::chrono::steady_clock::now();
  JetIdeal ideal = jet_ideal_at_origin({f}, m);
  const std::size_t nv = ideal.num_vars();
  try {
    lvl.dim = ideal_dimension(ideal.generators, nv, MonomialOrder::grevlex(), opts.limits);
    lvl.order = "grevlex";
  } catch (const CapExceeded& first) {
    if (!opts.fallback_to_weighted) {
      lvl.error = std::string("level ") + std::to_string(m) + ": " + first.what();
    } else {
      try {
        lvl.dim = ideal_dimension(ideal.generators, nv, MonomialOrder::weighted(origin_level_weights(f.num_vars(), m)),
                                  opts.limits);
        lvl.order = "level-weighted";
      } catch (const CapExceeded& second) {
        lvl.error = std::string("level ") + std::to_string(m) + ": " + second.what();
      }
    }
  }
  if (lvl.dim) lvl.value = static_cast<int>((m + 1) * d) - *lvl.dim;
  lvl.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return lvl;
}

/// Upper bound for the Mather minimal log discrepancy from jet dimensions at
/// levels 1..m_max.
inline MldEstimate mather_mld_jet(const SparseSeries& f, unsigned d, unsigned m_max,
                                  const JetDimensionOptions& opts = {}) {
  if (f.num_vars() != d + 1) throw UsageError("mld estimate: a hypersurface of dimension d needs d+1 variables");
  if (m_max == 0) throw UsageError("mld estimate: m_max must be at least 1");
  MldEstimate est;
  est.d = d;
  est.m_max = m_max;
  bool all_top = true;
  for (unsigned m = 1; m <= m_max; ++m) {
    JetLevel lvl = jet_dimension(f, d, m, opts);
    bool failed = !lvl.dim.has_value();
    if (!failed) {
      if (*lvl.dim != static_cast<int>(m * d + 1)) all_top = false;
      if (!est.min_value || *lvl.value < *est.min_value) est.min_value = lvl.value;
      if (*lvl.value < 0 && d >= 2) est.minus_infinity_flag = true;
    }
    est.levels.push_back(std::move(lvl));
    if (failed) {
      est.levels_truncated = true;
      all_top = false;
      break;
    }
  }
  est.top_certified_up_to_m_max = all_top;
  if (d == 1 && est.min_value && *est.min_value < 0)
    est.annotation = "negative value on a curve: the infimum is -infinity by definition";
  else if (est.minus_infinity_flag)
    est.annotation = "negative value in dimension >= 2: the infimum is -infinity";
  return est;
}

}  // namespace topsing
