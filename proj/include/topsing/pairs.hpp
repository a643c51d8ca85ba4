#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "topsing/errors.hpp"
#include "topsing/invariants.hpp"
#include "topsing/parser.hpp"
#include "topsing/series.hpp"

namespace topsing {

/// Effective Q-divisor B = sum r_j div(b_j) on a germ at the origin.
struct DivisorSpec {
  struct Component {
    Rational coeff;
    SparseSeries equation;
    std::string text;
  };
  std::vector<Component> components;

  std::size_t size() const { return components.size(); }
};

/// Parses {"components":[{"coeff":"1/2","equation":"x1"}, ...]}; coefficients
/// may be integers or rational strings.
inline DivisorSpec parse_divisor_json(const std::string& text, std::size_t num_vars) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("divisor: malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("components") || !doc["components"].is_array())
    throw UsageError("divisor: expected an object with a \"components\" array");
  DivisorSpec spec;
  for (const auto& c : doc["components"]) {
    if (!c.is_object() || !c.contains("coeff") || !c.contains("equation"))
      throw UsageError("divisor: each component needs \"coeff\" and \"equation\"");
    Rational r;
    if (c["coeff"].is_string()) {
      r = parse_rational(c["coeff"].get<std::string>());
    } else if (c["coeff"].is_number_integer()) {
      r = Rational(static_cast<long>(c["coeff"].get<std::int64_t>()));
    } else {
      throw UsageError("divisor: coefficient must be an integer or a rational string such as \"1/2\"");
    }
    if (!c["equation"].is_string()) throw UsageError("divisor: equation must be a string");
    std::string eq = c["equation"].get<std::string>();
    spec.components.push_back({r, parse_polynomial(eq, num_vars), eq});
  }
  return spec;
}

inline void validate_divisor(const DivisorSpec& b, std::size_t num_vars) {
  for (const auto& c : b.components) {
    if (c.coeff < 0) throw UsageError("divisor: coefficients must be non-negative");
    if (c.equation.num_vars() != num_vars) throw UsageError("divisor: component lives in the wrong ring");
    if (!c.equation.is_exact()) throw UsageError("divisor: components must be exact polynomials");
    if (c.equation.is_zero()) throw UsageError("divisor: the zero equation is not a divisor");
  }
}

/// Order of b at the origin (0 for a unit).
inline unsigned component_order(const SparseSeries& b) {
  if (b.constant_term() != 0) return 0;
  return b.order().value();
}

/// mult_x B = sum r_j ord(b_j).
inline Rational divisor_multiplicity(const DivisorSpec& b) {
  Rational total(0);
  for (const auto& c : b.components) {
    if (c.coeff < 0) throw UsageError("divisor: coefficients must be non-negative");
    if (c.equation.is_zero()) throw UsageError("divisor: the zero equation is not a divisor");
    total += c.coeff * component_order(c.equation);
  }
  return total;
}

/// True iff no component with positive coefficient passes through the origin.
inline bool divisor_trivial_near_origin(const DivisorSpec& b) {
  for (const auto& c : b.components)
    if (c.coeff != 0 && component_order(c.equation) > 0) return false;
  return true;
}

struct PairVerdict {
  bool ambient_smooth = false;
  unsigned d = 0;
  Rational multiplicity;
  bool top = false;                  // mld of (x; X, J_X B) >= d - 1
  std::optional<Rational> value;     // the minimal log discrepancy when determined
  std::string witness;               // valuation computing the value
  std::string reason;
  std::optional<SingularityReport> report;  // singular case only
  // hypersurface consequences: mld <= d, = d iff smooth, = d - 1 iff top
  bool mld_equals_d = false;
  bool mld_equals_d_minus_one = false;
};

/// Smooth ambient germ of dimension d.
inline PairVerdict pair_verdict_smooth(unsigned d, const DivisorSpec& b) {
  if (d == 0) throw UsageError("pair: dimension must be at least 1");
  validate_divisor(b, d);
  PairVerdict v;
  v.ambient_smooth = true;
  v.d = d;
  v.multiplicity = divisor_multiplicity(b);
  v.top = v.multiplicity <= 1;
  if (v.top) {
    v.value = Rational(d) - v.multiplicity;
    v.witness = "first blow-up";
    v.mld_equals_d = v.multiplicity == 0;
    v.mld_equals_d_minus_one = v.multiplicity == 1;
  } else {
    v.reason = "mult_x B = " + to_string(v.multiplicity) + " > 1";
  }
  return v;
}

/// Hypersurface germ f = 0 in d+1 variables with boundary B (possibly empty).
inline PairVerdict pair_verdict_hypersurface(const SparseSeries& f, unsigned d, const DivisorSpec& b,
                                             const AnalysisOptions& opts = {}) {
  if (f.num_vars() != d + 1) throw UsageError("pair: a hypersurface of dimension d needs d+1 variables");
  validate_divisor(b, f.num_vars());
  if (f.constant_term() != 0) throw UsageError("pair: equation does not vanish at the origin");
  if (f.order().equals(1)) {
    // the boundary would have to be restricted to the smooth germ first
    if (!divisor_trivial_near_origin(b))
      throw UsageError("pair: for a smooth germ give the divisor in d variables with --smooth-dim");
    PairVerdict v;
    v.d = d;
    v.ambient_smooth = true;
    v.report = classify(f, d, opts);
    v.multiplicity = divisor_multiplicity(b);
    v.top = true;
    v.value = Rational(d);
    v.witness = "first blow-up";
    v.mld_equals_d = true;
    return v;
  }
  PairVerdict v;
  v.d = d;
  v.multiplicity = divisor_multiplicity(b);
  SingularityReport r = classify(f, d, opts);
  v.report = r;
  bool trivial = divisor_trivial_near_origin(b);
  v.top = trivial && r.is_top;
  if (v.top) {
    v.value = Rational(static_cast<long>(d) - 1);
    v.witness = "jet dimensions (top singularity)";
    v.mld_equals_d_minus_one = true;
  } else if (!trivial) {
    v.reason = "B passes through the singular point";
  } else {
    v.reason = "the germ is not a top singularity: " + r.label();
  }
  return v;
}

struct MonomialValuation {
  std::vector<unsigned> weights;

  /// Weighted order of b (0 for a unit).
  Rational order_of(const SparseSeries& b) const {
    if (b.constant_term() != 0) return Rational(0);
    std::optional<unsigned> best;
    for (const auto& [m, c] : b.terms()) {
      unsigned w = 0;
      for (std::size_t i = 0; i < weights.size(); ++i) w += weights[i] * m[i];
      if (!best || w < *best) best = w;
    }
    return Rational(best.value_or(0));
  }

  /// Log discrepancy (sum w - 1) - ord_w(B) + 1 of the pair (A^d, B).
  Rational log_discrepancy(const DivisorSpec& b) const {
    Rational total(0);
    for (unsigned w : weights) total += w;
    for (const auto& c : b.components) total -= c.coeff * order_of(c.equation);
    return total;
  }
};

struct AuditResult {
  Rational minimum;
  MonomialValuation argmin;
  std::size_t enumerated = 0;
};

/// Least log discrepancy over monomial valuations with weights in [1, bound];
/// ties go to the lexicographically least weight vector.
inline AuditResult monomial_audit(unsigned d, const DivisorSpec& b, unsigned weight_bound) {
  if (weight_bound < 1) throw UsageError("audit: weight bound must be at least 1");
  if (d == 0) throw UsageError("audit: dimension must be at least 1");
  validate_divisor(b, d);
  double count = 1;
  for (unsigned i = 0; i < d; ++i) count *= weight_bound;
  if (count > 5e7) throw UsageError("audit: too many weight vectors; lower the bound");
  AuditResult out;
  MonomialValuation v{std::vector<unsigned>(d, 1)};
  bool first = true;
  while (true) {
    Rational ld = v.log_discrepancy(b);
    ++out.enumerated;
    if (first || ld < out.minimum) {
      out.minimum = ld;
      out.argmin = v;
      first = false;
    }
    std::size_t pos = d;
    while (pos > 0 && v.weights[pos - 1] == weight_bound) {
      v.weights[pos - 1] = 1;
      --pos;
    }
    if (pos == 0) break;
    ++v.weights[pos - 1];
  }
  return out;
}

}  // namespace topsing
