#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topsing/errors.hpp"
#include "topsing/groebner.hpp"
#include "topsing/jets.hpp"
#include "topsing/linalg.hpp"
#include "topsing/random.hpp"
#include "topsing/series.hpp"
#include "topsing/transform.hpp"

namespace topsing {

/// Minimal number of variables a homogeneous form can be written in after a
/// linear change: the rank of the span of its first partials.
inline std::size_t essential_rank(const SparseSeries& h) {
  if (h.is_zero()) throw UsageError("essential_rank: zero form");
  if (!h.is_homogeneous()) throw UsageError("essential_rank: form must be homogeneous");
  if (h.degree() == 0) throw UsageError("essential_rank: constant form");
  std::vector<SparseSeries> partials;
  for (std::size_t i = 0; i < h.num_vars(); ++i) partials.push_back(h.derivative(i));
  std::vector<Monomial> columns;
  for (const auto& p : partials)
    for (const auto& [m, c] : p.terms())
      if (std::find(columns.begin(), columns.end(), m) == columns.end()) columns.push_back(m);
  if (columns.empty()) return 0;
  Matrix a(partials.size(), std::vector<Rational>(columns.size(), Rational(0)));
  for (std::size_t r = 0; r < partials.size(); ++r)
    for (std::size_t c = 0; c < columns.size(); ++c) a[r][c] = partials[r].coefficient(columns[c]);
  return matrix_rank(std::move(a));
}

struct InvariantChain {
  unsigned mult = 0;
  unsigned tau = 0;
  std::optional<Order> m2;
  std::optional<unsigned> tau2;
  std::optional<Order> mu3, mu4, m3;

  friend bool operator==(const InvariantChain&, const InvariantChain&) = default;
};

/// Equal when both are finite; a truncated order (">= v" or infinite) only
/// rules out finite values below its bound.
inline bool orders_compatible(const Order& a, const Order& b) {
  if (a.is_finite() && b.is_finite()) return a == b;
  auto bound = [](const Order& o) { return o.is_infinite() ? 0u : o.value(); };
  if (a.is_finite()) return a.value() >= bound(b);
  if (b.is_finite()) return b.value() >= bound(a);
  return true;
}

inline bool orders_compatible(const std::optional<Order>& a, const std::optional<Order>& b) {
  if (!a || !b) return !a && !b;
  return orders_compatible(*a, *b);
}

/// The coordinate-free part (mult, tau, m2, tau2, m3) of two chains agrees.
inline bool chains_compatible(const InvariantChain& a, const InvariantChain& b) {
  return a.mult == b.mult && a.tau == b.tau && orders_compatible(a.m2, b.m2) && a.tau2 == b.tau2 &&
         orders_compatible(a.m3, b.m3);
}

struct DuValType {
  char letter = 'A';
  unsigned index = 1;
  bool at_least = false;  // truncation hid the exact index

  std::string str() const { return std::string(1, letter) + (at_least ? ">=" : "") + std::to_string(index); }
  friend bool operator==(const DuValType&, const DuValType&) = default;

  static DuValType make(char letter, unsigned index, bool at_least = false) {
    bool ok = (letter == 'A' && index >= 1) || (letter == 'D' && index >= 4) ||
              (letter == 'E' && index >= 6 && index <= 8 && !at_least);
    if (!ok) throw InvariantViolation("illegal Du Val type " + std::string(1, letter) + std::to_string(index));
    return DuValType{letter, index, at_least};
  }
};

enum class SingularityClass { Smooth, NCD, PinchPoint, CDV, NotTop, NotDoubleHypersurface };

inline std::string class_name(SingularityClass c) {
  switch (c) {
    case SingularityClass::Smooth: return "Smooth";
    case SingularityClass::NCD: return "NCD";
    case SingularityClass::PinchPoint: return "PinchPoint";
    case SingularityClass::CDV: return "cDV";
    case SingularityClass::NotTop: return "NotTop";
    case SingularityClass::NotDoubleHypersurface: return "NotDoubleHypersurface";
  }
  return "?";
}

inline bool class_is_top(SingularityClass c) {
  return c == SingularityClass::NCD || c == SingularityClass::PinchPoint || c == SingularityClass::CDV;
}

/// Predicted Mather minimal log discrepancy with respect to the Jacobian ideal:
/// an exact value, or only an upper bound with -infinity allowed.
struct MldPrediction {
  std::optional<int> value;
  std::optional<int> at_most;
  bool minus_infinity_possible = false;

  std::string str() const {
    if (value) return std::to_string(*value);
    return "<=" + std::to_string(at_most.value_or(0)) + (minus_infinity_possible ? " (or -inf)" : "");
  }
};

struct SingularityReport {
  unsigned d = 0;
  std::optional<InvariantChain> chain;
  SingularityClass cls = SingularityClass::NotTop;
  std::optional<DuValType> duval;
  std::string reason;  // for NotTop and NotDoubleHypersurface
  bool is_top = false;
  MldPrediction predicted;
  std::optional<Colength> milnor;  // Jacobian colength of the surface germ
  std::vector<std::string> caveats;

  std::string label() const {
    std::string s = class_name(cls);
    if (cls == SingularityClass::CDV && duval) s += "(" + duval->str() + ")";
    if (!reason.empty()) s += "(" + reason + ")";
    return s;
  }
};

struct AnalysisOptions {
  Precision precision{12};
  std::uint64_t seed = 0;
  unsigned trials = 3;
  unsigned colength_cap = 14;
  GbLimits limits;

  void validate() const {
    if (precision.is_infinite() || precision.value() < 7)
      throw UsageError("precision must be at least 7 so that every branch threshold is decided");
    if (trials == 0) throw UsageError("trials must be positive");
    if (colength_cap == 0) throw UsageError("colength cap must be positive");
  }
};

/// Chain together with the normal forms it was read from.
struct ChainAnalysis {
  InvariantChain chain;
  std::optional<SplitResult> split;
  std::optional<DepressedCubic> cubic;
  std::vector<std::string> caveats;
};

inline Order m3_from(const Order& mu3, const Order& mu4) { return min(mu3.scaled(3), mu4.scaled(2)); }

/// The chain (mult, tau, m2, tau2, mu3, mu4, m3) of a double point. With
/// `residual_for_rank_two` the residual is also split off when tau = 2.
inline ChainAnalysis analyze_chain(const SparseSeries& f, const AnalysisOptions& opts,
                                   bool residual_for_rank_two = false) {
  if (!f.order().equals(2)) throw UsageError("invariant chain: germ must have multiplicity 2");
  ChainAnalysis out;
  out.chain.mult = 2;
  SparseSeries q = f.homogeneous_component(2);
  out.chain.tau = static_cast<unsigned>(essential_rank(q));
  const unsigned tau = out.chain.tau;
  if (tau >= 3 || (tau == 2 && !residual_for_rank_two)) return out;

  out.split = split_quadratic(f, tau, opts.precision);
  if (tau == 2) return out;
  const SparseSeries& g = out.split->g;
  out.chain.m2 = g.order();
  if (!out.chain.m2->equals(3)) return out;
  out.chain.tau2 = static_cast<unsigned>(essential_rank(g.initial_form()));
  if (*out.chain.tau2 != 1) return out;

  auto [rotated, rotation] = regularize_cubic(g, opts.seed);
  if (!rotation.linear().empty() && !(rotation.linear() == identity_matrix(g.num_vars())))
    out.caveats.push_back("cubic residual rotated to make its first variable regular");
  out.cubic = depress_cubic(rotated, opts.precision);
  out.cubic->change = rotation.then(out.cubic->change);
  out.chain.mu3 = out.cubic->g3.order();
  out.chain.mu4 = out.cubic->g4.order();
  out.chain.m3 = m3_from(*out.chain.mu3, *out.chain.mu4);
  return out;
}

inline InvariantChain invariant_chain(const SparseSeries& f, const AnalysisOptions& opts = {}) {
  return analyze_chain(f, opts).chain;
}

/// Du Val label of a surface germ (3 variables) in the top region, or the
/// pinch point; other chains pass through as NotTop.
struct SurfaceVerdict {
  SingularityClass cls = SingularityClass::NotTop;
  std::optional<DuValType> duval;
  std::optional<Colength> milnor;
  std::vector<std::string> caveats;

  std::string key() const { return class_name(cls) + (duval ? ":" + duval->str() : ""); }
};

inline SurfaceVerdict duval_type(const SparseSeries& f_surface, const InvariantChain& chain,
                                 const AnalysisOptions& opts = {}) {
  if (f_surface.num_vars() != 3) throw UsageError("duval_type: surface germ must live in 3 variables");
  SurfaceVerdict v;
  if (chain.mult != 2) return v;
  const SparseSeries exact = f_surface.is_exact() ? f_surface : f_surface.with_precision(Precision::infinite());
  std::vector<SparseSeries> jac = jacobian_ideal(exact);

  auto milnor = [&]() {
    if (!v.milnor) v.milnor = colength(jac, 3, opts.colength_cap, opts.limits);
    return *v.milnor;
  };
  auto indexed = [&](char letter, std::optional<unsigned> parametrized) {
    Colength mu = milnor();
    if (mu.exact) {
      v.duval = DuValType::make(letter, static_cast<unsigned>(mu.value));
      if (parametrized && *parametrized != mu.value)
        v.caveats.push_back("normal-form index " + std::to_string(*parametrized) + " differs from Milnor number " +
                            std::to_string(mu.value));
    } else {
      unsigned floor_index = std::max<unsigned>(static_cast<unsigned>(mu.value), letter == 'D' ? 4u : 1u);
      v.duval = DuValType::make(letter, floor_index, true);
      v.caveats.push_back("Milnor number not stable at colength cap " + std::to_string(mu.cap) +
                          "; index is a lower bound");
    }
  };

  if (chain.tau >= 3) {
    v.cls = SingularityClass::CDV;
    indexed('A', 1u);
    return v;
  }
  if (chain.tau == 2) {
    ChainAnalysis a = analyze_chain(f_surface, opts, true);
    const SparseSeries& g = a.split->g;
    Order m = g.order();
    if (m.is_infinite()) {
      v.cls = SingularityClass::NCD;
      return v;
    }
    if (m.is_unknown()) {
      // residual invisible below the precision: the A index is at least m - 1
      v.cls = SingularityClass::CDV;
      Colength mu = milnor();
      if (mu.exact) {
        v.duval = DuValType::make('A', static_cast<unsigned>(mu.value));
      } else {
        v.duval = DuValType::make('A', m.value() - 1, true);
        v.caveats.push_back("residual vanishes below precision " + std::to_string(m.value()) +
                            "; the A index is a lower bound");
      }
      return v;
    }
    v.cls = SingularityClass::CDV;
    indexed('A', m.value() - 1);
    return v;
  }
  if (!chain.m2 || !chain.m2->equals(3) || !chain.tau2) return v;
  if (*chain.tau2 >= 2) {
    if (local_dimension(jac, 3, opts.limits) >= 1) {
      v.cls = SingularityClass::PinchPoint;
      return v;
    }
    v.cls = SingularityClass::CDV;
    indexed('D', std::nullopt);
    return v;
  }
  if (!chain.m3 || !chain.m3->is_finite()) return v;
  unsigned m3 = chain.m3->value();
  if (m3 < 8 || m3 > 10) return v;
  v.cls = SingularityClass::CDV;
  unsigned n = m3 - 2;  // 8, 9, 10 give E6, E7, E8
  v.duval = DuValType::make('E', n);
  Colength mu = milnor();
  if (!mu.exact || mu.value != n)
    v.caveats.push_back("Milnor number " + mu.str() + " does not match E" + std::to_string(n));
  return v;
}

namespace detail {

/// Cuts f down to 3 variables by hyperplanes through the origin, each time
/// eliminating the last variable.
inline SparseSeries generic_surface_section(SparseSeries f, SeededRng& rng, int range) {
  while (f.num_vars() > 3) {
    const std::size_t n = f.num_vars();
    std::vector<Rational> lambda(n);
    for (std::size_t j = 0; j + 1 < n; ++j) lambda[j] = Rational(static_cast<long>(rng.uniform(-range, range)));
    long last = 0;
    while (last == 0) last = static_cast<long>(rng.uniform(-range, range));
    lambda[n - 1] = Rational(last);
    f = hyperplane_cut(f, lambda, n - 1);
  }
  return f;
}

inline SurfaceVerdict section_verdict(const SparseSeries& surface, const AnalysisOptions& opts) {
  if (!surface.order().equals(2)) {
    SurfaceVerdict v;
    v.cls = SingularityClass::NotTop;
    return v;
  }
  InvariantChain chain = analyze_chain(surface, opts).chain;
  return duval_type(surface, chain, opts);
}

/// Surface verdict by repeated random sections; disagreement widens the
/// coefficient range, and a persistent split falls back to the majority.
inline SurfaceVerdict repeated_section_verdict(const SparseSeries& f, const AnalysisOptions& opts) {
  if (f.num_vars() == 3) return section_verdict(f, opts);
  SeededRng master(opts.seed);
  const int ranges[] = {3, 6, 12};
  std::vector<SurfaceVerdict> last_round;
  for (int range : ranges) {
    std::vector<SurfaceVerdict> round;
    for (unsigned t = 0; t < opts.trials; ++t) {
      SeededRng rng(master.fork());
      SparseSeries s = generic_surface_section(f, rng, range);
      AnalysisOptions sub = opts;
      sub.seed = master.fork();
      round.push_back(section_verdict(s, sub));
    }
    bool agree = std::all_of(round.begin(), round.end(),
                             [&](const SurfaceVerdict& v) { return v.key() == round.front().key(); });
    if (agree) {
      SurfaceVerdict v = round.front();
      v.caveats.push_back("surface section chosen at random; " + std::to_string(opts.trials) +
                          " independent sections agreed (coefficients in [-" + std::to_string(range) + ", " +
                          std::to_string(range) + "])");
      return v;
    }
    last_round = std::move(round);
  }
  std::map<std::string, unsigned> votes;
  for (const auto& v : last_round) ++votes[v.key()];
  std::string best;
  unsigned best_count = 0;
  for (const auto& [k, c] : votes)
    if (c > best_count) {
      best = k;
      best_count = c;
    }
  for (auto v : last_round)
    if (v.key() == best) {
      v.caveats.push_back("random surface sections disagreed; majority label " + best + " reported");
      return v;
    }
  return last_round.front();
}

inline void finish_report(SingularityReport& r) {
  r.is_top = class_is_top(r.cls);
  if (r.cls == SingularityClass::Smooth) {
    r.predicted.value = static_cast<int>(r.d);
  } else if (r.is_top) {
    r.predicted.value = static_cast<int>(r.d) - 1;
  } else {
    r.predicted.at_most = static_cast<int>(r.d) - 2;
    r.predicted.minus_infinity_possible = true;
  }
}

}  // namespace detail

/// Decides whether the hypersurface germ f = 0 at the origin (d+1 variables)
/// is a top singularity, with the fine label.
inline SingularityReport classify(const SparseSeries& f, unsigned d, const AnalysisOptions& opts = {}) {
  opts.validate();
  if (d == 0) throw UsageError("classify: dimension must be at least 1");
  if (f.num_vars() != d + 1) throw UsageError("classify: a hypersurface of dimension d needs d+1 variables");
  if (f.constant_term() != 0) throw UsageError("classify: equation does not vanish at the origin");
  if (f.is_zero()) throw UsageError("classify: the zero equation does not define a hypersurface");
  SingularityReport r;
  r.d = d;
  Order mult = f.order();
  if (mult.equals(1)) {
    r.cls = SingularityClass::Smooth;
    detail::finish_report(r);
    return r;
  }
  if (mult.value() >= 3) {
    r.cls = SingularityClass::NotDoubleHypersurface;
    r.reason = "multiplicity " + mult.str();
    detail::finish_report(r);
    return r;
  }

  ChainAnalysis a = analyze_chain(f, opts, true);
  r.chain = a.chain;
  for (auto& c : a.caveats) r.caveats.push_back(c);
  const InvariantChain& ch = a.chain;

  bool cdv_region = false;
  if (ch.tau >= 3) {
    cdv_region = true;
  } else if (ch.tau == 2) {
    const SparseSeries& g = a.split->g;
    if (g.is_zero()) {
      r.cls = SingularityClass::NCD;
      if (g.num_vars() > 0 && !g.is_exact())
        r.caveats.push_back("residual vanishes below precision " + g.precision().str() +
                            "; NCD and a high-index cA are not distinguished");
    } else {
      cdv_region = true;
    }
  } else if (d == 1) {
    r.cls = SingularityClass::NotTop;
    r.reason = "tau = 1 on a curve";
  } else if (!ch.m2->equals(3)) {
    r.cls = SingularityClass::NotTop;
    r.reason = "m2 = " + ch.m2->str();
  } else if (*ch.tau2 >= 2) {
    cdv_region = true;
  } else if (ch.m3->is_finite() && ch.m3->value() < 12) {
    cdv_region = true;
  } else {
    r.cls = SingularityClass::NotTop;
    r.reason = "m3 = " + ch.m3->str();
  }

  if (cdv_region) {
    SurfaceVerdict v = detail::repeated_section_verdict(f, opts);
    for (auto& c : v.caveats) r.caveats.push_back(c);
    r.milnor = v.milnor;
    if (v.cls == SingularityClass::PinchPoint) {
      r.cls = SingularityClass::PinchPoint;
    } else if (v.cls == SingularityClass::CDV) {
      r.cls = SingularityClass::CDV;
      r.duval = v.duval;
    } else {
      // the chain already certifies topness; the section did not supply a label
      r.cls = ch.tau == 1 && *ch.tau2 >= 2 ? SingularityClass::PinchPoint : SingularityClass::CDV;
      r.caveats.push_back("surface section gave " + v.key() + "; label taken from the chain");
    }
  }
  detail::finish_report(r);
  return r;
}

}  // namespace topsing
