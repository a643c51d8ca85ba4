#pragma once

#include <functional>
#include <string>
#include <vector>

#include "topsing/groebner.hpp"
#include "topsing/invariants.hpp"
#include "topsing/jets.hpp"
#include "topsing/mld.hpp"
#include "topsing/pairs.hpp"
#include "topsing/parser.hpp"
#include "topsing/transform.hpp"

namespace topsing {

struct SelfTestCase {
  std::string name;
  std::function<bool()> check;
};

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string error;
};

inline std::vector<SelfTestCase> reference_examples() {
  auto P = [](const char* text, std::size_t n) { return parse_polynomial(text, n); };
  std::vector<SelfTestCase> cases;

  cases.push_back({"split x1*x2 gives tau 2 and no residual", [=] {
                     auto s = split_quadratic(P("x1*x2", 2), 2, Precision(12));
                     return s.g.is_zero() && s.lambda.size() == 2 && s.normal_form.size() == 2;
                   }});
  cases.push_back({"depress x2^3 + x3^4", [=] {
                     auto c = depress_cubic(P("x1^3 + x2^4", 2), Precision(12));
                     return c.g3.is_zero() && c.g4.agrees_with(P("x1^4", 1));
                   }});
  cases.push_back({"depress x2^3 + x2*x3^3", [=] {
                     auto c = depress_cubic(P("x1^3 + x1*x2^3", 2), Precision(12));
                     return c.g3.agrees_with(P("x1^3", 1)) && c.g4.is_zero();
                   }});
  cases.push_back({"essential rank of x1*x2 is 2", [=] { return essential_rank(P("x1*x2", 2)) == 2; }});
  cases.push_back({"chain of x1^2+x2^2+x3^2", [=] {
                     auto c = invariant_chain(P("x1^2+x2^2+x3^2", 3));
                     return c.mult == 2 && c.tau == 3 && !c.m2;
                   }});
  cases.push_back({"chain of x1^2+x2^3+x3^4", [=] {
                     auto c = invariant_chain(P("x1^2+x2^3+x3^4", 3));
                     return c.tau == 1 && c.m2 == Order::finite(3) && c.tau2 == 1u && c.mu3 == Order::infinite() &&
                            c.mu4 == Order::finite(4) && c.m3 == Order::finite(8);
                   }});
  cases.push_back({"classify node x1*x2 (d=1)", [=] {
                     auto r = classify(P("x1*x2", 2), 1);
                     return r.cls == SingularityClass::NCD && r.is_top && r.predicted.value == 0;
                   }});
  cases.push_back({"classify pinch x1^2-x2^2*x3 (d=2)", [=] {
                     auto r = classify(P("x1^2-x2^2*x3", 3), 2);
                     return r.cls == SingularityClass::PinchPoint && r.is_top && r.predicted.value == 1;
                   }});
  cases.push_back({"classify x1^2+x2^3+x3^6 not top (m3 = 12)", [=] {
                     auto r = classify(P("x1^2+x2^3+x3^6", 3), 2);
                     return r.cls == SingularityClass::NotTop && !r.is_top && r.chain->m3 == Order::finite(12) &&
                            r.predicted.at_most == 0;
                   }});
  cases.push_back({"classify cusp on a curve not top", [=] {
                     auto r = classify(P("x1^2+x2^3", 2), 1);
                     return r.cls == SingularityClass::NotTop && !r.is_top;
                   }});
  cases.push_back({"Du Val D4", [=] {
                     auto r = classify(P("x1^2+x2^2*x3+x3^3", 3), 2);
                     return r.cls == SingularityClass::CDV && r.duval == DuValType::make('D', 4);
                   }});
  cases.push_back({"Du Val E8", [=] {
                     auto r = classify(P("x1^2+x2^3+x3^5", 3), 2);
                     return r.cls == SingularityClass::CDV && r.duval == DuValType::make('E', 8) &&
                            r.chain->m3 == Order::finite(10);
                   }});
  cases.push_back({"Taylor coefficients of x1*x2", [=] {
                     const unsigned m = 4;
                     auto fs = taylor_coefficients(P("x1*x2", 2), m);
                     for (unsigned n = 0; n <= m; ++n) {
                       std::vector<SparseSeries::Term> terms;
                       for (unsigned i = 0; i <= n; ++i) {
                         Monomial mono(2 * (m + 1));
                         mono.set(i * 2 + 0, 1);
                         mono.set((n - i) * 2 + 1, mono[(n - i) * 2 + 1] + 1);
                         terms.emplace_back(mono, Rational(1));
                       }
                       if (!(fs[n] == SparseSeries::from_terms(2 * (m + 1), terms))) return false;
                     }
                     return true;
                   }});
  cases.push_back({"jet ideal of x1*x2 at level 3", [=] {
                     auto j = jet_ideal_at_origin({P("x1*x2", 2)}, 3);
                     // X_{1,1} X_{2,1} and X_{1,1} X_{2,2} + X_{1,2} X_{2,1}
                     auto v = [](std::size_t i, unsigned n) { return SparseSeries::variable(6, origin_jet_index(2, i, n)); };
                     return j.generators.size() == 2 && j.generators[0] == v(0, 1) * v(1, 1) &&
                            j.generators[1] == v(0, 1) * v(1, 2) + v(0, 2) * v(1, 1);
                   }});
  cases.push_back({"jet dimension of x1*x2 at level 3 is 4", [=] {
                     auto j = jet_ideal_at_origin({P("x1*x2", 2)}, 3);
                     return ideal_dimension(j.generators, j.num_vars()) == 4;
                   }});
  cases.push_back({"jet dimension of the cusp at level 5 is 7", [=] {
                     auto j = jet_ideal_at_origin({P("x1^2+x2^3", 2)}, 5);
                     return ideal_dimension(j.generators, j.num_vars()) == 7;
                   }});
  cases.push_back({"Milnor number of A1 is 1", [=] {
                     auto c = colength(jacobian_ideal(P("x1^2+x2^2+x3^2", 3)), 3, 14);
                     return c.exact && c.value == 1;
                   }});
  cases.push_back({"jet formula for the node (m_max 5)", [=] {
                     auto e = mather_mld_jet(P("x1*x2", 2), 1, 5);
                     return e.min_value == 0 && e.top_certified_up_to_m_max;
                   }});
  cases.push_back({"jet formula for A1 (m_max 4)", [=] {
                     auto e = mather_mld_jet(P("x1^2+x2^2+x3^2", 3), 2, 4);
                     for (const auto& l : e.levels)
                       if (l.dim != static_cast<int>(2 * l.m + 1)) return false;
                     return e.min_value == 1 && e.top_certified_up_to_m_max;
                   }});
  cases.push_back({"pair on smooth surface with B = 1/2 div(x1)", [=] {
                     DivisorSpec b{{{Rational(1, 2), P("x1", 2), "x1"}}};
                     auto v = pair_verdict_smooth(2, b);
                     return v.top && v.value == Rational(3, 2) && v.witness == "first blow-up";
                   }});
  cases.push_back({"pair on the node with B = 0", [=] {
                     auto v = pair_verdict_hypersurface(P("x1*x2", 2), 1, DivisorSpec{});
                     return v.top && v.value == Rational(0);
                   }});
  cases.push_back({"pair on x1*x2 with B = div(x3)", [=] {
                     DivisorSpec b{{{Rational(1), P("x3", 3), "x3"}}};
                     auto v = pair_verdict_hypersurface(P("x1*x2", 3), 2, b);
                     return !v.top;
                   }});
  return cases;
}

inline std::vector<SelfTestResult> run_selftest() {
  std::vector<SelfTestResult> out;
  for (const auto& c : reference_examples()) {
    SelfTestResult r;
    r.name = c.name;
    try {
      r.passed = c.check();
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace topsing
