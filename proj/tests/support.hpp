#pragma once

#include <string>
#include <vector>

#include "topsing/parser.hpp"
#include "topsing/random.hpp"
#include "topsing/series.hpp"

namespace topsing::testing {

inline SparseSeries P(const std::string& text, std::size_t n) { return parse_polynomial(text, n); }

/// Random exact polynomial with small integer coefficients.
inline SparseSeries random_polynomial(SeededRng& rng, std::size_t n, unsigned max_degree, unsigned terms,
                                      unsigned min_degree = 0) {
  std::vector<SparseSeries::Term> out;
  for (unsigned t = 0; t < terms; ++t) {
    unsigned deg = static_cast<unsigned>(rng.uniform(min_degree, max_degree));
    Monomial m(n);
    for (unsigned k = 0; k < deg; ++k) {
      std::size_t v = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1));
      m.set(v, m[v] + 1);
    }
    long c = static_cast<long>(rng.uniform(-4, 4));
    if (c != 0) out.emplace_back(m, Rational(c));
  }
  return SparseSeries::from_terms(n, std::move(out));
}

}  // namespace topsing::testing
