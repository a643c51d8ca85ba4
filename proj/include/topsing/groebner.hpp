#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "topsing/errors.hpp"
#include "topsing/series.hpp"

namespace topsing {

/// Global monomial order: graded reverse lex, lex, or a weighted degree with
/// graded reverse lex tie-break. Variables are compared in `permutation`
/// order (identity when empty).
struct MonomialOrder {
  enum class Kind { Grevlex, Lex, Weighted };

  Kind kind = Kind::Grevlex;
  std::vector<std::size_t> permutation;
  std::vector<unsigned> weights;  // Weighted only, one positive weight per variable

  static MonomialOrder grevlex() { return {}; }
  static MonomialOrder lex() { return {Kind::Lex, {}, {}}; }
  static MonomialOrder weighted(std::vector<unsigned> w) { return {Kind::Weighted, {}, std::move(w)}; }

  std::string name() const {
    switch (kind) {
      case Kind::Grevlex: return "grevlex";
      case Kind::Lex: return "lex";
      case Kind::Weighted: return "level-weighted";
    }
    return "?";
  }
};

struct GbLimits {
  unsigned spair_degree_cap = 24;
  std::size_t pair_queue_cap = 200000;
};

namespace gb {

/// Comparison data used by the engine: weight rows compared in turn (higher
/// wins), then a reverse lexicographic or lexicographic scan.
class EngineOrder {
 public:
  EngineOrder(std::size_t n, std::vector<std::vector<unsigned>> rows, bool revlex, std::vector<std::size_t> perm)
      : n_(n), rows_(std::move(rows)), revlex_(revlex), perm_(std::move(perm)) {
    if (perm_.empty()) {
      perm_.resize(n_);
      std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    }
    if (perm_.size() != n_) throw UsageError("monomial order: permutation has wrong length");
    std::vector<bool> seen(n_, false);
    for (auto v : perm_) {
      if (v >= n_ || seen[v]) throw UsageError("monomial order: not a permutation");
      seen[v] = true;
    }
    for (const auto& r : rows_)
      if (r.size() != n_) throw UsageError("monomial order: weight row has wrong length");
    unit_first_row_ = !rows_.empty() && std::all_of(rows_[0].begin(), rows_[0].end(), [](unsigned w) { return w == 1; });
  }

  static EngineOrder from(const MonomialOrder& o, std::size_t n) {
    switch (o.kind) {
      case MonomialOrder::Kind::Grevlex:
        return EngineOrder(n, {std::vector<unsigned>(n, 1)}, true, o.permutation);
      case MonomialOrder::Kind::Lex:
        return EngineOrder(n, {}, false, o.permutation);
      case MonomialOrder::Kind::Weighted: {
        if (o.weights.size() != n) throw UsageError("weighted order: one weight per variable");
        for (unsigned w : o.weights)
          if (w == 0) throw UsageError("weighted order: weights must be positive");
        return EngineOrder(n, {o.weights, std::vector<unsigned>(n, 1)}, true, o.permutation);
      }
    }
    throw UsageError("unknown monomial order");
  }

  std::size_t num_vars() const { return n_; }
  /// Has a weight row; pure lex does not.
  bool is_graded() const { return !rows_.empty(); }

  /// Cached key: value of the first weight row (0 when there is none).
  std::uint32_t key(const Monomial& m) const {
    if (rows_.empty()) return 0;
    if (unit_first_row_) return m.degree();
    return row_value(0, m);
  }

  /// True iff a > b, given their cached keys.
  bool greater(const Monomial& a, std::uint32_t ka, const Monomial& b, std::uint32_t kb) const {
    if (ka != kb) return ka > kb;
    for (std::size_t r = 1; r < rows_.size(); ++r) {
      std::uint32_t va = row_value(r, a), vb = row_value(r, b);
      if (va != vb) return va > vb;
    }
    if (revlex_) {
      for (std::size_t i = n_; i-- > 0;) {
        std::size_t v = perm_[i];
        if (a[v] != b[v]) return a[v] < b[v];
      }
    } else {
      for (std::size_t i = 0; i < n_; ++i) {
        std::size_t v = perm_[i];
        if (a[v] != b[v]) return a[v] > b[v];
      }
    }
    return false;
  }

  bool greater(const Monomial& a, const Monomial& b) const { return greater(a, key(a), b, key(b)); }

 private:
  std::uint32_t row_value(std::size_t r, const Monomial& m) const {
    if (r == 0 && unit_first_row_) return m.degree();
    std::uint32_t s = 0;
    const auto& row = rows_[r];
    for (std::size_t i = 0; i < n_; ++i) s += row[i] * m[i];
    return s;
  }

  std::size_t n_;
  std::vector<std::vector<unsigned>> rows_;
  bool revlex_;
  std::vector<std::size_t> perm_;
  bool unit_first_row_ = false;
};

struct Term {
  Monomial m;
  std::uint32_t key;
  Rational c;
};

/// Polynomial sorted by descending engine order.
struct Poly {
  std::vector<Term> terms;
  unsigned sugar = 0;

  bool is_zero() const { return terms.empty(); }
  const Term& lead() const { return terms.front(); }
};

inline Poly from_series(const SparseSeries& f, const EngineOrder& ord) {
  if (!f.is_exact()) throw UsageError("groebner: inputs must be exact polynomials");
  Poly p;
  p.terms.reserve(f.size());
  for (const auto& [m, c] : f.terms()) p.terms.push_back({m, ord.key(m), c});
  std::sort(p.terms.begin(), p.terms.end(),
            [&](const Term& x, const Term& y) { return ord.greater(x.m, x.key, y.m, y.key); });
  p.sugar = f.degree();
  return p;
}

inline SparseSeries to_series(const Poly& p, std::size_t n) {
  std::vector<SparseSeries::Term> terms;
  terms.reserve(p.terms.size());
  for (const auto& t : p.terms) terms.emplace_back(t.m, t.c);
  return SparseSeries::from_terms(n, std::move(terms));
}

inline void make_monic(Poly& p) {
  if (p.is_zero() || p.terms.front().c == 1) return;
  Rational inv = 1 / p.terms.front().c;
  for (auto& t : p.terms) t.c *= inv;
}

/// h[start..] - c * mono * g[1..]; the leading terms are assumed to cancel.
inline std::vector<Term> subtract_multiple(const std::vector<Term>& h, std::size_t start, const Rational& c,
                                           const Monomial& mono, std::uint32_t mono_key, const Poly& g,
                                           const EngineOrder& ord) {
  std::vector<Term> out;
  out.reserve(h.size() - start + g.terms.size());
  std::size_t i = start, j = 1;
  Rational prod;
  while (i < h.size() || j < g.terms.size()) {
    if (j == g.terms.size()) {
      out.push_back(h[i++]);
      continue;
    }
    Monomial mj = mono * g.terms[j].m;
    std::uint32_t kj = mono_key + g.terms[j].key;
    if (i < h.size() && ord.greater(h[i].m, h[i].key, mj, kj)) {
      out.push_back(h[i++]);
      continue;
    }
    mpq_mul(prod.get_mpq_t(), c.get_mpq_t(), g.terms[j].c.get_mpq_t());
    if (i < h.size() && h[i].m == mj) {
      Rational v = h[i].c - prod;
      if (v != 0) out.push_back({mj, kj, std::move(v)});
      ++i;
    } else {
      out.push_back({mj, kj, Rational(-prod)});
    }
    ++j;
  }
  return out;
}

class Reducer {
 public:
  explicit Reducer(const EngineOrder& ord) : ord_(ord) {}

  void add(const Poly* p) {
    basis_.push_back(p);
    supports_.push_back(p->lead().m.support());
  }
  void clear() {
    basis_.clear();
    supports_.clear();
  }
  const std::vector<const Poly*>& basis() const { return basis_; }

  const Poly* find_divisor(const Monomial& m) const {
    std::uint64_t s = m.support();
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      if ((supports_[k] & ~s) != 0) continue;
      if (basis_[k]->lead().m.divides(m)) return basis_[k];
    }
    return nullptr;
  }

  /// Full normal form (leading and tail terms reduced).
  Poly normal_form(Poly h, bool tail = true) const {
    Poly r;
    r.sugar = h.sugar;
    std::vector<Term> cur = std::move(h.terms);
    std::size_t start = 0;
    while (start < cur.size()) {
      const Term& lt = cur[start];
      const Poly* g = find_divisor(lt.m);
      if (!g) {
        if (!tail) {
          r.terms.assign(std::make_move_iterator(cur.begin() + static_cast<std::ptrdiff_t>(start)),
                         std::make_move_iterator(cur.end()));
          return r;
        }
        r.terms.push_back(lt);
        ++start;
        continue;
      }
      Monomial q = g->lead().m.quotient_of(lt.m);
      std::uint32_t qk = lt.key - g->lead().key;
      Rational c = lt.c / g->lead().c;
      r.sugar = std::max(r.sugar, q.degree() + g->sugar);
      cur = subtract_multiple(cur, start + 1, c, q, qk, *g, ord_);
      start = 0;
    }
    return r;
  }

 private:
  const EngineOrder& ord_;
  std::vector<const Poly*> basis_;
  std::vector<std::uint64_t> supports_;
};

struct Pair {
  std::size_t i, j;
  Monomial lcm;
  std::uint32_t lcm_key;
  unsigned sugar;
};

inline Poly s_polynomial(const Poly& a, const Poly& b, const Monomial& lcm, const EngineOrder& ord) {
  Monomial qa = a.lead().m.quotient_of(lcm), qb = b.lead().m.quotient_of(lcm);
  Poly r;
  std::vector<Term> sa;
  sa.reserve(a.terms.size());
  Rational inv_a = 1 / a.lead().c;
  for (std::size_t k = 1; k < a.terms.size(); ++k)
    sa.push_back({qa * a.terms[k].m, ord.key(qa) + a.terms[k].key, a.terms[k].c * inv_a});
  // sa - (1/lc b) qb * b
  std::vector<Term> tmp;
  tmp.reserve(sa.size() + 1);
  tmp.push_back({lcm, ord.key(lcm), Rational(1)});
  for (auto& t : sa) tmp.push_back(std::move(t));
  r.terms = subtract_multiple(tmp, 1, 1 / b.lead().c, qb, ord.key(qb), b, ord);
  r.sugar = std::max(qa.degree() + a.sugar, qb.degree() + b.sugar);
  return r;
}

}  // namespace gb

/// Reduced Groebner basis with leading monomials in the chosen order.
struct GroebnerBasis {
  std::size_t num_vars = 0;
  MonomialOrder order;
  std::vector<SparseSeries> polys;   // monic, sorted by ascending leading monomial
  std::vector<Monomial> leading;     // leading monomial of each element
  std::size_t pairs_processed = 0;

  bool is_unit() const { return leading.size() == 1 && leading.front().is_one(); }
};

namespace gb {

/// Buchberger with the Gebauer-Moeller criteria; sugar selection for graded orders.
inline std::vector<Poly> buchberger(std::vector<Poly> input, const EngineOrder& ord, const GbLimits& limits,
                                    std::size_t* pairs_processed = nullptr) {
  std::vector<Poly> store;  // all basis elements ever added
  store.reserve(input.size() * 4 + 16);
  std::vector<bool> active;
  std::vector<Pair> pairs;
  std::size_t processed = 0;

  auto pair_less = [&](const Pair& x, const Pair& y) {
    // min-heap on (sugar, lcm order, indices); under lex the sugar degree
    // drives the remainder sequences into coefficient blow-up, so lex selects
    // by the lcm alone
    if (ord.is_graded() && x.sugar != y.sugar) return x.sugar > y.sugar;
    if (!(x.lcm == y.lcm)) return ord.greater(x.lcm, x.lcm_key, y.lcm, y.lcm_key);
    if (x.j != y.j) return x.j > y.j;
    return x.i > y.i;
  };

  auto update = [&](std::size_t h_idx) {
    const Monomial& lh = store[h_idx].lead().m;
    struct Cand {
      std::size_t g;
      Monomial lcm;
      bool coprime;
      bool keep = true;
    };
    std::vector<Cand> cands;
    for (std::size_t g = 0; g < h_idx; ++g) {
      if (!active[g]) continue;
      const Monomial& lg = store[g].lead().m;
      cands.push_back({g, lh.lcm(lg), lh.coprime(lg)});
    }
    // chain criterion among new pairs: drop (h,g1) if some other (h,g2) has a
    // strictly smaller lcm dividing it, or an equal lcm that was seen first
    for (std::size_t a = 0; a < cands.size(); ++a) {
      if (cands[a].coprime) continue;
      for (std::size_t b = 0; b < cands.size(); ++b) {
        if (a == b || !cands[b].keep) continue;
        if (!cands[b].lcm.divides(cands[a].lcm)) continue;
        if (cands[b].lcm == cands[a].lcm) {
          // equal lcms: keep one, preferring a coprime one (which is then dropped)
          if (cands[b].coprime || b < a) {
            cands[a].keep = false;
            break;
          }
        } else {
          cands[a].keep = false;
          break;
        }
      }
    }
    // old pairs made redundant by the new leading monomial
    std::vector<Pair> kept;
    kept.reserve(pairs.size());
    for (auto& p : pairs) {
      if (lh.divides(p.lcm)) {
        Monomial li = store[p.i].lead().m.lcm(lh), lj = store[p.j].lead().m.lcm(lh);
        if (!(li == p.lcm) && !(lj == p.lcm)) continue;
      }
      kept.push_back(std::move(p));
    }
    pairs = std::move(kept);
    for (auto& c : cands) {
      if (!c.keep || c.coprime) continue;
      const Poly& g = store[c.g];
      const Poly& h = store[h_idx];
      unsigned sugar = std::max(g.lead().m.quotient_of(c.lcm).degree() + g.sugar,
                                h.lead().m.quotient_of(c.lcm).degree() + h.sugar);
      pairs.push_back({c.g, h_idx, c.lcm, ord.key(c.lcm), sugar});
    }
    std::make_heap(pairs.begin(), pairs.end(), pair_less);
    if (pairs.size() > limits.pair_queue_cap)
      throw CapExceeded("Groebner pair queue exceeded " + std::to_string(limits.pair_queue_cap) + " pairs");
    for (std::size_t g = 0; g < h_idx; ++g)
      if (active[g] && lh.divides(store[g].lead().m)) active[g] = false;
  };

  auto rebuild_reducer = [&](Reducer& red) {
    red.clear();
    for (std::size_t k = 0; k < store.size(); ++k)
      if (active[k]) red.add(&store[k]);
  };

  Reducer red(ord);
  // insert the inputs one by one, each reduced against the previous ones
  std::sort(input.begin(), input.end(), [&](const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return !a.is_zero() && b.is_zero();
    return ord.greater(b.lead().m, b.lead().key, a.lead().m, a.lead().key);
  });
  for (auto& f : input) {
    if (f.is_zero()) continue;
    Poly h = red.normal_form(std::move(f), false);
    if (h.is_zero()) continue;
    make_monic(h);
    if (h.lead().m.is_one()) {
      std::vector<Poly> unit(1);
      unit[0].terms.push_back({h.lead().m, h.lead().key, Rational(1)});
      return unit;
    }
    store.push_back(std::move(h));
    active.push_back(true);
    update(store.size() - 1);
    rebuild_reducer(red);
  }

  while (!pairs.empty()) {
    std::pop_heap(pairs.begin(), pairs.end(), pair_less);
    Pair p = std::move(pairs.back());
    pairs.pop_back();
    if (p.lcm.degree() > limits.spair_degree_cap)
      throw CapExceeded("Groebner S-pair degree " + std::to_string(p.lcm.degree()) + " exceeds cap " +
                        std::to_string(limits.spair_degree_cap));
    ++processed;
    Poly s = s_polynomial(store[p.i], store[p.j], p.lcm, ord);
    Poly h = red.normal_form(std::move(s), false);
    if (h.is_zero()) continue;
    make_monic(h);
    if (h.lead().m.is_one()) {
      std::vector<Poly> unit(1);
      unit[0].terms.push_back({h.lead().m, h.lead().key, Rational(1)});
      if (pairs_processed) *pairs_processed = processed;
      return unit;
    }
    store.push_back(std::move(h));
    active.push_back(true);
    update(store.size() - 1);
    rebuild_reducer(red);
  }
  if (pairs_processed) *pairs_processed = processed;

  // interreduce the minimal basis
  std::vector<Poly> minimal;
  for (std::size_t k = 0; k < store.size(); ++k)
    if (active[k]) minimal.push_back(store[k]);
  std::sort(minimal.begin(), minimal.end(), [&](const Poly& a, const Poly& b) {
    return ord.greater(b.lead().m, b.lead().key, a.lead().m, a.lead().key);
  });
  std::vector<Poly> reduced;
  reduced.reserve(minimal.size());
  for (std::size_t k = 0; k < minimal.size(); ++k) {
    Reducer others(ord);
    for (std::size_t l = 0; l < minimal.size(); ++l)
      if (l != k) others.add(&minimal[l]);
    Poly tail;
    tail.sugar = minimal[k].sugar;
    tail.terms.assign(minimal[k].terms.begin() + 1, minimal[k].terms.end());
    Poly nf = others.normal_form(std::move(tail), true);
    Poly r;
    r.sugar = minimal[k].sugar;
    r.terms.push_back(minimal[k].lead());
    for (auto& t : nf.terms) r.terms.push_back(std::move(t));
    make_monic(r);
    reduced.push_back(std::move(r));
  }
  return reduced;
}

}  // namespace gb

inline GroebnerBasis groebner_basis(const std::vector<SparseSeries>& gens, const MonomialOrder& order = {},
                                    const GbLimits& limits = {}) {
  GroebnerBasis out;
  out.order = order;
  if (gens.empty()) return out;
  const std::size_t n = gens.front().num_vars();
  out.num_vars = n;
  for (const auto& g : gens)
    if (g.num_vars() != n) throw UsageError("groebner: generators live in different rings");
  gb::EngineOrder ord = gb::EngineOrder::from(order, n);
  std::vector<gb::Poly> input;
  for (const auto& g : gens) input.push_back(gb::from_series(g, ord));
  std::vector<gb::Poly> basis;
  try {
    basis = gb::buchberger(std::move(input), ord, limits, &out.pairs_processed);
  } catch (const ExponentOverflow&) {
    // lex reductions can raise the total degree without bound
    throw CapExceeded("Groebner intermediate exponent exceeds " + std::to_string(kMaxExponent));
  }
  for (const auto& p : basis) {
    out.polys.push_back(gb::to_series(p, n));
    out.leading.push_back(p.lead().m);
  }
  return out;
}

inline std::vector<SparseSeries> groebner(const std::vector<SparseSeries>& gens, const MonomialOrder& order = {},
                                          const GbLimits& limits = {}) {
  return groebner_basis(gens, order, limits).polys;
}

/// Remainder of f on division by the basis (fully reduced).
inline SparseSeries normal_form(const SparseSeries& f, const GroebnerBasis& basis) {
  if (basis.polys.empty()) return f;
  gb::EngineOrder ord = gb::EngineOrder::from(basis.order, basis.num_vars);
  std::vector<gb::Poly> polys;
  for (const auto& g : basis.polys) polys.push_back(gb::from_series(g, ord));
  gb::Reducer red(ord);
  for (const auto& p : polys) red.add(&p);
  return gb::to_series(red.normal_form(gb::from_series(f, ord), true), basis.num_vars);
}

inline bool ideal_contains(const GroebnerBasis& basis, const SparseSeries& f) {
  return normal_form(f, basis).is_zero();
}

/// Krull dimension of k[x]/(monomials): n minus the smallest set of variables
/// meeting the support of every generator. Returns -1 for the unit ideal.
inline int monomial_ideal_dimension(std::size_t num_vars, const std::vector<Monomial>& gens) {
  std::vector<std::uint64_t> edges;
  for (const auto& m : gens) {
    if (m.is_one()) return -1;
    edges.push_back(m.support());
  }
  // drop supports containing another support
  std::sort(edges.begin(), edges.end(), [](std::uint64_t a, std::uint64_t b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<std::uint64_t> minimal;
  for (auto e : edges) {
    bool redundant = false;
    for (auto m : minimal)
      if ((m & e) == m) {
        redundant = true;
        break;
      }
    if (!redundant) minimal.push_back(e);
  }
  std::size_t best = num_vars + 1;
  std::function<void(std::uint64_t, std::size_t)> search = [&](std::uint64_t chosen, std::size_t count) {
    if (count >= best) return;
    std::uint64_t pick = 0;
    int pick_size = 65;
    for (auto e : minimal) {
      if (e & chosen) continue;
      int s = std::popcount(e);
      if (s < pick_size) {
        pick = e;
        pick_size = s;
      }
    }
    if (pick_size == 65) {
      best = count;
      return;
    }
    if (count + 1 >= best) return;
    for (std::uint64_t rest = pick; rest; rest &= rest - 1) {
      std::uint64_t bit = rest & (~rest + 1);
      search(chosen | bit, count + 1);
    }
  };
  search(0, 0);
  return static_cast<int>(num_vars) - static_cast<int>(best);
}

/// Krull dimension of k[x]/(gens).
inline int ideal_dimension(const std::vector<SparseSeries>& gens, std::size_t num_vars,
                           const MonomialOrder& order = {}, const GbLimits& limits = {}) {
  std::vector<SparseSeries> nonzero;
  for (const auto& g : gens)
    if (!g.is_zero()) nonzero.push_back(g);
  if (nonzero.empty()) return static_cast<int>(num_vars);
  GroebnerBasis b = groebner_basis(nonzero, order, limits);
  return monomial_ideal_dimension(num_vars, b.leading);
}

/// Number of monomials outside the ideal generated by `gens`, counting only
/// monomials of degree < degree_bound.
inline std::size_t count_standard_monomials(std::size_t num_vars, const std::vector<Monomial>& gens,
                                            unsigned degree_bound) {
  std::size_t count = 0;
  Monomial m(num_vars);
  std::function<void(std::size_t, unsigned)> walk = [&](std::size_t var, unsigned deg) {
    if (var == num_vars) {
      for (const auto& g : gens)
        if (g.divides(m)) return;
      ++count;
      return;
    }
    for (unsigned e = 0; deg + e < degree_bound; ++e) {
      m.set(var, e);
      bool dead = false;
      // a generator in the variables fixed so far already divides every extension
      for (const auto& g : gens) {
        bool only_prefix = true;
        for (std::size_t v = var + 1; v < num_vars && only_prefix; ++v)
          if (g[v] != 0) only_prefix = false;
        if (only_prefix && g.divides(m)) {
          dead = true;
          break;
        }
      }
      if (dead) break;
      walk(var + 1, deg + e);
    }
    m.set(var, 0);
  };
  walk(0, 0);
  return count;
}

/// Vector-space dimension of k[x]/(gens + m^cap), flagged exact when it does
/// not change with the cap raised by 2.
struct Colength {
  std::size_t value = 0;
  bool exact = false;
  unsigned cap = 0;

  std::string str() const { return exact ? std::to_string(value) : ">=" + std::to_string(value); }
};

namespace detail {

inline std::vector<SparseSeries> power_of_maximal_ideal(std::size_t n, unsigned k) {
  std::vector<SparseSeries> out;
  Monomial m(n);
  std::function<void(std::size_t, unsigned)> walk = [&](std::size_t var, unsigned left) {
    if (var + 1 == n) {
      m.set(var, left);
      out.push_back(SparseSeries::monomial(n, m, Rational(1)));
      m.set(var, 0);
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      m.set(var, e);
      walk(var + 1, left - e);
    }
    m.set(var, 0);
  };
  if (n > 0) walk(0, k);
  return out;
}

/// dim k[x]/(gens + m^cap) by a global Groebner basis including every
/// monomial of degree cap. Slow; kept as an independent check.
inline std::size_t truncated_colength(const std::vector<SparseSeries>& gens, std::size_t n, unsigned cap,
                                      const GbLimits& limits = {}) {
  std::vector<SparseSeries> all;
  for (const auto& g : gens)
    if (!g.is_zero()) all.push_back(g.truncated(Precision(cap)).with_precision(Precision::infinite()));
  for (auto& m : power_of_maximal_ideal(n, cap)) all.push_back(std::move(m));
  GbLimits relaxed = limits;
  relaxed.spair_degree_cap = std::max(limits.spair_degree_cap, 2 * cap + 2);
  GroebnerBasis b = groebner_basis(all, MonomialOrder::grevlex(), relaxed);
  return count_standard_monomials(n, b.leading, cap);
}

}  // namespace detail

/// Standard basis of the ideal in the local ring at the origin, by
/// homogenizing with an extra variable and running the global engine on an
/// order that prefers low original degree.
struct LocalStandardBasis {
  std::size_t num_vars = 0;
  std::vector<SparseSeries> polys;  // dehomogenized
  std::vector<Monomial> leading;    // local leading monomials
};

inline LocalStandardBasis local_standard_basis(const std::vector<SparseSeries>& gens, std::size_t num_vars,
                                               const GbLimits& limits = {}) {
  LocalStandardBasis out;
  out.num_vars = num_vars;
  const std::size_t n = num_vars, nh = num_vars + 1;
  std::vector<SparseSeries> hom;
  for (const auto& g : gens) {
    if (!g.is_exact()) throw UsageError("local standard basis: inputs must be exact");
    if (g.is_zero()) continue;
    unsigned top = g.degree();
    std::vector<SparseSeries::Term> terms;
    for (const auto& [m, c] : g.terms()) {
      Monomial h(nh);
      for (std::size_t i = 0; i < n; ++i) h.set(i, m[i]);
      h.set(n, top - m.degree());
      terms.emplace_back(h, c);
    }
    hom.push_back(SparseSeries::from_terms(nh, std::move(terms)));
  }
  if (hom.empty()) return out;
  std::vector<unsigned> ones(nh, 1), t_only(nh, 0);
  t_only[n] = 1;
  // total degree, then t-degree (lower original degree wins), then revlex on x
  std::vector<std::size_t> perm(nh);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  gb::EngineOrder ord(nh, {ones, t_only}, true, perm);
  std::vector<gb::Poly> input;
  for (const auto& g : hom) input.push_back(gb::from_series(g, ord));
  std::vector<gb::Poly> basis = gb::buchberger(std::move(input), ord, limits);
  for (const auto& p : basis) {
    std::vector<SparseSeries::Term> terms;
    for (const auto& t : p.terms) {
      Monomial m(n);
      for (std::size_t i = 0; i < n; ++i) m.set(i, t.m[i]);
      terms.emplace_back(m, t.c);
    }
    out.polys.push_back(SparseSeries::from_terms(n, std::move(terms)));
    Monomial lead(n);
    for (std::size_t i = 0; i < n; ++i) lead.set(i, p.lead().m[i]);
    out.leading.push_back(lead);
  }
  return out;
}

/// Dimension of the local ring at the origin modulo the ideal (-1 when the
/// ideal is the unit ideal there).
inline int local_dimension(const std::vector<SparseSeries>& gens, std::size_t num_vars, const GbLimits& limits = {}) {
  LocalStandardBasis b = local_standard_basis(gens, num_vars, limits);
  if (b.leading.empty()) return static_cast<int>(num_vars);
  return monomial_ideal_dimension(num_vars, b.leading);
}

/// Colength of the ideal in the local ring at the origin; nullopt when infinite.
inline std::optional<std::size_t> local_colength(const std::vector<SparseSeries>& gens, std::size_t num_vars,
                                                 const GbLimits& limits = {}) {
  LocalStandardBasis b = local_standard_basis(gens, num_vars, limits);
  int dim = b.leading.empty() ? static_cast<int>(num_vars) : monomial_ideal_dimension(num_vars, b.leading);
  if (dim < 0) return std::size_t{0};
  if (dim > 0) return std::nullopt;
  unsigned bound = 1;
  for (const auto& m : b.leading)
    if (m.support() && std::popcount(m.support()) == 1) bound = std::max(bound, m.degree());
  // every standard monomial has each exponent below the pure power bound
  return count_standard_monomials(num_vars, b.leading, bound * static_cast<unsigned>(num_vars) + 1);
}

/// dim k[x]/(gens + m^cap). The quotient is local at the origin, and for a
/// local degree order the leading ideal of gens + m^cap is L(gens) + m^cap, so
/// this counts standard monomials of degree < cap.
inline Colength colength(const std::vector<SparseSeries>& gens, std::size_t num_vars, unsigned degree_cap,
                         const GbLimits& limits = {}) {
  if (degree_cap == 0) throw UsageError("colength: degree cap must be positive");
  LocalStandardBasis b = local_standard_basis(gens, num_vars, limits);
  std::size_t at_cap = count_standard_monomials(num_vars, b.leading, degree_cap);
  std::size_t raised = count_standard_monomials(num_vars, b.leading, degree_cap + 2);
  Colength c;
  c.cap = degree_cap;
  c.exact = at_cap == raised;
  c.value = at_cap;
  return c;
}

}  // namespace topsing
