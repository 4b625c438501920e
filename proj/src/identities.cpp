#include "pgrp/identities.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace pgrp {

namespace {

using Elems = std::span<const ExponentVector>;
using Ints = std::span<const std::int64_t>;
using EV = ExponentVector;

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n)
    return 0;
  k = std::min(k, n - k);
  __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return static_cast<std::int64_t>(r);
}

// Thin arithmetic front end so the formulas below read like the identities.
struct Ops {
  const Collector &c;

  EV mul(std::initializer_list<EV> xs) const {
    EV acc = c.identity();
    for (const auto &x : xs)
      acc = c.multiply(acc, x);
    return acc;
  }
  EV inv(const EV &x) const { return c.inverse(x); }
  EV pow(const EV &x, std::int64_t k) const { return c.power(x, k); }
  EV conj(const EV &x, const EV &by) const { return c.conjugate(x, by); }
  EV comm(std::initializer_list<EV> xs) const {
    std::vector<EV> v(xs);
    return c.left_normed_commutator(v);
  }
  EV comm(const std::vector<EV> &xs) const { return c.left_normed_commutator(xs); }
  EV one() const { return c.identity(); }
};

Evaluation exact(EV lhs, EV rhs) {
  bool ok = lhs == rhs;
  return {ok, std::move(lhs), std::move(rhs)};
}

// lhs == rhs modulo K_term(G)
Evaluation congruent(const GroupAnalysis &g, std::size_t term, EV lhs, EV rhs) {
  const Collector &c = g.collector();
  auto q = c.multiply(lhs, c.inverse(rhs));
  bool ok = contains(g.lcs_term(term), q);
  return {ok, std::move(lhs), std::move(rhs)};
}

// First disagreement in a chain of values that should all be equal.
Evaluation all_equal(const std::vector<EV> &vals) {
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] != vals[0])
      return {false, vals[0], vals[i]};
  return {true, vals[0], vals[0]};
}

using RelationFn = std::function<Evaluation(const GroupAnalysis &, Elems, Ints)>;

struct Relation {
  std::string formula;
  RelationFn fn;
};

const std::vector<Relation> &relations() {
  static const std::vector<Relation> table = [] {
    std::vector<Relation> r;
    auto add = [&](std::string f, RelationFn fn) { r.push_back({std::move(f), std::move(fn)}); };

    // Commutator expansions, valid in every group.
    add("[x,yz] = [x,z][x,y][x,y,z]", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &x = e[0], &y = e[1], &z = e[2];
      return exact(o.comm({x, o.mul({y, z})}),
                   o.mul({o.comm({x, z}), o.comm({x, y}), o.comm({x, y, z})}));
    });
    add("[xy,z] = [x,z][x,z,y][y,z]", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &x = e[0], &y = e[1], &z = e[2];
      return exact(o.comm({o.mul({x, y}), z}),
                   o.mul({o.comm({x, z}), o.comm({x, z, y}), o.comm({y, z})}));
    });
    add("[x,y]^-1 = [y,x] = [x,y^-1]^y = [x^-1,y]^x", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &x = e[0], &y = e[1];
      return all_equal({o.inv(o.comm({x, y})), o.comm({y, x}), o.conj(o.comm({x, o.inv(y)}), y),
                        o.conj(o.comm({o.inv(x), y}), x)});
    });

    // Multilinearity modulo K_{n+1}; elements a_1..a_n then b, ints {i}.
    add("[a1,...,ai bi,...,an] = [a1,...,ai,...,an][a1,...,bi,...,an] mod K(n+1)",
        [](const GroupAnalysis &g, Elems e, Ints k) {
          Ops o{g.collector()};
          const std::size_t n = e.size() - 1;
          const auto pos = static_cast<std::size_t>(k[0]);
          std::vector<EV> prod(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(n));
          std::vector<EV> with_a = prod, with_b = prod;
          prod[pos] = o.mul({e[pos], e[n]});
          with_b[pos] = e[n];
          return congruent(g, n + 1, o.comm(prod), o.mul({o.comm(with_a), o.comm(with_b)}));
        });
    add("[a1^i1,...,an^in] = [a1,...,an]^(i1...in) mod K(n+1)",
        [](const GroupAnalysis &g, Elems e, Ints k) {
          Ops o{g.collector()};
          std::vector<EV> powered, plain(e.begin(), e.end());
          std::int64_t total = 1;
          for (std::size_t t = 0; t < e.size(); ++t) {
            powered.push_back(o.pow(e[t], k[t]));
            total *= k[t];
          }
          return congruent(g, e.size() + 1, o.comm(powered), o.pow(o.comm(plain), total));
        });

    // <x,y> with K_5 trivial is metabelian.
    add("K5(<x,y>) = 1 implies <x,y>'' = 1", [](const GroupAnalysis &g, Elems e, Ints) {
      const auto &grp = g.group();
      std::vector<EV> gens(e.begin(), e.end());
      Evaluation ev{true, g.collector().identity(), g.collector().identity()};
      if (nilpotency_class(grp, gens) >= 5)
        return ev;
      auto derived = derived_subgroup(grp, gens);
      const auto &seq = derived.induced_sequence();
      for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j) {
          auto c = g.collector().commutator(seq[i], seq[j]);
          if (!c.is_identity())
            return Evaluation{false, c, g.collector().identity()};
        }
      return ev;
    });

    // Metabelian expansions; ints {m, n}.
    add("[a^m,b^n] = prod_{i<=m,j<=n} [ia,jb]^(C(m,i)C(n,j))",
        [](const GroupAnalysis &g, Elems e, Ints k) {
          Ops o{g.collector()};
          const auto &a = e[0], &b = e[1];
          const std::int64_t m = k[0], n = k[1];
          EV prod = o.one();
          for (std::int64_t i = 1; i <= m; ++i) {
            // [a,b,a x (i-1)]
            EV base = o.comm({a, b});
            for (std::int64_t t = 1; t < i && !base.is_identity(); ++t)
              base = o.comm({base, a});
            EV term = base;
            for (std::int64_t j = 1; j <= n; ++j) {
              if (term.is_identity())
                break;
              prod = o.mul({prod, o.pow(term, binomial(m, i) * binomial(n, j))});
              term = o.comm({term, b});
            }
          }
          return exact(o.comm({o.pow(a, m), o.pow(b, n)}), prod);
        });
    add("[c,a,b] = [c,b,a]", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      return exact(o.comm({e[0], e[1], e[2]}), o.comm({e[0], e[2], e[1]}));
    });

    // ints {n}
    add("c(G) <= d n/(d-1)", [](const GroupAnalysis &g, Elems, Ints k) {
      const auto c = static_cast<std::int64_t>(g.nilpotency_class());
      const std::int64_t d = g.generator_count();
      return Evaluation{c * (d - 1) <= d * k[0], g.collector().identity(),
                        g.collector().identity()};
    });

    // elements x, y, z_1..z_s
    add("[x,y,z1,...,zs] = 1", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      return exact(o.comm(std::vector<EV>(e.begin(), e.end())), o.one());
    });
    add("[a,b,a,a,a] = [a,b,b,b,b] = 1", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      return all_equal({o.one(), o.comm({a, b, a, a, a}), o.comm({a, b, b, b, b})});
    });

    add("[a,b,a,b] = [a,b,b,a] mod K5", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      return congruent(g, 5, o.comm({a, b, a, b}), o.comm({a, b, b, a}));
    });

    // ints {n}
    add("[x^n,y] = [x,y]^n [x,y,x]^C(n,2)", [](const GroupAnalysis &g, Elems e, Ints k) {
      Ops o{g.collector()};
      const auto &x = e[0], &y = e[1];
      const auto n = k[0];
      return exact(o.comm({o.pow(x, n), y}),
                   o.mul({o.pow(o.comm({x, y}), n), o.pow(o.comm({x, y, x}), binomial(n, 2))}));
    });
    add("[x,y^n] = [x,y]^n [x,y,y]^C(n,2)", [](const GroupAnalysis &g, Elems e, Ints k) {
      Ops o{g.collector()};
      const auto &x = e[0], &y = e[1];
      const auto n = k[0];
      return exact(o.comm({x, o.pow(y, n)}),
                   o.mul({o.pow(o.comm({x, y}), n), o.pow(o.comm({x, y, y}), binomial(n, 2))}));
    });

    // Weight-6 structure for a generating pair (a, b).
    add("K6(G) = <[a,b,a,b,a,b]>", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      auto w = o.comm({a, b, a, b, a, b});
      bool ok = close_subgroup(g.group(), std::span<const EV>(&w, 1)) == g.lcs_term(6);
      return Evaluation{ok, w, o.one()};
    });
    add("[a,b,a,b,a,b]^p = 1", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      return exact(o.pow(o.comm({a, b, a, b, a, b}), g.collector().prime()), o.one());
    });
    add("[a,b,b,b,a,a][a,b,b,a,b,a][a,b,a,b,b,a] = 1", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      return exact(o.mul({o.comm({a, b, b, b, a, a}), o.comm({a, b, b, a, b, a}),
                          o.comm({a, b, a, b, b, a})}),
                   o.one());
    });
    add("[a,b,b,b,a,a][a,b,b,a,b,a][a,b,b,a,a,b] = 1", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      return exact(o.mul({o.comm({a, b, b, b, a, a}), o.comm({a, b, b, a, b, a}),
                          o.comm({a, b, b, a, a, b})}),
                   o.one());
    });
    add("[a,b,a,a,b,b][a,b,a,b,a,b][a,b,a,b,b,a] = 1", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      return exact(o.mul({o.comm({a, b, a, a, b, b}), o.comm({a, b, a, b, a, b}),
                          o.comm({a, b, a, b, b, a})}),
                   o.one());
    });
    add("[a,b,b,a,b,a] = [a,b,a,b,b,a] = [a,b,b,a,a,b] = [a,b,a,b,a,b]",
        [](const GroupAnalysis &g, Elems e, Ints) {
          Ops o{g.collector()};
          const auto &a = e[0], &b = e[1];
          return all_equal({o.comm({a, b, b, a, b, a}), o.comm({a, b, a, b, b, a}),
                            o.comm({a, b, b, a, a, b}), o.comm({a, b, a, b, a, b})});
        });
    add("[a,b,b,b,a,a] = [a,b,a,a,b,b] = [a,b,a,b,a,b]^-2",
        [](const GroupAnalysis &g, Elems e, Ints) {
          Ops o{g.collector()};
          const auto &a = e[0], &b = e[1];
          return all_equal({o.comm({a, b, b, b, a, a}), o.comm({a, b, a, a, b, b}),
                            o.pow(o.comm({a, b, a, b, a, b}), -2)});
        });

    // Weight-5 structure for a generating pair (a, b), p >= 3.
    add("K5(G) = <[a,b,a,b,a],[a,b,b,a,b],K6(G)>", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      std::vector<EV> gens{o.comm({a, b, a, b, a}), o.comm({a, b, b, a, b})};
      bool ok = join(g.lcs_term(6), gens) == g.lcs_term(5);
      return Evaluation{ok, gens[0], gens[1]};
    });
    add("[a,b,a,b,a]^p = [a,b,b,a,b]^p = 1", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      const auto p = g.collector().prime();
      return all_equal({o.one(), o.pow(o.comm({a, b, a, b, a}), p),
                        o.pow(o.comm({a, b, b, a, b}), p)});
    });
    add("|K5(G)| divides p^3", [](const GroupAnalysis &g, Elems, Ints) {
      bool ok = g.lcs_term(5).order_exponent() <= 3;
      return Evaluation{ok, g.collector().identity(), g.collector().identity()};
    });
    add("[a,b,b,a,a] = [a,b,a,b,a] mod K6", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      return congruent(g, 6, o.comm({a, b, b, a, a}), o.comm({a, b, a, b, a}));
    });
    add("[a,b,a,b,b] = [a,b,b,a,b] mod K6", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      return congruent(g, 6, o.comm({a, b, a, b, b}), o.comm({a, b, b, a, b}));
    });
    add("[a,b,a,a,b] = [a,b,a,b,a]^-2 mod K6", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      return congruent(g, 6, o.comm({a, b, a, a, b}), o.pow(o.comm({a, b, a, b, a}), -2));
    });
    add("[a,b,b,b,a] = [a,b,b,a,b]^-2 mod K6", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      return congruent(g, 6, o.comm({a, b, b, b, a}), o.pow(o.comm({a, b, b, a, b}), -2));
    });

    // p-th powers deep in a commutator; elements x, y, z, t.
    add("[x^p,y,z,t] = [x,y,z,t]^p [x,y,x,x,z,t]^C(p,3)",
        [](const GroupAnalysis &g, Elems e, Ints) {
          Ops o{g.collector()};
          const auto &x = e[0], &y = e[1], &z = e[2], &t = e[3];
          const auto p = g.collector().prime();
          return exact(o.comm({o.pow(x, p), y, z, t}),
                       o.mul({o.pow(o.comm({x, y, z, t}), p),
                              o.pow(o.comm({x, y, x, x, z, t}), binomial(p, 3))}));
        });
    add("[y,x^p,z,t] = [y,x,z,t]^p [y,x,x,x,z,t]^C(p,3)",
        [](const GroupAnalysis &g, Elems e, Ints) {
          Ops o{g.collector()};
          const auto &x = e[0], &y = e[1], &z = e[2], &t = e[3];
          const auto p = g.collector().prime();
          return exact(o.comm({y, o.pow(x, p), z, t}),
                       o.mul({o.pow(o.comm({y, x, z, t}), p),
                              o.pow(o.comm({y, x, x, x, z, t}), binomial(p, 3))}));
        });
    add("[x^p,y,z,t] = [x,y,z,t]^p and [y,x^p,z,t] = [y,x,z,t]^p when z = x or t = x",
        [](const GroupAnalysis &g, Elems e, Ints) {
          Ops o{g.collector()};
          const auto &x = e[0], &y = e[1], &z = e[2], &t = e[3];
          const auto p = g.collector().prime();
          auto first = exact(o.comm({o.pow(x, p), y, z, t}), o.pow(o.comm({x, y, z, t}), p));
          if (!first.holds)
            return first;
          return exact(o.comm({y, o.pow(x, p), z, t}), o.pow(o.comm({y, x, z, t}), p));
        });

    add("[x,a,b^x][b,x,a^b][a,b,x^a] = 1", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &x = e[0], &a = e[1], &b = e[2];
      return exact(o.mul({o.comm({x, a, o.conj(b, x)}), o.comm({b, x, o.conj(a, b)}),
                          o.comm({a, b, o.conj(x, a)})}),
                   o.one());
    });
    add("[a,b,a,a,b,b] = [a,b,a,b,a,b]", [](const GroupAnalysis &g, Elems e, Ints) {
      Ops o{g.collector()};
      const auto &a = e[0], &b = e[1];
      return exact(o.comm({a, b, a, a, b, b}), o.comm({a, b, a, b, a, b}));
    });

    add("[a,b,a,a,b,b] = [a,b,b,b,a,a] = [a,b,a,b,a,b] = [a,b,a,b,b,a] = [a,b,b,a,a,b] = "
        "[a,b,b,a,b,a]",
        [](const GroupAnalysis &g, Elems e, Ints) {
          Ops o{g.collector()};
          const auto &a = e[0], &b = e[1];
          return all_equal({o.comm({a, b, a, a, b, b}), o.comm({a, b, b, b, a, a}),
                            o.comm({a, b, a, b, a, b}), o.comm({a, b, a, b, b, a}),
                            o.comm({a, b, b, a, a, b}), o.comm({a, b, b, a, b, a})});
        });
    return r;
  }();
  return table;
}

const Relation &relation(std::string_view formula) {
  for (const auto &r : relations())
    if (r.formula == formula)
      return r;
  throw std::invalid_argument("unknown relation: " + std::string(formula));
}

constexpr std::size_t kMaxWitnesses = 5;

std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::int64_t uniform_in(std::mt19937_64 &rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

// Per-trial evaluation context for one catalog entry.
struct Trial {
  const GroupAnalysis &g;
  std::mt19937_64 &rng;
  IdentityCheck &check;
  bool failed = false;

  const Collector &col() const { return g.collector(); }
  EV element() { return uniform_element(col(), rng); }

  std::pair<EV, EV> generating_pair(std::size_t attempts = 200) {
    for (std::size_t k = 0; k < attempts; ++k) {
      EV a = element(), b = element();
      std::vector<EV> pair{a, b};
      if (g.generates(pair))
        return {a, b};
    }
    throw std::runtime_error("no generating pair found");
  }

  void eval(std::string_view formula, std::vector<EV> elems, std::vector<std::int64_t> ints = {}) {
    const auto &r = relation(formula);
    auto ev = r.fn(g, elems, ints);
    if (ev.holds)
      return;
    if (!failed) {
      failed = true;
      ++check.failure_count;
    }
    if (check.failures.size() < kMaxWitnesses)
      check.failures.push_back(
          {r.formula, std::move(elems), std::move(ints), std::move(ev.lhs), std::move(ev.rhs)});
  }
};

// Returns false when the sampled tuple does not meet the hypotheses.
using TrialFn = std::function<bool(Trial &)>;
// Returns a reason string when the group-level hypotheses fail.
using GroupHypothesis = std::function<std::optional<std::string>(const GroupAnalysis &)>;

struct CatalogEntry {
  std::string id;
  std::string hypotheses;
  std::size_t default_trials;
  GroupHypothesis group_ok;
  TrialFn trial;
};

std::optional<std::string> none(const GroupAnalysis &) { return std::nullopt; }

std::optional<std::string> need_P3(const GroupAnalysis &g) {
  if (!g.in_P(3))
    return "G is not in P3";
  return std::nullopt;
}

std::optional<std::string> need_P3_odd(const GroupAnalysis &g) {
  if (g.collector().prime() < 3)
    return "p < 3";
  return need_P3(g);
}

const std::vector<CatalogEntry> &catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> c;

    c.push_back({"basic_expansions", "none", 1000, none, [](Trial &t) {
                   EV x = t.element(), y = t.element(), z = t.element();
                   t.eval("[x,yz] = [x,z][x,y][x,y,z]", {x, y, z});
                   t.eval("[xy,z] = [x,z][x,z,y][y,z]", {x, y, z});
                   t.eval("[x,y]^-1 = [y,x] = [x,y^-1]^y = [x^-1,y]^x", {x, y});
                   return true;
                 }});

    c.push_back({"multilinearity", "none", 1000, none, [](Trial &t) {
                   const std::int64_t p2 = t.col().prime() * t.col().prime();
                   const std::size_t n = 2 + static_cast<std::size_t>(uniform_below(t.rng, 3));
                   std::vector<EV> as;
                   for (std::size_t k = 0; k < n; ++k)
                     as.push_back(t.element());
                   auto with_b = as;
                   with_b.push_back(t.element());
                   const auto pos = static_cast<std::int64_t>(uniform_below(t.rng, n));
                   t.eval("[a1,...,ai bi,...,an] = [a1,...,ai,...,an][a1,...,bi,...,an] mod K(n+1)",
                          with_b, {pos});
                   std::vector<std::int64_t> ks;
                   for (std::size_t k = 0; k < n; ++k)
                     ks.push_back(uniform_in(t.rng, -p2, p2));
                   t.eval("[a1^i1,...,an^in] = [a1,...,an]^(i1...in) mod K(n+1)", as, ks);
                   return true;
                 }});

    c.push_back({"metabelian_criterion", "2-generated subgroup <x,y> with K5(<x,y>) = 1", 100,
                 none, [](Trial &t) {
                   EV x = t.element(), y = t.element();
                   std::vector<EV> gens{x, y};
                   if (nilpotency_class(t.g.group(), gens) >= 5)
                     return false;
                   t.eval("K5(<x,y>) = 1 implies <x,y>'' = 1", gens);
                   return true;
                 }});

    c.push_back({"metabelian_expansion",
                 "a, b in a metabelian subgroup H (H = G when G is metabelian), c in H'", 100,
                 none, [](Trial &t) {
                   EV a = t.element(), b = t.element();
                   std::vector<EV> gens{a, b};
                   const GroupPtr &grp = t.g.group();
                   std::optional<Subgroup> derived;
                   if (t.g.is_metabelian()) {
                     derived = t.g.derived();
                   } else {
                     derived = derived_subgroup(grp, gens);
                     if (!is_abelian(grp, derived->induced_sequence()))
                       return false;
                   }
                   const std::int64_t p2 = t.col().prime() * t.col().prime();
                   std::int64_t m = uniform_in(t.rng, 1, p2), n = uniform_in(t.rng, 1, p2);
                   t.eval("[a^m,b^n] = prod_{i<=m,j<=n} [ia,jb]^(C(m,i)C(n,j))", {a, b}, {m, n});
                   EV cc = derived->random_element(t.rng);
                   t.eval("[c,a,b] = [c,b,a]", {cc, a, b});
                   return true;
                 }});

    c.push_back({"class_bound", "G in P_n for some n", 1,
                 [](const GroupAnalysis &g) -> std::optional<std::string> {
                   if (g.generator_count() < 2)
                     return "d(G) < 2";
                   if (!g.smallest_P_index())
                     return "G is in no P_n";
                   return std::nullopt;
                 },
                 [](Trial &t) {
                   // every n with G in P_n
                   const auto lo = *t.g.smallest_P_index();
                   const auto c = static_cast<int>(t.g.nilpotency_class());
                   for (int n = lo; n < c; ++n)
                     t.eval("c(G) <= d n/(d-1)", {}, {n});
                   return true;
                 }});

    c.push_back({"vanishing", "G in P_n (n the smallest such index)", 1000,
                 [](const GroupAnalysis &g) -> std::optional<std::string> {
                   if (!g.smallest_P_index())
                     return "G is in no P_n";
                   return std::nullopt;
                 },
                 [](Trial &t) {
                   const int n = *t.g.smallest_P_index();
                   const int s_max = std::max(n, 6);
                   EV x = t.element(), y = t.element();
                   const auto s = static_cast<std::size_t>(uniform_in(t.rng, n, s_max));
                   const bool many_x = uniform_below(t.rng, 2) == 0;
                   std::vector<EV> zs;
                   for (std::size_t k = 0; k < s; ++k)
                     zs.push_back(uniform_below(t.rng, 2) == 0 ? x : y);
                   // force at least n copies of the chosen entry
                   std::vector<std::size_t> slots(s);
                   for (std::size_t k = 0; k < s; ++k)
                     slots[k] = k;
                   for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
                     auto pick = k + static_cast<std::size_t>(uniform_below(t.rng, s - k));
                     std::swap(slots[k], slots[pick]);
                     zs[slots[k]] = many_x ? x : y;
                   }
                   std::vector<EV> word{x, y};
                   word.insert(word.end(), zs.begin(), zs.end());
                   t.eval("[x,y,z1,...,zs] = 1", word);
                   if (n <= 3)
                     t.eval("[a,b,a,a,a] = [a,b,b,b,b] = 1", {x, y});
                   return true;
                 }});

    c.push_back({"swap_mod_K5", "d(G) = 2", 1000,
                 [](const GroupAnalysis &g) -> std::optional<std::string> {
                   if (g.generator_count() != 2)
                     return "d(G) != 2";
                   return std::nullopt;
                 },
                 [](Trial &t) {
                   EV a = t.element(), b = t.element();
                   t.eval("[a,b,a,b] = [a,b,b,a] mod K5", {a, b});
                   return true;
                 }});

    c.push_back({"power_expansion", "G in P3, <x,y> proper", 1000, need_P3, [](Trial &t) {
                   EV x = t.element(), y = t.element();
                   std::vector<EV> pair{x, y};
                   if (t.g.generates(pair))
                     return false;
                   const std::int64_t p = t.col().prime();
                   const std::int64_t n = uniform_in(t.rng, 1, p * p * p);
                   t.eval("[x^n,y] = [x,y]^n [x,y,x]^C(n,2)", {x, y}, {n});
                   t.eval("[x,y^n] = [x,y]^n [x,y,y]^C(n,2)", {x, y}, {n});
                   return true;
                 }});

    c.push_back({"K6_structure", "G in P3, G = <a,b>", 1000, need_P3, [](Trial &t) {
                   auto [a, b] = t.generating_pair();
                   t.eval("K6(G) = <[a,b,a,b,a,b]>", {a, b});
                   t.eval("[a,b,a,b,a,b]^p = 1", {a, b});
                   t.eval("[a,b,b,b,a,a][a,b,b,a,b,a][a,b,a,b,b,a] = 1", {a, b});
                   t.eval("[a,b,b,b,a,a][a,b,b,a,b,a][a,b,b,a,a,b] = 1", {a, b});
                   t.eval("[a,b,a,a,b,b][a,b,a,b,a,b][a,b,a,b,b,a] = 1", {a, b});
                   t.eval("[a,b,b,a,b,a] = [a,b,a,b,b,a] = [a,b,b,a,a,b] = [a,b,a,b,a,b]", {a, b});
                   t.eval("[a,b,b,b,a,a] = [a,b,a,a,b,b] = [a,b,a,b,a,b]^-2", {a, b});
                   return true;
                 }});

    c.push_back({"K5_structure", "p >= 3, G in P3, G = <a,b>", 1000, need_P3_odd, [](Trial &t) {
                   auto [a, b] = t.generating_pair();
                   t.eval("K5(G) = <[a,b,a,b,a],[a,b,b,a,b],K6(G)>", {a, b});
                   t.eval("[a,b,a,b,a]^p = [a,b,b,a,b]^p = 1", {a, b});
                   t.eval("|K5(G)| divides p^3", {});
                   t.eval("[a,b,b,a,a] = [a,b,a,b,a] mod K6", {a, b});
                   t.eval("[a,b,a,b,b] = [a,b,b,a,b] mod K6", {a, b});
                   t.eval("[a,b,a,a,b] = [a,b,a,b,a]^-2 mod K6", {a, b});
                   t.eval("[a,b,b,b,a] = [a,b,b,a,b]^-2 mod K6", {a, b});
                   return true;
                 }});

    c.push_back({"pth_power_depth", "p >= 3, d(G) = 2, G in P3", 1000,
                 [](const GroupAnalysis &g) -> std::optional<std::string> {
                   if (g.generator_count() != 2)
                     return "d(G) != 2";
                   return need_P3_odd(g);
                 },
                 [](Trial &t) {
                   EV x = t.element(), y = t.element(), z = t.element(), w = t.element();
                   t.eval("[x^p,y,z,t] = [x,y,z,t]^p [x,y,x,x,z,t]^C(p,3)", {x, y, z, w});
                   t.eval("[y,x^p,z,t] = [y,x,z,t]^p [y,x,x,x,z,t]^C(p,3)", {x, y, z, w});
                   if (uniform_below(t.rng, 2) == 0)
                     z = x;
                   else
                     w = x;
                   t.eval("[x^p,y,z,t] = [x,y,z,t]^p and [y,x^p,z,t] = [y,x,z,t]^p when z = x or t = x",
                          {x, y, z, w});
                   return true;
                 }});

    c.push_back({"hall_witt",
                 "none; the derived equality [a,b,a,a,b,b] = [a,b,a,b,a,b] additionally needs "
                 "p = 2, G in P3, G = <a,b>",
                 1000, none, [](Trial &t) {
                   EV x = t.element(), a = t.element(), b = t.element();
                   t.eval("[x,a,b^x][b,x,a^b][a,b,x^a] = 1", {x, a, b});
                   if (t.col().prime() == 2 && t.g.in_P(3)) {
                     std::vector<EV> pair{a, b};
                     if (t.g.generates(pair))
                       t.eval("[a,b,a,a,b,b] = [a,b,a,b,a,b]", {a, b});
                   }
                   return true;
                 }});

    c.push_back({"eq7_symmetry", "p = 3, G in P3, G = <a,b>", 1000,
                 [](const GroupAnalysis &g) -> std::optional<std::string> {
                   if (g.collector().prime() != 3)
                     return "p != 3";
                   return need_P3(g);
                 },
                 [](Trial &t) {
                   auto [a, b] = t.generating_pair();
                   t.eval("[a,b,a,a,b,b] = [a,b,b,b,a,a] = [a,b,a,b,a,b] = [a,b,a,b,b,a] = "
                          "[a,b,b,a,a,b] = [a,b,b,a,b,a]",
                          {a, b});
                   return true;
                 }});
    return c;
  }();
  return entries;
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view id) {
  // FNV-1a over the id, folded into the user seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : id) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return seed * 0x9e3779b97f4a7c15ULL ^ h;
}

IdentityCheck run_entry(const GroupAnalysis &g, const CatalogEntry &e, std::size_t trials,
                        std::uint64_t seed) {
  IdentityCheck chk;
  chk.id = e.id;
  chk.hypotheses = e.hypotheses;
  chk.trials_requested = trials;
  if (auto reason = e.group_ok(g)) {
    chk.status = CheckStatus::skip;
    chk.note = "hypothesis fails: " + *reason;
    return chk;
  }
  std::mt19937_64 rng(mix_seed(seed, e.id));
  const std::size_t budget = std::max<std::size_t>(100, 20 * trials);
  std::size_t attempts = 0;
  try {
    while (chk.trials < trials && attempts < budget) {
      ++attempts;
      Trial t{g, rng, chk};
      if (e.trial(t))
        ++chk.trials;
    }
  } catch (const CollectionError &err) {
    chk.status = CheckStatus::fail;
    chk.note = std::string("collection failed: ") + err.what();
    return chk;
  }
  if (chk.failure_count > 0) {
    chk.status = CheckStatus::fail;
  } else if (chk.trials == 0) {
    chk.status = CheckStatus::skip;
    chk.note = "no sampled tuple met the hypotheses within " + std::to_string(budget) +
               " attempts";
  } else {
    chk.status = CheckStatus::pass;
    if (chk.trials < trials)
      chk.note = "hypotheses met by " + std::to_string(chk.trials) + " of " +
                 std::to_string(attempts) + " samples";
  }
  return chk;
}

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::skip:
      return "skip";
  }
  return "?";
}

std::size_t VerificationReport::count(CheckStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [s](const IdentityCheck &c) { return c.status == s; }));
}

const std::vector<std::string> &identity_catalog() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto &e : catalog())
      out.push_back(e.id);
    return out;
  }();
  return ids;
}

std::size_t default_trials(std::string_view id) {
  for (const auto &e : catalog())
    if (e.id == id)
      return e.default_trials;
  throw std::invalid_argument("unknown identity id: " + std::string(id));
}

VerificationReport run_identity_suite(const GroupAnalysis &g, std::string group_id,
                                      std::span<const std::string> ids,
                                      std::optional<std::size_t> trials, std::uint64_t seed) {
  if (trials && *trials == 0)
    throw std::invalid_argument("trials must be at least 1");
  for (const auto &id : ids)
    default_trials(id);  // validates

  VerificationReport rep;
  rep.group_id = std::move(group_id);
  rep.seed = seed;
  // catalog order, regardless of the order ids were given in
  for (const auto &e : catalog()) {
    if (std::find(ids.begin(), ids.end(), e.id) == ids.end())
      continue;
    rep.checks.push_back(run_entry(g, e, trials.value_or(e.default_trials), seed));
  }
  return rep;
}

IdentityCheck verify_main_theorem(const GroupAnalysis &g) {
  const auto p = g.collector().prime();
  if (p != 2 && p != 3)
    throw std::domain_error("class bound 5 for P3 is only claimed for p = 2 or 3");
  IdentityCheck chk;
  chk.id = "main_theorem";
  chk.hypotheses = "p in {2,3}, G in P3";
  chk.trials_requested = 1;
  if (!g.in_P(3)) {
    chk.status = CheckStatus::skip;
    chk.note = "hypothesis fails: G is not in P3 (class " +
               std::to_string(g.nilpotency_class()) + ")";
    return chk;
  }
  chk.trials = 1;
  const auto c = g.nilpotency_class();
  const bool k6_trivial = g.lcs_term(6).is_trivial();
  chk.status = (c <= 5 && k6_trivial) ? CheckStatus::pass : CheckStatus::fail;
  chk.note = "class " + std::to_string(c) + ", K6 " + (k6_trivial ? "trivial" : "nontrivial");
  if (chk.status == CheckStatus::fail)
    chk.failure_count = 1;
  return chk;
}

Evaluation evaluate_witness(const GroupAnalysis &g, const Witness &w) {
  return relation(w.relation).fn(g, w.elements, w.integers);
}

std::vector<std::string> relation_formulas() {
  std::vector<std::string> out;
  for (const auto &r : relations())
    out.push_back(r.formula);
  return out;
}

ExponentVector uniform_element(const Collector &col, std::mt19937_64 &rng) {
  ExponentVector v = col.identity();
  for (std::size_t i = 0; i < col.rank(); ++i)
    v[i] = static_cast<Exponent>(uniform_below(rng, static_cast<std::uint64_t>(col.relative_order(i))));
  return v;
}

std::string format_witness(const Collector &col, const Witness &w) {
  std::ostringstream out;
  out << "witness {" << w.relation << "}";
  for (std::size_t k = 0; k < w.elements.size(); ++k)
    out << " e" << k << "=(" << col.format(w.elements[k]) << ")";
  for (std::size_t k = 0; k < w.integers.size(); ++k)
    out << " k" << k << "=" << w.integers[k];
  if (!w.lhs.exps.empty())
    out << " lhs=(" << col.format(w.lhs) << ")";
  if (!w.rhs.exps.empty())
    out << " rhs=(" << col.format(w.rhs) << ")";
  return out.str();
}

std::string format_check_line(const IdentityCheck &c) {
  std::ostringstream out;
  out << "check " << c.id << ' ' << to_string(c.status) << " trials=" << c.trials
      << " failures=" << c.failure_count;
  return out.str();
}

std::string format_report_lines(const VerificationReport &rep) {
  std::string out;
  for (const auto &c : rep.checks)
    out += format_check_line(c) + '\n';
  return out;
}

std::string format_report_text(const Collector &col, const VerificationReport &rep) {
  std::ostringstream out;
  out << "identity report for " << rep.group_id << " (seed " << rep.seed << ")\n";
  for (const auto &c : rep.checks) {
    out << "  " << c.id << ": " << to_string(c.status) << ", " << c.trials << " trials";
    if (c.failure_count)
      out << ", " << c.failure_count << " failing";
    out << "  [hypotheses: " << c.hypotheses << "]";
    if (!c.note.empty())
      out << "  (" << c.note << ")";
    out << '\n';
    for (const auto &w : c.failures)
      out << "    " << format_witness(col, w) << '\n';
  }
  out << "  totals: " << rep.count(CheckStatus::pass) << " pass, " << rep.count(CheckStatus::fail)
      << " fail, " << rep.count(CheckStatus::skip) << " skip\n";
  return out.str();
}

}  // namespace pgrp
