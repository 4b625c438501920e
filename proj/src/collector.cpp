#include "pgrp/collector.hpp"

#include <algorithm>
#include <sstream>

namespace pgrp {

bool ExponentVector::is_identity() const {
  return std::all_of(exps.begin(), exps.end(), [](Exponent e) { return e == 0; });
}

std::size_t ExponentVector::leading_index() const {
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i] != 0)
      return i;
  return exps.size();
}

std::size_t ExponentVectorHash::operator()(const ExponentVector &v) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (auto e : v.exps) {
    h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

Collector::Collector(PcPresentation pres, CollectorOptions options)
    : pres_(std::move(pres)), options_(options) {
  auto diags = validate_structure(pres_);
  if (has_errors(diags)) {
    std::string msg = "invalid presentation";
    for (const auto &d : diags)
      if (d.severity == Severity::error)
        msg += "; " + to_string(d);
    throw std::invalid_argument(msg);
  }

  const std::size_t m = rank();
  power_nf_.assign(m, identity());
  power_syl_.assign(m, {});
  comm_nf_.assign(m * m, identity());
  conjugate_syl_.assign(m * m, {});
  commutes_.assign(m * m, 1);

  // Relations of g_i only mention generators above i, and collecting such
  // words only uses relations between generators above i.
  for (std::size_t i = m; i-- > 0;) {
    power_nf_[i] = normalize(pres_.power_relations[i]);
    power_syl_[i] = syllables_of(power_nf_[i]);
    for (std::size_t j = i + 1; j < m; ++j) {
      auto c = normalize(pres_.commutator(j, i));
      commutes_[j * m + i] = c.is_identity() ? 1 : 0;
      auto conj = generator(j);
      if (!c.is_identity())
        conj = multiply(conj, c);
      comm_nf_[j * m + i] = std::move(c);
      conjugate_syl_[j * m + i] = syllables_of(conj);
    }
  }
}

std::uint64_t Collector::relative_order_product() const {
  std::uint64_t total = 1;
  for (auto o : pres_.relative_orders) {
    auto u = static_cast<std::uint64_t>(o);
    if (total > (std::uint64_t{1} << 63) / u)
      throw std::overflow_error("group order exceeds 2^63");
    total *= u;
  }
  return total;
}

int Collector::order_exponent() const {
  int k = 0;
  for (auto o : pres_.relative_orders)
    k += *p_power_exponent(o, pres_.prime);
  return k;
}

ExponentVector Collector::generator(std::size_t i) const {
  ExponentVector v = identity();
  v.exps.at(i) = 1;
  return v;
}

bool Collector::is_normal(const ExponentVector &u) const {
  if (u.size() != rank())
    return false;
  for (std::size_t i = 0; i < rank(); ++i)
    if (u[i] < 0 || u[i] >= pres_.relative_orders[i])
      return false;
  return true;
}

void Collector::require_normal(const ExponentVector &u) const {
  if (!is_normal(u))
    throw std::invalid_argument("exponent vector is not a normal form for this presentation");
}

std::vector<Syllable> Collector::syllables_of(const ExponentVector &u) {
  std::vector<Syllable> out;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] != 0)
      out.push_back({i, u[i]});
  return out;
}

void Collector::push_reversed(std::vector<Syllable> &stack,
                              const std::vector<Syllable> &word) const {
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    stack.push_back(*it);
}

void Collector::collect(std::vector<Exponent> &exps, std::vector<Syllable> &stack) const {
  const std::size_t m = rank();
  std::uint64_t steps = 0;
  std::vector<Exponent> tail;

  while (!stack.empty()) {
    if (++steps > options_.step_budget)
      throw CollectionError("collection exceeded step budget of " +
                            std::to_string(options_.step_budget));
    const Syllable s = stack.back();
    stack.pop_back();
    const std::size_t i = s.gen;
    const Exponent order = pres_.relative_orders[i];

    bool tail_empty = true;
    bool tail_commutes = true;
    for (std::size_t k = i + 1; k < m; ++k) {
      if (exps[k] != 0) {
        tail_empty = false;
        if (!commutes_[k * m + i]) {
          tail_commutes = false;
          break;
        }
      }
    }

    const Exponent sum = exps[i] + s.exp;
    if (tail_empty) {
      if (sum >= order) {
        exps[i] = sum - order;
        push_reversed(stack, power_syl_[i]);
      } else {
        exps[i] = sum;
      }
      continue;
    }
    if (tail_commutes && sum < order) {
      exps[i] = sum;
      continue;
    }

    // Move a single g_i left past the tail: tail * g_i = g_i * tail^{g_i}.
    if (s.exp > 1)
      stack.push_back({i, s.exp - 1});
    tail.assign(exps.begin() + static_cast<std::ptrdiff_t>(i + 1), exps.end());
    std::fill(exps.begin() + static_cast<std::ptrdiff_t>(i + 1), exps.end(), 0);
    for (std::size_t k = m; k-- > i + 1;) {
      const auto &conj = conjugate_syl_[k * m + i];
      for (Exponent r = 0; r < tail[k - i - 1]; ++r)
        push_reversed(stack, conj);
    }
    if (exps[i] + 1 >= order) {
      exps[i] = 0;
      push_reversed(stack, power_syl_[i]);
    } else {
      exps[i] += 1;
    }
  }
}

void Collector::collect_syllable(std::vector<Exponent> &exps, std::size_t gen,
                                 Exponent count) const {
  std::vector<Syllable> stack{{gen, count}};
  collect(exps, stack);
}

ExponentVector Collector::normalize(const Word &word) const {
  ExponentVector result = identity();
  for (const auto &s : word) {
    if (s.gen >= rank())
      throw std::invalid_argument("word references generator index " + std::to_string(s.gen) +
                                  " outside the presentation");
    if (s.exp == 0)
      continue;
    if (s.exp > 0 && s.exp < pres_.relative_orders[s.gen]) {
      collect_syllable(result.exps, s.gen, s.exp);
    } else {
      result = multiply(result, power(generator(s.gen), s.exp));
    }
  }
  return result;
}

ExponentVector Collector::multiply(const ExponentVector &u, const ExponentVector &v) const {
  require_normal(u);
  require_normal(v);
  ExponentVector result = u;
  std::vector<Syllable> stack;
  push_reversed(stack, syllables_of(v));
  collect(result.exps, stack);
  return result;
}

ExponentVector Collector::inverse(const ExponentVector &u) const {
  require_normal(u);
  // Right-multiply by g_i^{o_i - w_i} to clear coordinate i; the chunks
  // appended form the inverse already in normal form.
  ExponentVector w = u;
  ExponentVector x = identity();
  for (std::size_t i = 0; i < rank(); ++i) {
    if (w[i] == 0)
      continue;
    Exponent f = pres_.relative_orders[i] - w[i];
    x[i] = f;
    collect_syllable(w.exps, i, f);
  }
  return x;
}

ExponentVector Collector::power(const ExponentVector &u, std::int64_t k) const {
  require_normal(u);
  if (k < 0) {
    if (k == INT64_MIN)
      throw std::invalid_argument("power exponent out of range");
    return power(inverse(u), -k);
  }
  ExponentVector result = identity();
  ExponentVector base = u;
  while (k > 0) {
    if (k & 1)
      result = multiply(result, base);
    k >>= 1;
    if (k > 0)
      base = multiply(base, base);
  }
  return result;
}

ExponentVector Collector::commutator(const ExponentVector &u, const ExponentVector &v) const {
  return multiply(inverse(multiply(v, u)), multiply(u, v));
}

ExponentVector Collector::left_normed_commutator(std::span<const ExponentVector> xs) const {
  if (xs.size() < 2)
    throw std::invalid_argument("left-normed commutator needs at least two entries");
  ExponentVector acc = commutator(xs[0], xs[1]);
  for (std::size_t i = 2; i < xs.size(); ++i) {
    if (acc.is_identity())
      return acc;
    acc = commutator(acc, xs[i]);
  }
  return acc;
}

ExponentVector Collector::conjugate(const ExponentVector &u, const ExponentVector &by) const {
  return multiply(inverse(by), multiply(u, by));
}

std::uint64_t Collector::element_order(const ExponentVector &u) const {
  std::uint64_t ord = 1;
  ExponentVector x = u;
  while (!x.is_identity()) {
    x = power(x, pres_.prime);
    ord *= static_cast<std::uint64_t>(pres_.prime);
  }
  return ord;
}

std::string Collector::format(const ExponentVector &u) const {
  std::string out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0)
      continue;
    if (!out.empty())
      out += ' ';
    out += i < rank() ? pres_.generators[i] : "#" + std::to_string(i);
    if (u[i] != 1)
      out += '^' + std::to_string(u[i]);
  }
  return out.empty() ? "1" : out;
}

std::string_view to_string(OverlapKind k) {
  return k == OverlapKind::triple_overlap ? "triple-overlap" : "power-overlap";
}

ConsistencyReport check_consistency(const PcPresentation &pres, CollectorOptions options) {
  ConsistencyReport rep;
  auto record = [&](OverlapKind kind, std::vector<std::size_t> gens, ExponentVector l,
                    ExponentVector r, std::string note) {
    rep.failures.push_back({kind, std::move(gens), std::move(l), std::move(r), std::move(note)});
  };

  std::optional<Collector> col;
  try {
    col.emplace(pres, options);
  } catch (const CollectionError &e) {
    record(OverlapKind::power_overlap, {}, {}, {},
           std::string("relation collection failed: ") + e.what());
    rep.consistent = false;
    return rep;
  }

  const std::size_t m = col->rank();
  auto run = [&](OverlapKind kind, std::vector<std::size_t> gens, auto &&left, auto &&right) {
    ++rep.checks_run;
    try {
      ExponentVector l = left();
      ExponentVector r = right();
      if (l != r)
        record(kind, std::move(gens), std::move(l), std::move(r), "");
    } catch (const CollectionError &e) {
      record(kind, std::move(gens), {}, {}, e.what());
    }
  };

  auto g = [&](std::size_t i) { return col->generator(i); };
  auto gpow = [&](std::size_t i, Exponent e) {
    ExponentVector v = col->identity();
    v[i] = e;
    return v;
  };

  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < j; ++i)
        run(
            OverlapKind::triple_overlap, {k, j, i},
            [&] { return col->multiply(col->multiply(g(k), g(j)), g(i)); },
            [&] { return col->multiply(g(k), col->multiply(g(j), g(i))); });

  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const Exponent oj = col->relative_order(j);
      const Exponent oi = col->relative_order(i);
      run(
          OverlapKind::power_overlap, {j, j, i},
          [&] { return col->multiply(col->power_value(j), g(i)); },
          [&] { return col->multiply(gpow(j, oj - 1), col->multiply(g(j), g(i))); });
      run(
          OverlapKind::power_overlap, {j, i, i},
          [&] { return col->multiply(g(j), col->power_value(i)); },
          [&] { return col->multiply(col->multiply(g(j), g(i)), gpow(i, oi - 1)); });
    }
    run(
        OverlapKind::power_overlap, {j, j},
        [&] { return col->multiply(col->power_value(j), g(j)); },
        [&] { return col->multiply(g(j), col->power_value(j)); });
  }

  rep.consistent = rep.failures.empty();
  return rep;
}

std::string format_consistency_report(const PcPresentation &pres,
                                      const ConsistencyReport &rep) {
  std::ostringstream out;
  out << "consistent " << (rep.consistent ? "yes" : "no") << " checks=" << rep.checks_run
      << " failures=" << rep.failures.size() << '\n';
  std::optional<Collector> col;
  if (!rep.consistent) {
    try {
      col.emplace(pres);
    } catch (const std::exception &) {
    }
  }
  for (const auto &f : rep.failures) {
    out << "failure " << to_string(f.kind);
    for (auto gi : f.generators)
      out << ' ' << (gi < pres.rank() ? pres.generators[gi] : "?");
    if (!f.note.empty()) {
      out << " note=\"" << f.note << "\"";
    } else if (col) {
      out << " left=" << col->format(f.left) << " right=" << col->format(f.right);
    }
    out << '\n';
  }
  return out.str();
}

std::uint64_t group_order(const PcPresentation &pres) {
  auto rep = check_consistency(pres);
  if (!rep.consistent)
    throw std::domain_error("group_order: presentation is inconsistent");
  return Collector(pres).relative_order_product();
}

}  // namespace pgrp
