#include "pgrp/series.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <sstream>
#include <unordered_set>

namespace pgrp {

namespace {

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  // a coprime to m, m >= 1
  __int128 old_r = a % m, r = m, old_s = 1, s = 0;
  if (old_r < 0)
    old_r += m;
  while (r != 0) {
    __int128 q = old_r / r;
    __int128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  __int128 inv = old_s % m;
  if (inv < 0)
    inv += m;
  return static_cast<std::int64_t>(inv);
}

// Incrementally builds an induced pc-sequence for the subgroup generated by
// everything passed to add().
class SequenceBuilder {
 public:
  explicit SequenceBuilder(const Collector &col) : col_(col), table_(col.rank()) {}

  void seed(const std::vector<ExponentVector> &induced) {
    for (const auto &s : induced)
      table_[s.leading_index()] = s;
  }

  void add(const ExponentVector &u) {
    if (!u.is_identity())
      queue_.push_back(u);
  }

  std::vector<ExponentVector> finish() {
    for (;;) {
      while (!queue_.empty()) {
        auto u = std::move(queue_.front());
        queue_.pop_front();
        insert(std::move(u));
      }
      if (!sweep())
        break;
    }
    reduce();
    std::vector<ExponentVector> out;
    for (auto &e : table_)
      if (e)
        out.push_back(std::move(*e));
    return out;
  }

 private:
  ExponentVector normalize_lead(const ExponentVector &u) const {
    const std::size_t i = u.leading_index();
    const std::int64_t p = col_.prime();
    std::int64_t v = u[i];
    std::int64_t pv = 1;
    while (v % p == 0) {
      v /= p;
      pv *= p;
    }
    if (v == 1)
      return u;
    const std::int64_t modulus = col_.relative_order(i) / pv;
    return col_.power(u, mod_inverse(v, modulus));
  }

  void schedule(std::size_t i) {
    const ExponentVector &s = *table_[i];
    const Exponent rel = col_.relative_order(i) / s[i];
    add(col_.power(s, rel));
    for (std::size_t j = 0; j < table_.size(); ++j)
      if (j != i && table_[j])
        add(col_.commutator(s, *table_[j]));
  }

  void insert(ExponentVector u) {
    while (!u.is_identity()) {
      const std::size_t i = u.leading_index();
      if (!table_[i]) {
        table_[i] = normalize_lead(u);
        schedule(i);
        return;
      }
      const ExponentVector &s = *table_[i];
      const Exponent lead = s[i];
      if (u[i] % lead == 0) {
        u = col_.multiply(u, col_.power(s, -(u[i] / lead)));
        continue;
      }
      // u has smaller p-adic valuation at i: it takes over the slot and the
      // old entry is sifted further down.
      ExponentVector old = std::move(*table_[i]);
      table_[i] = normalize_lead(u);
      schedule(i);
      u = std::move(old);
    }
  }

  ExponentVector sift(ExponentVector u) const {
    while (!u.is_identity()) {
      const std::size_t i = u.leading_index();
      if (!table_[i])
        return u;
      const ExponentVector &s = *table_[i];
      if (u[i] % s[i] != 0)
        return u;
      u = col_.multiply(u, col_.power(s, -(u[i] / s[i])));
    }
    return u;
  }

  // Re-checks power and commutator closure of the current table; queues
  // anything that fails to sift. Returns true if something was queued.
  bool sweep() {
    bool queued = false;
    for (std::size_t i = 0; i < table_.size(); ++i) {
      if (!table_[i])
        continue;
      const ExponentVector &s = *table_[i];
      auto pw = col_.power(s, col_.relative_order(i) / s[i]);
      if (!sift(pw).is_identity()) {
        add(pw);
        queued = true;
      }
      for (std::size_t j = i + 1; j < table_.size(); ++j) {
        if (!table_[j])
          continue;
        auto c = col_.commutator(*table_[j], s);
        if (!sift(c).is_identity()) {
          add(c);
          queued = true;
        }
      }
    }
    return queued;
  }

  void reduce() {
    for (std::size_t i = table_.size(); i-- > 0;) {
      if (!table_[i])
        continue;
      ExponentVector s = *table_[i];
      for (std::size_t j = i + 1; j < table_.size(); ++j) {
        if (!table_[j])
          continue;
        const ExponentVector &t = *table_[j];
        const Exponent k = s[j] / t[j];
        if (k > 0)
          s = col_.multiply(s, col_.power(t, -k));
      }
      table_[i] = std::move(s);
    }
  }

  const Collector &col_;
  std::vector<std::optional<ExponentVector>> table_;
  std::deque<ExponentVector> queue_;
};

void require_same(const GroupPtr &a, const GroupPtr &b) {
  if (a != b)
    throw std::invalid_argument("subgroups belong to different ambient groups");
}

}  // namespace

GroupPtr make_group(PcPresentation pres, CollectorOptions options) {
  auto report = check_consistency(pres, options);
  if (!report.consistent)
    throw InconsistentPresentation("presentation is inconsistent:\n" +
                                       format_consistency_report(pres, report),
                                   std::move(report));
  return std::make_shared<const Collector>(std::move(pres), options);
}

std::vector<ExponentVector> pc_generators(const Collector &col) {
  std::vector<ExponentVector> out;
  for (std::size_t i = 0; i < col.rank(); ++i)
    out.push_back(col.generator(i));
  return out;
}

Subgroup::Subgroup(GroupPtr ambient, std::vector<ExponentVector> given,
                   std::vector<ExponentVector> induced)
    : ambient_(std::move(ambient)), given_(std::move(given)), induced_(std::move(induced)) {}

std::vector<std::size_t> Subgroup::leading_indices() const {
  std::vector<std::size_t> out;
  for (const auto &s : induced_)
    out.push_back(s.leading_index());
  return out;
}

std::vector<Exponent> Subgroup::relative_orders() const {
  std::vector<Exponent> out;
  for (const auto &s : induced_) {
    auto i = s.leading_index();
    out.push_back(ambient_->relative_order(i) / s[i]);
  }
  return out;
}

std::uint64_t Subgroup::order() const {
  std::uint64_t total = 1;
  for (auto r : relative_orders())
    total *= static_cast<std::uint64_t>(r);
  return total;
}

int Subgroup::order_exponent() const {
  int k = 0;
  for (auto r : relative_orders())
    k += *p_power_exponent(r, ambient_->prime());
  return k;
}

ExponentVector Subgroup::sift(const ExponentVector &u) const {
  const Collector &col = *ambient_;
  ExponentVector w = u;
  std::size_t next = 0;
  while (!w.is_identity()) {
    const std::size_t i = w.leading_index();
    while (next < induced_.size() && induced_[next].leading_index() < i)
      ++next;
    if (next == induced_.size() || induced_[next].leading_index() != i)
      return w;
    const ExponentVector &s = induced_[next];
    if (w[i] % s[i] != 0)
      return w;
    w = col.multiply(w, col.power(s, -(w[i] / s[i])));
  }
  return w;
}

ExponentVector Subgroup::element_at(std::span<const Exponent> coords) const {
  if (coords.size() != induced_.size())
    throw std::invalid_argument("coordinate count does not match induced sequence length");
  const Collector &col = *ambient_;
  ExponentVector out = col.identity();
  for (std::size_t k = 0; k < induced_.size(); ++k)
    if (coords[k] != 0)
      out = col.multiply(out, col.power(induced_[k], coords[k]));
  return out;
}

ExponentVector Subgroup::random_element(std::mt19937_64 &rng) const {
  auto rel = relative_orders();
  std::vector<Exponent> coords(rel.size());
  for (std::size_t k = 0; k < rel.size(); ++k) {
    // rejection sampling keeps this identical across standard libraries
    const auto bound = static_cast<std::uint64_t>(rel[k]);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = rng();
    } while (x >= limit);
    coords[k] = static_cast<Exponent>(x % bound);
  }
  return element_at(coords);
}

std::vector<ExponentVector> Subgroup::elements(std::uint64_t limit) const {
  if (order() > limit)
    throw std::length_error("subgroup too large to enumerate");
  auto rel = relative_orders();
  const Collector &col = *ambient_;
  std::vector<ExponentVector> out{col.identity()};
  // Build right to left so each element is s_1^{c_1} ... s_t^{c_t}.
  for (std::size_t k = induced_.size(); k-- > 0;) {
    std::vector<ExponentVector> next;
    next.reserve(out.size() * static_cast<std::size_t>(rel[k]));
    ExponentVector pw = col.identity();
    for (Exponent c = 0; c < rel[k]; ++c) {
      for (const auto &rest : out)
        next.push_back(col.multiply(pw, rest));
      pw = col.multiply(pw, induced_[k]);
    }
    out = std::move(next);
  }
  return out;
}

bool Subgroup::operator==(const Subgroup &other) const {
  return ambient_ == other.ambient_ && induced_ == other.induced_;
}

Subgroup close_subgroup(const GroupPtr &ambient, std::span<const ExponentVector> gens) {
  SequenceBuilder b(*ambient);
  for (const auto &g : gens) {
    if (!ambient->is_normal(g))
      throw std::invalid_argument("generator is not a normal form of the ambient group");
    b.add(g);
  }
  return Subgroup(ambient, {gens.begin(), gens.end()}, b.finish());
}

Subgroup trivial_subgroup(const GroupPtr &ambient) { return Subgroup(ambient, {}, {}); }

Subgroup whole_group(const GroupPtr &ambient) {
  auto gens = pc_generators(*ambient);
  return close_subgroup(ambient, gens);
}

Subgroup join(const Subgroup &h, std::span<const ExponentVector> extra) {
  const Collector &col = *h.ambient();
  SequenceBuilder b(col);
  b.seed(h.induced_sequence());
  for (const auto &g : extra)
    b.add(g);
  auto given = h.given_generators();
  given.insert(given.end(), extra.begin(), extra.end());
  return Subgroup(h.ambient(), std::move(given), b.finish());
}

bool contains(const Subgroup &h, const ExponentVector &u) {
  if (!h.ambient()->is_normal(u))
    throw std::invalid_argument("element does not belong to the subgroup's ambient group");
  return h.sift(u).is_identity();
}

bool is_subgroup_of(const Subgroup &h, const Subgroup &k) {
  require_same(h.ambient(), k.ambient());
  return std::all_of(h.induced_sequence().begin(), h.induced_sequence().end(),
                     [&](const ExponentVector &s) { return contains(k, s); });
}

Subgroup normal_closure(const GroupPtr &ambient, std::span<const ExponentVector> gens) {
  auto conj = pc_generators(*ambient);
  return normal_closure(ambient, gens, conj);
}

Subgroup normal_closure(const GroupPtr &ambient, std::span<const ExponentVector> gens,
                        std::span<const ExponentVector> conjugators) {
  const Collector &col = *ambient;
  Subgroup current = close_subgroup(ambient, gens);
  for (;;) {
    std::vector<ExponentVector> missing;
    for (const auto &s : current.induced_sequence())
      for (const auto &c : conjugators) {
        auto x = col.conjugate(s, c);
        if (!current.sift(x).is_identity())
          missing.push_back(std::move(x));
      }
    if (missing.empty())
      break;
    current = join(current, missing);
  }
  return Subgroup(ambient, {gens.begin(), gens.end()}, current.induced_sequence());
}

Subgroup CentralSeries::term(std::size_t n) const {
  if (n == 0)
    throw std::out_of_range("lower central series terms are numbered from 1");
  if (n <= terms.size())
    return terms[n - 1];
  return trivial_subgroup(terms.front().ambient());
}

CentralSeries lower_central_series(const GroupPtr &ambient,
                                   std::span<const ExponentVector> gens) {
  const Collector &col = *ambient;
  std::vector<ExponentVector> base;
  {
    std::unordered_set<ExponentVector, ExponentVectorHash> seen;
    for (const auto &g : gens) {
      if (!col.is_normal(g))
        throw std::invalid_argument("generator is not a normal form of the ambient group");
      if (!g.is_identity() && seen.insert(g).second)
        base.push_back(g);
    }
  }

  // layers[w-1]: distinct nontrivial values of weight-w left-normed
  // commutators in `base`. Once a layer is empty every later one is too.
  std::vector<std::vector<ExponentVector>> layers;
  if (!base.empty())
    layers.push_back(base);
  while (!layers.empty() && !layers.back().empty()) {
    std::vector<ExponentVector> next;
    std::unordered_set<ExponentVector, ExponentVectorHash> seen;
    for (const auto &x : layers.back())
      for (const auto &g : base) {
        auto c = col.commutator(x, g);
        if (!c.is_identity() && seen.insert(c).second)
          next.push_back(std::move(c));
      }
    if (next.empty())
      break;
    layers.push_back(std::move(next));
  }

  CentralSeries series;
  Subgroup current = trivial_subgroup(ambient);
  std::vector<Subgroup> reversed{current};
  for (std::size_t w = layers.size(); w-- > 0;) {
    current = join(current, layers[w]);
    reversed.push_back(current);
  }
  series.terms.assign(reversed.rbegin(), reversed.rend());
  // Given generators of K_1 are the caller's.
  series.terms.front() = Subgroup(ambient, {gens.begin(), gens.end()},
                                  series.terms.front().induced_sequence());
  return series;
}

std::size_t nilpotency_class(const GroupPtr &ambient, std::span<const ExponentVector> gens) {
  return lower_central_series(ambient, gens).nilpotency_class();
}

Subgroup derived_subgroup(const GroupPtr &ambient, std::span<const ExponentVector> gens) {
  const Collector &col = *ambient;
  std::vector<ExponentVector> comms;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      comms.push_back(col.commutator(gens[i], gens[j]));
  return normal_closure(ambient, comms, gens);
}

bool is_abelian(const GroupPtr &ambient, std::span<const ExponentVector> gens) {
  const Collector &col = *ambient;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!col.commutator(gens[i], gens[j]).is_identity())
        return false;
  return true;
}

bool is_metabelian(const GroupPtr &ambient, std::span<const ExponentVector> gens) {
  auto derived = derived_subgroup(ambient, gens);
  return is_abelian(ambient, derived.induced_sequence());
}

std::string format_series(const CentralSeries &series) {
  std::ostringstream out;
  const Collector &col = *series.terms.front().ambient();
  for (std::size_t i = 0; i < series.terms.size(); ++i) {
    const auto &t = series.terms[i];
    out << 'K' << (i + 1) << " order " << t.order() << " gens ";
    if (t.is_trivial()) {
      out << '1';
    } else {
      for (std::size_t k = 0; k < t.induced_sequence().size(); ++k)
        out << (k ? ", " : "") << col.format(t.induced_sequence()[k]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace pgrp
