#include "pgrp/subgroups.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>
#include <sstream>

namespace pgrp {

namespace {

struct FrattiniData {
  Subgroup frattini;
  std::vector<ExponentVector> basis;
};

FrattiniData frattini_data(const GroupPtr &g) {
  const Collector &col = *g;
  auto gens = pc_generators(col);
  std::vector<ExponentVector> seeds;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    seeds.push_back(col.power(gens[i], col.prime()));
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      seeds.push_back(col.commutator(gens[j], gens[i]));
  }
  Subgroup phi = normal_closure(g, seeds);

  // Greedy basis of G/Phi among the pc generators.
  std::vector<ExponentVector> basis;
  Subgroup span = phi;
  for (const auto &x : gens) {
    if (contains(span, x))
      continue;
    basis.push_back(x);
    span = join(span, std::span<const ExponentVector>(&x, 1));
  }
  return {std::move(phi), std::move(basis)};
}

// Projective representatives of nonzero functionals on F_p^d, first
// nonzero coordinate equal to 1, in lexicographic order.
std::vector<std::vector<Exponent>> projective_points(int d, std::int64_t p) {
  std::vector<std::vector<Exponent>> out;
  for (int lead = 0; lead < d; ++lead) {
    const int free = d - lead - 1;
    std::int64_t count = 1;
    for (int k = 0; k < free; ++k)
      count *= p;
    for (std::int64_t code = 0; code < count; ++code) {
      std::vector<Exponent> v(static_cast<std::size_t>(d), 0);
      v[static_cast<std::size_t>(lead)] = 1;
      std::int64_t c = code;
      for (int k = d - 1; k > lead; --k) {
        v[static_cast<std::size_t>(k)] = c % p;
        c /= p;
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<Subgroup> maximal_from(const GroupPtr &g, const FrattiniData &fd) {
  const Collector &col = *g;
  const int d = static_cast<int>(fd.basis.size());
  std::vector<Subgroup> out;
  for (const auto &phi : projective_points(d, col.prime())) {
    std::size_t lead = 0;
    while (phi[lead] == 0)
      ++lead;
    // Kernel spanned by e_j - phi_j e_lead for j != lead.
    std::vector<ExponentVector> lifts;
    for (std::size_t j = 0; j < fd.basis.size(); ++j) {
      if (j == lead)
        continue;
      auto x = fd.basis[j];
      if (phi[j] != 0)
        x = col.multiply(x, col.power(fd.basis[lead], -phi[j]));
      lifts.push_back(std::move(x));
    }
    out.push_back(join(fd.frattini, lifts));
  }
  std::sort(out.begin(), out.end(), [](const Subgroup &a, const Subgroup &b) {
    return a.induced_sequence() < b.induced_sequence();
  });
  return out;
}

std::vector<std::size_t> classes_of(const GroupPtr &g, const std::vector<Subgroup> &subs) {
  std::vector<std::future<std::size_t>> jobs;
  for (const auto &m : subs)
    jobs.push_back(std::async(std::launch::async, [&g, &m] {
      return nilpotency_class(g, m.induced_sequence());
    }));
  std::vector<std::size_t> out;
  for (auto &j : jobs)
    out.push_back(j.get());
  return out;
}

PnVerdict assemble(int n, std::size_t group_class, const std::vector<Subgroup> &maximals,
                   const std::vector<std::size_t> &classes) {
  PnVerdict v;
  v.n = n;
  v.group_class = group_class;
  v.maximal_count = maximals.size();
  bool all_small = true;
  for (std::size_t k = 0; k < maximals.size(); ++k) {
    v.per_maximal.push_back({maximals[k].induced_sequence(), maximals[k].order(), classes[k]});
    if (classes[k] > static_cast<std::size_t>(n))
      all_small = false;
  }
  v.member = group_class > static_cast<std::size_t>(n) && all_small;
  return v;
}

}  // namespace

Subgroup frattini_subgroup(const GroupPtr &g) { return frattini_data(g).frattini; }

int minimal_generator_count(const GroupPtr &g) {
  return static_cast<int>(frattini_data(g).basis.size());
}

std::vector<Subgroup> maximal_subgroups(const GroupPtr &g) {
  return maximal_from(g, frattini_data(g));
}

PnVerdict verify_Pn(const GroupPtr &g, int n) {
  if (n < 1)
    throw std::invalid_argument("verify_Pn needs n >= 1");
  auto gens = pc_generators(*g);
  auto maximals = maximal_subgroups(g);
  return assemble(n, nilpotency_class(g, gens), maximals, classes_of(g, maximals));
}

std::vector<Subgroup> all_subgroups(const GroupPtr &g, std::uint64_t max_order) {
  if (g->relative_order_product() > max_order)
    throw std::length_error("group too large for exhaustive subgroup enumeration");
  auto whole = whole_group(g);

  std::map<std::vector<ExponentVector>, Subgroup> cyclic;
  for (const auto &x : whole.elements()) {
    auto c = close_subgroup(g, std::span<const ExponentVector>(&x, 1));
    cyclic.emplace(c.induced_sequence(), c);
  }

  std::map<std::vector<ExponentVector>, Subgroup> found;
  std::vector<Subgroup> frontier{trivial_subgroup(g)};
  found.emplace(frontier.front().induced_sequence(), frontier.front());
  while (!frontier.empty()) {
    std::vector<Subgroup> next;
    for (const auto &h : frontier) {
      for (const auto &[key, c] : cyclic) {
        const auto &gen = c.given_generators()[0];
        if (contains(h, gen))
          continue;
        auto j = join(h, std::span<const ExponentVector>(&gen, 1));
        if (found.emplace(j.induced_sequence(), j).second)
          next.push_back(j);
      }
    }
    frontier = std::move(next);
  }

  std::vector<Subgroup> out;
  for (auto &[key, s] : found)
    out.push_back(std::move(s));
  return out;
}

PnVerdict verify_Pn_exhaustive(const GroupPtr &g, int n, std::uint64_t max_order) {
  if (n < 1)
    throw std::invalid_argument("verify_Pn needs n >= 1");
  const auto total = g->relative_order_product();
  auto subs = all_subgroups(g, max_order);
  auto gens = pc_generators(*g);
  const std::size_t c = nilpotency_class(g, gens);

  bool all_small = true;
  for (const auto &s : subs) {
    if (s.order() == total)
      continue;
    if (nilpotency_class(g, s.induced_sequence()) > static_cast<std::size_t>(n)) {
      all_small = false;
      break;
    }
  }
  std::vector<Subgroup> maximals;
  for (const auto &s : subs)
    if (s.order() * static_cast<std::uint64_t>(g->prime()) == total)
      maximals.push_back(s);
  auto v = assemble(n, c, maximals, classes_of(g, maximals));
  v.member = c > static_cast<std::size_t>(n) && all_small;
  return v;
}

std::string format_verdict(const Collector &col, const PnVerdict &v) {
  std::ostringstream out;
  out << "P" << v.n << " membership: " << (v.member ? "yes" : "no") << '\n';
  out << "group class " << v.group_class << ", " << v.maximal_count << " maximal subgroups\n";
  for (std::size_t k = 0; k < v.per_maximal.size(); ++k) {
    const auto &m = v.per_maximal[k];
    out << "  M" << (k + 1) << ": order " << m.order << ", class " << m.nilpotency_class
        << ", generated by ";
    for (std::size_t i = 0; i < m.generators.size(); ++i)
      out << (i ? ", " : "") << col.format(m.generators[i]);
    if (m.generators.empty())
      out << '1';
    out << '\n';
  }
  return out.str();
}

std::string format_verdict_lines(const PnVerdict &v) {
  std::ostringstream out;
  for (std::size_t k = 0; k < v.per_maximal.size(); ++k)
    out << "maximal " << (k + 1) << " order " << v.per_maximal[k].order << " class "
        << v.per_maximal[k].nilpotency_class << '\n';
  out << "verdict P" << v.n << ' ' << (v.member ? "member" : "nonmember") << " class "
      << v.group_class << " maximals " << v.maximal_count << '\n';
  return out.str();
}

// GroupAnalysis

const CentralSeries &GroupAnalysis::series() const {
  std::lock_guard lock(mu_);
  if (!series_) {
    auto gens = pc_generators(*group_);
    series_ = lower_central_series(group_, gens);
  }
  return *series_;
}

void GroupAnalysis::ensure_frattini() const {
  std::lock_guard lock(mu_);
  if (frattini_)
    return;
  auto fd = frattini_data(group_);
  const Collector &col = *group_;
  const std::int64_t p = col.prime();
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < fd.basis.size(); ++k) {
    count *= static_cast<std::uint64_t>(p);
    if (count > 65536)
      throw std::length_error("Frattini quotient too large for coordinate tables");
  }
  coset_reps_inv_.clear();
  for (std::uint64_t code = 0; code < count; ++code) {
    ExponentVector r = col.identity();
    std::uint64_t c = code;
    // digit k of code is the coordinate of basis[k]
    std::vector<Exponent> digits(fd.basis.size());
    for (std::size_t k = 0; k < fd.basis.size(); ++k) {
      digits[k] = static_cast<Exponent>(c % static_cast<std::uint64_t>(p));
      c /= static_cast<std::uint64_t>(p);
    }
    for (std::size_t k = 0; k < fd.basis.size(); ++k)
      if (digits[k])
        r = col.multiply(r, col.power(fd.basis[k], digits[k]));
    coset_reps_inv_.push_back(col.inverse(r));
  }
  basis_ = std::move(fd.basis);
  frattini_ = std::move(fd.frattini);
}

const Subgroup &GroupAnalysis::frattini() const {
  ensure_frattini();
  return *frattini_;
}

int GroupAnalysis::generator_count() const {
  ensure_frattini();
  return static_cast<int>(basis_.size());
}

const std::vector<ExponentVector> &GroupAnalysis::frattini_basis() const {
  ensure_frattini();
  return basis_;
}

std::vector<Exponent> GroupAnalysis::frattini_coordinates(const ExponentVector &u) const {
  ensure_frattini();
  const Collector &col = *group_;
  const auto p = static_cast<std::uint64_t>(col.prime());
  for (std::uint64_t code = 0; code < coset_reps_inv_.size(); ++code) {
    if (!contains(*frattini_, col.multiply(u, coset_reps_inv_[code])))
      continue;
    std::vector<Exponent> coords(basis_.size());
    std::uint64_t c = code;
    for (auto &x : coords) {
      x = static_cast<Exponent>(c % p);
      c /= p;
    }
    return coords;
  }
  throw std::logic_error("element outside every Frattini coset");
}

bool GroupAnalysis::generates(std::span<const ExponentVector> elems) const {
  ensure_frattini();
  const std::int64_t p = group_->prime();
  const std::size_t d = basis_.size();
  // Rank over F_p of the coordinate rows.
  std::vector<std::vector<Exponent>> rows;
  for (const auto &e : elems)
    rows.push_back(frattini_coordinates(e));
  std::size_t rank = 0;
  for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] % p == 0)
      ++pivot;
    if (pivot == rows.size())
      continue;
    std::swap(rows[pivot], rows[rank]);
    // scale pivot row to 1
    std::int64_t inv = 1;
    while ((rows[rank][col] * inv) % p != 1)
      ++inv;
    for (auto &x : rows[rank])
      x = (x * inv) % p;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0)
        continue;
      const std::int64_t f = rows[r][col];
      for (std::size_t k = 0; k < d; ++k)
        rows[r][k] = ((rows[r][k] - f * rows[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank == d;
}

void GroupAnalysis::ensure_maximals() const {
  std::lock_guard lock(mu_);
  if (maximals_)
    return;
  ensure_frattini();
  FrattiniData fd{*frattini_, basis_};
  auto maximals = maximal_from(group_, fd);
  maximal_classes_ = classes_of(group_, maximals);
  maximals_ = std::move(maximals);
}

const std::vector<Subgroup> &GroupAnalysis::maximal_subgroups() const {
  ensure_maximals();
  return *maximals_;
}

const std::vector<std::size_t> &GroupAnalysis::maximal_classes() const {
  ensure_maximals();
  return maximal_classes_;
}

PnVerdict GroupAnalysis::verify_Pn(int n) const {
  if (n < 1)
    throw std::invalid_argument("verify_Pn needs n >= 1");
  return assemble(n, nilpotency_class(), maximal_subgroups(), maximal_classes());
}

bool GroupAnalysis::in_P(int n) const { return n >= 1 && verify_Pn(n).member; }

std::optional<int> GroupAnalysis::smallest_P_index() const {
  const auto &classes = maximal_classes();
  std::size_t largest = 0;
  for (auto c : classes)
    largest = std::max(largest, c);
  const int n = std::max<int>(1, static_cast<int>(largest));
  if (nilpotency_class() > static_cast<std::size_t>(n))
    return n;
  return std::nullopt;
}

const Subgroup &GroupAnalysis::derived() const {
  std::lock_guard lock(mu_);
  if (!derived_) {
    auto gens = pc_generators(*group_);
    derived_ = derived_subgroup(group_, gens);
  }
  return *derived_;
}

bool GroupAnalysis::is_metabelian() const {
  return is_abelian(group_, derived().induced_sequence());
}

}  // namespace pgrp
