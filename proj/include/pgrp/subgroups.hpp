#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pgrp/series.hpp"

namespace pgrp {

/// Phi(G) = G' G^p: the normal closure of all pc-generator commutators and
/// p-th powers.
Subgroup frattini_subgroup(const GroupPtr &g);

/// d(G) = log_p |G : Phi(G)|.
int minimal_generator_count(const GroupPtr &g);

/// Index-p subgroups, one per hyperplane of G/Phi(G), sorted by induced
/// sequence. There are (p^d - 1)/(p - 1) of them.
std::vector<Subgroup> maximal_subgroups(const GroupPtr &g);

struct MaximalClass {
  std::vector<ExponentVector> generators;  // induced sequence of the subgroup
  std::uint64_t order = 0;
  std::size_t nilpotency_class = 0;
};

/// Membership in P_n: class > n while every proper subgroup has class <= n.
/// Checking maximal subgroups suffices since class cannot grow when passing
/// to a subgroup.
struct PnVerdict {
  int n = 0;
  std::size_t group_class = 0;
  std::size_t maximal_count = 0;
  std::vector<MaximalClass> per_maximal;
  bool member = false;
};

PnVerdict verify_Pn(const GroupPtr &g, int n);

/// Every subgroup of G, by joining cyclic subgroups until nothing new
/// appears. Only for small groups; throws std::length_error when |G| is
/// above `max_order`.
std::vector<Subgroup> all_subgroups(const GroupPtr &g, std::uint64_t max_order = 729);

/// verify_Pn computed over every proper subgroup rather than the maximal
/// ones. per_maximal lists the maximal subgroups for comparison.
PnVerdict verify_Pn_exhaustive(const GroupPtr &g, int n, std::uint64_t max_order = 729);

std::string format_verdict(const Collector &col, const PnVerdict &v);
/// "maximal <k> order <o> class <c>" rows plus a summary row.
std::string format_verdict_lines(const PnVerdict &v);

/// Cached structural facts about one group, shared by the identity checks.
/// Safe for concurrent use.
class GroupAnalysis {
 public:
  explicit GroupAnalysis(GroupPtr g) : group_(std::move(g)) {}

  const GroupPtr &group() const { return group_; }
  const Collector &collector() const { return *group_; }
  std::uint64_t order() const { return group_->relative_order_product(); }

  const CentralSeries &series() const;
  std::size_t nilpotency_class() const { return series().nilpotency_class(); }
  Subgroup lcs_term(std::size_t n) const { return series().term(n); }

  const Subgroup &frattini() const;
  int generator_count() const;
  /// Pc generators whose images form a basis of G/Phi(G).
  const std::vector<ExponentVector> &frattini_basis() const;
  /// Coordinates of u in G/Phi(G) with respect to frattini_basis().
  std::vector<Exponent> frattini_coordinates(const ExponentVector &u) const;
  /// Whether the elements generate G (Burnside basis theorem: their images
  /// span G/Phi(G)).
  bool generates(std::span<const ExponentVector> elems) const;

  const std::vector<Subgroup> &maximal_subgroups() const;
  const std::vector<std::size_t> &maximal_classes() const;
  PnVerdict verify_Pn(int n) const;
  bool in_P(int n) const;
  /// Smallest n with G in P_n, if any.
  std::optional<int> smallest_P_index() const;

  bool is_metabelian() const;
  const Subgroup &derived() const;

 private:
  void ensure_frattini() const;
  void ensure_maximals() const;

  GroupPtr group_;
  mutable std::recursive_mutex mu_;
  mutable std::optional<CentralSeries> series_;
  mutable std::optional<Subgroup> frattini_;
  mutable std::vector<ExponentVector> basis_;
  mutable std::vector<ExponentVector> coset_reps_inv_;  // indexed by coordinate vector
  mutable std::optional<std::vector<Subgroup>> maximals_;
  mutable std::vector<std::size_t> maximal_classes_;
  mutable std::optional<Subgroup> derived_;
};

}  // namespace pgrp
