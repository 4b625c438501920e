#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pgrp/collector.hpp"

namespace pgrp {

using GroupPtr = std::shared_ptr<const Collector>;

class InconsistentPresentation : public std::domain_error {
 public:
  InconsistentPresentation(const std::string &what, ConsistencyReport report)
      : std::domain_error(what), report_(std::move(report)) {}
  const ConsistencyReport &report() const { return report_; }

 private:
  ConsistencyReport report_;
};

/// Builds a collector after checking consistency; everything in this header
/// assumes the ambient group came from here (or was checked some other way).
GroupPtr make_group(PcPresentation pres, CollectorOptions options = {});

/// A subgroup stored by its canonical induced pc-sequence.
///
/// Entries are in echelon form: leading indices strictly increase, each
/// leading exponent is a power of p dividing the relative order, and every
/// entry's exponent at a later entry's leading index is reduced below that
/// entry's leading exponent. Equal subgroups have equal sequences.
class Subgroup {
 public:
  Subgroup(GroupPtr ambient, std::vector<ExponentVector> given,
           std::vector<ExponentVector> induced);

  const GroupPtr &ambient() const { return ambient_; }
  const std::vector<ExponentVector> &given_generators() const { return given_; }
  const std::vector<ExponentVector> &induced_sequence() const { return induced_; }

  std::vector<std::size_t> leading_indices() const;
  /// Order of each induced entry modulo the entries after it.
  std::vector<Exponent> relative_orders() const;
  std::uint64_t order() const;
  int order_exponent() const;
  bool is_trivial() const { return induced_.empty(); }

  /// What remains of u after dividing out induced entries; identity iff u
  /// is a member.
  ExponentVector sift(const ExponentVector &u) const;

  /// prod s_i^{c_i} for 0 <= c_i < relative_orders()[i].
  ExponentVector element_at(std::span<const Exponent> coords) const;
  ExponentVector random_element(std::mt19937_64 &rng) const;
  /// Every element; throws std::length_error above `limit` elements.
  std::vector<ExponentVector> elements(std::uint64_t limit = 1u << 20) const;

  /// Same ambient and same induced sequence.
  bool operator==(const Subgroup &other) const;

 private:
  GroupPtr ambient_;
  std::vector<ExponentVector> given_;
  std::vector<ExponentVector> induced_;
};

Subgroup close_subgroup(const GroupPtr &ambient, std::span<const ExponentVector> gens);
Subgroup trivial_subgroup(const GroupPtr &ambient);
Subgroup whole_group(const GroupPtr &ambient);
/// <H, extra>, reusing H's induced sequence as the starting point.
Subgroup join(const Subgroup &h, std::span<const ExponentVector> extra);

/// Throws std::invalid_argument when u's ambient differs from h's.
bool contains(const Subgroup &h, const ExponentVector &u);
bool is_subgroup_of(const Subgroup &h, const Subgroup &k);

/// Smallest subgroup containing gens and normalised by `conjugators`
/// (all pc generators of the ambient group when omitted).
Subgroup normal_closure(const GroupPtr &ambient, std::span<const ExponentVector> gens);
Subgroup normal_closure(const GroupPtr &ambient, std::span<const ExponentVector> gens,
                        std::span<const ExponentVector> conjugators);

/// Lower central series K_1 > K_2 > ... > 1 of <gens>.
struct CentralSeries {
  std::vector<Subgroup> terms;

  std::size_t nilpotency_class() const { return terms.empty() ? 0 : terms.size() - 1; }
  /// K_n for n >= 1; the trivial subgroup beyond the end of the series.
  Subgroup term(std::size_t n) const;
};

/// K_n is generated by the left-normed commutators of weight >= n in the
/// generators, so the series comes from one enumeration of commutator
/// layers, deduplicated by normal form, read off from the top down.
CentralSeries lower_central_series(const GroupPtr &ambient, std::span<const ExponentVector> gens);
std::size_t nilpotency_class(const GroupPtr &ambient, std::span<const ExponentVector> gens);

Subgroup derived_subgroup(const GroupPtr &ambient, std::span<const ExponentVector> gens);
bool is_metabelian(const GroupPtr &ambient, std::span<const ExponentVector> gens);
bool is_abelian(const GroupPtr &ambient, std::span<const ExponentVector> gens);

/// Rows "K<i> order <o> gens <words>", last row "K<c+1> order 1 gens 1".
std::string format_series(const CentralSeries &series);

std::vector<ExponentVector> pc_generators(const Collector &col);

}  // namespace pgrp
