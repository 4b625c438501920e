#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgrp/presentation.hpp"

namespace pgrp {

/// Normal form g_1^{e_1} ... g_m^{e_m} of a group element,
/// 0 <= e_i < relative_orders[i].
struct ExponentVector {
  std::vector<Exponent> exps;

  ExponentVector() = default;
  explicit ExponentVector(std::size_t rank) : exps(rank, 0) {}
  explicit ExponentVector(std::vector<Exponent> e) : exps(std::move(e)) {}

  std::size_t size() const { return exps.size(); }
  Exponent operator[](std::size_t i) const { return exps[i]; }
  Exponent &operator[](std::size_t i) { return exps[i]; }

  bool is_identity() const;
  /// Index of the first nonzero exponent; size() for the identity.
  std::size_t leading_index() const;

  auto operator<=>(const ExponentVector &) const = default;
  bool operator==(const ExponentVector &) const = default;
};

struct ExponentVectorHash {
  std::size_t operator()(const ExponentVector &v) const noexcept;
};

/// Raised when a single collection exceeds its step budget, which only
/// happens for malformed presentations.
class CollectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CollectorOptions {
  std::uint64_t step_budget = 10'000'000;
};

/// Normal-form arithmetic by collection from the left.
///
/// The commutator convention is [x,y] = x^-1 y^-1 x y. Relation right-hand
/// sides are collected once at construction, from the last generator up,
/// so each relation is stored as a normal form with exponents in range.
/// Instances are immutable after construction.
class Collector {
 public:
  /// Throws std::invalid_argument if the presentation fails
  /// validate_structure(), CollectionError if a relation cannot be collected.
  explicit Collector(PcPresentation pres, CollectorOptions options = {});

  const PcPresentation &presentation() const { return pres_; }
  std::size_t rank() const { return pres_.rank(); }
  std::int64_t prime() const { return pres_.prime; }
  Exponent relative_order(std::size_t i) const { return pres_.relative_orders[i]; }
  const CollectorOptions &options() const { return options_; }

  /// Product of the relative orders; throws std::overflow_error past 2^63.
  std::uint64_t relative_order_product() const;
  /// log_p of relative_order_product().
  int order_exponent() const;

  ExponentVector identity() const { return ExponentVector(rank()); }
  ExponentVector generator(std::size_t i) const;
  /// Normal form of the relation value g_i^{o_i}.
  const ExponentVector &power_value(std::size_t i) const { return power_nf_[i]; }
  /// Normal form of [g_hi, g_lo], hi > lo.
  const ExponentVector &commutator_value(std::size_t hi, std::size_t lo) const {
    return comm_nf_[hi * rank() + lo];
  }

  bool is_normal(const ExponentVector &u) const;

  ExponentVector normalize(const Word &word) const;
  ExponentVector multiply(const ExponentVector &u, const ExponentVector &v) const;
  ExponentVector inverse(const ExponentVector &u) const;
  ExponentVector power(const ExponentVector &u, std::int64_t k) const;
  /// u^-1 v^-1 u v
  ExponentVector commutator(const ExponentVector &u, const ExponentVector &v) const;
  /// [[...[x1,x2],x3]...,xk]; needs at least two entries.
  ExponentVector left_normed_commutator(std::span<const ExponentVector> xs) const;
  /// by^-1 u by
  ExponentVector conjugate(const ExponentVector &u, const ExponentVector &by) const;
  /// Order of u as a group element.
  std::uint64_t element_order(const ExponentVector &u) const;

  /// Human-readable word, e.g. "a^2 c d1" or "1".
  std::string format(const ExponentVector &u) const;

 private:
  void collect(std::vector<Exponent> &exps, std::vector<Syllable> &stack) const;
  void collect_syllable(std::vector<Exponent> &exps, std::size_t gen, Exponent count) const;
  void push_reversed(std::vector<Syllable> &stack, const std::vector<Syllable> &word) const;
  static std::vector<Syllable> syllables_of(const ExponentVector &u);
  void require_normal(const ExponentVector &u) const;

  PcPresentation pres_;
  CollectorOptions options_;
  std::vector<ExponentVector> power_nf_;
  std::vector<std::vector<Syllable>> power_syl_;
  std::vector<ExponentVector> comm_nf_;                // rank x rank, [hi*rank+lo]
  std::vector<std::vector<Syllable>> conjugate_syl_;   // g_hi^{g_lo} = g_hi [g_hi,g_lo]
  std::vector<char> commutes_;                         // [hi*rank+lo]
};

enum class OverlapKind { triple_overlap, power_overlap };

std::string_view to_string(OverlapKind k);

struct OverlapFailure {
  OverlapKind kind = OverlapKind::triple_overlap;
  std::vector<std::size_t> generators;  // the test word's generator indices
  ExponentVector left;
  ExponentVector right;
  std::string note;  // set when collection failed instead of disagreeing
};

struct ConsistencyReport {
  bool consistent = true;
  std::size_t checks_run = 0;
  std::vector<OverlapFailure> failures;
};

/// Runs the standard overlap tests: (g_k g_j) g_i = g_k (g_j g_i) for
/// k > j > i; g_j^{o_j} g_i, g_j g_i^{o_i} (j > i) and g_i^{o_i} g_i
/// collected both ways. Collection failures are recorded, not thrown.
ConsistencyReport check_consistency(const PcPresentation &pres, CollectorOptions options = {});

std::string format_consistency_report(const PcPresentation &pres, const ConsistencyReport &rep);

/// Throws std::domain_error when the presentation is inconsistent.
std::uint64_t group_order(const PcPresentation &pres);

}  // namespace pgrp
