#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pgrp/subgroups.hpp"

namespace pgrp {

enum class CheckStatus { pass, fail, skip };

std::string_view to_string(CheckStatus s);

/// Inputs and both sides of one failed relation. Re-running the relation on
/// the stored inputs reproduces the failure (see evaluate_witness).
struct Witness {
  std::string relation;
  std::vector<ExponentVector> elements;
  std::vector<std::int64_t> integers;
  ExponentVector lhs;
  ExponentVector rhs;
};

struct IdentityCheck {
  std::string id;
  std::string hypotheses;
  CheckStatus status = CheckStatus::skip;
  std::size_t trials_requested = 0;
  std::size_t trials = 0;  // trials actually run with hypotheses met
  std::size_t failure_count = 0;
  std::vector<Witness> failures;  // first few only
  std::string note;
};

struct VerificationReport {
  std::string group_id;
  std::uint64_t seed = 0;
  std::vector<IdentityCheck> checks;

  std::size_t count(CheckStatus s) const;
  bool any_failed() const { return count(CheckStatus::fail) > 0; }
};

/// Catalog ids in report order.
const std::vector<std::string> &identity_catalog();
std::size_t default_trials(std::string_view id);

/// Samples hypothesis-satisfying tuples and evaluates each catalog identity
/// in normal form. `trials` overrides the per-identity defaults. Results
/// depend only on (group, ids, trials, seed). Throws std::invalid_argument
/// for an unknown id.
VerificationReport run_identity_suite(const GroupAnalysis &g, std::string group_id,
                                      std::span<const std::string> ids,
                                      std::optional<std::size_t> trials, std::uint64_t seed);

/// Class at most 5 and K_6 = 1 whenever G is in P_3; skipped otherwise.
/// Throws std::domain_error unless p is 2 or 3.
IdentityCheck verify_main_theorem(const GroupAnalysis &g);

struct Evaluation {
  bool holds = true;
  ExponentVector lhs;
  ExponentVector rhs;
};

/// Re-evaluates the relation named in the witness on its stored inputs.
Evaluation evaluate_witness(const GroupAnalysis &g, const Witness &w);

/// Every relation formula the suites can evaluate.
std::vector<std::string> relation_formulas();

ExponentVector uniform_element(const Collector &col, std::mt19937_64 &rng);

std::string format_report_text(const Collector &col, const VerificationReport &rep);
/// One "check <id> <pass|fail|skip> trials=<t> failures=<k>" line per check.
std::string format_report_lines(const VerificationReport &rep);
std::string format_check_line(const IdentityCheck &c);
std::string format_witness(const Collector &col, const Witness &w);

}  // namespace pgrp
