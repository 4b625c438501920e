#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pgrp/identities.hpp"

namespace pgrp {

// Outcome of one published claim about a built-in group.
enum class ClaimStatus { pass, fail, unreproducible };

std::string_view to_string(ClaimStatus s);

struct Claim {
  std::string name;      // e.g. "class", "order"
  std::string expected;
  std::string observed;  // empty when unreproducible
  ClaimStatus status = ClaimStatus::unreproducible;
};

/// Everything computed for one built-in instance.
struct InstanceReport {
  Family family = Family::example_p3;
  int n = 0;
  std::vector<Diagnostic> warnings;
  ConsistencyReport consistency;
  std::string consistency_text;
  std::vector<Claim> claims;
  // populated only for consistent instances
  GroupPtr group;
  std::optional<CentralSeries> series;
  std::optional<PnVerdict> p3;
  std::optional<VerificationReport> identities;
  std::optional<IdentityCheck> theorem;

  bool any_failed() const;
};

struct ClaimsReport {
  std::uint64_t seed = 0;
  std::vector<InstanceReport> instances;  // example_p2 first, then example_p3

  bool any_failed() const;
};

/// Instantiates example_p2(n2) and example_p3(n3) and checks order, class,
/// P3 membership with per-maximal classes, the identity suite and the class-5
/// bound. An inconsistent instance has its claims marked unreproducible and
/// the failing overlaps attached; that does not count as a failure.
/// Throws std::invalid_argument when a parameter is below its family minimum.
ClaimsReport verify_builtin_claims(int n2, int n3, std::uint64_t seed,
                                   std::optional<std::size_t> trials = std::nullopt);

InstanceReport verify_instance(Family f, int n, std::uint64_t seed,
                               std::optional<std::size_t> trials = std::nullopt);

std::string format_claims_text(const ClaimsReport &rep);
std::string format_claims_lines(const ClaimsReport &rep);

}  // namespace pgrp
