#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pgrp {

using Exponent = std::int64_t;

/// One factor g^e of a word; `gen` is a 0-based generator index.
struct Syllable {
  std::size_t gen = 0;
  Exponent exp = 1;

  bool operator==(const Syllable &) const = default;
};

using Word = std::vector<Syllable>;

/// Key (hi, lo) with hi > lo, naming the relation for [g_hi, g_lo].
using CommutatorKey = std::pair<std::size_t, std::size_t>;

/// A power-commutator presentation of a finite p-group.
///
/// Generator order fixes the polycyclic series. `power_relations[i]` is the
/// value of g_i^{relative_orders[i]} and an empty word stands for the
/// identity. `commutator_relations` holds [g_j, g_i] for j > i; a missing
/// key means the pair commutes. Empty relation words are never stored, so
/// two presentations of the same relations compare equal.
struct PcPresentation {
  std::int64_t prime = 2;
  std::vector<std::string> generators;
  std::vector<Exponent> relative_orders;
  std::vector<Word> power_relations;
  std::map<CommutatorKey, Word> commutator_relations;

  std::size_t rank() const { return generators.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Appends a generator with trivial power relation.
  std::size_t add_generator(std::string name, Exponent relative_order);
  void set_power(std::size_t gen, Word rhs);
  void set_commutator(std::size_t hi, std::size_t lo, Word rhs);

  const Word &power(std::size_t gen) const { return power_relations.at(gen); }
  /// Empty word when the relation is absent.
  const Word &commutator(std::size_t hi, std::size_t lo) const;

  bool operator==(const PcPresentation &) const = default;
};

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  std::string location;
  std::string message;

  bool operator==(const Diagnostic &) const = default;
};

std::string to_string(const Diagnostic &d);
bool has_errors(const std::vector<Diagnostic> &diags);

struct ParseResult {
  std::optional<PcPresentation> presentation;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return presentation.has_value(); }
};

ParseResult parse_presentation(std::string_view text);
std::string serialize_presentation(const PcPresentation &pres);

/// Checks every structural invariant. Consistency of the relations is not
/// examined here; see check_consistency().
std::vector<Diagnostic> validate_structure(const PcPresentation &pres);

std::string format_word(const PcPresentation &pres, const Word &w);

bool is_prime(std::int64_t n);
/// k with p^k == n, or nullopt when n is not a positive power of p.
std::optional<int> p_power_exponent(std::int64_t n, std::int64_t p);

// Built-in parametric families: two-generator groups of class 5 whose
// proper subgroups all have class at most 3.
enum class Family { example_p2, example_p3 };

std::optional<Family> family_from_name(std::string_view name);
std::string_view family_name(Family f);
int family_minimum_parameter(Family f);

struct Instantiation {
  PcPresentation presentation;
  std::vector<Diagnostic> warnings;
};

/// The relation list as originally published for `f` with parameter n, in
/// presentation-file syntax. For example_p2 this names a generator e3 that
/// is not declared, so it does not parse.
std::string published_text(Family f, int n);

/// Throws std::invalid_argument when n is below the family minimum.
Instantiation instantiate_parameter(Family f, int n);

}  // namespace pgrp
