#include <doctest.h>

#include <random>

#include "fixtures.hpp"

using namespace pgrp;

namespace {

bool mentions(const std::vector<Diagnostic> &ds, std::string_view needle) {
  for (const auto &d : ds)
    if (d.severity == Severity::error && d.message.find(needle) != std::string::npos)
      return true;
  return false;
}

std::vector<Diagnostic> errors_of(const std::string &text) {
  auto r = parse_presentation(text);
  CHECK_FALSE(r.ok());
  return r.diagnostics;
}

// Structurally valid presentation with random relations (not necessarily
// consistent): every RHS lives strictly after the relevant index.
PcPresentation random_presentation(std::mt19937_64 &rng) {
  static const std::int64_t primes[] = {2, 3, 5, 7};
  PcPresentation p;
  p.prime = primes[rng() % 4];
  const std::size_t m = rng() % 7;
  for (std::size_t i = 0; i < m; ++i) {
    Exponent o = p.prime;
    for (auto e = rng() % 3; e > 0; --e)
      o *= p.prime;
    p.add_generator("g" + std::to_string(i + 1), o);
  }
  auto word_after = [&](std::size_t i) {
    Word w;
    for (std::size_t k = i + 1; k < m; ++k)
      if (rng() % 2)
        w.push_back({k, static_cast<Exponent>(rng() % 9) - 4});
    std::erase_if(w, [](const Syllable &s) { return s.exp == 0; });
    return w;
  };
  for (std::size_t i = 0; i < m; ++i) {
    if (rng() % 2)
      p.set_power(i, word_after(i));
    for (std::size_t j = i + 1; j < m; ++j)
      if (rng() % 2)
        p.set_commutator(j, i, word_after(i));
  }
  return p;
}

}  // namespace

TEST_CASE("cyclic group of order 5 parses with no relations") {
  auto r = parse_presentation(fixtures::c5);
  REQUIRE(r.ok());
  const auto &p = *r.presentation;
  CHECK(p.prime == 5);
  CHECK(p.rank() == 1);
  CHECK(p.relative_orders == std::vector<Exponent>{5});
  CHECK(p.power(0).empty());
  CHECK(p.commutator_relations.empty());
  CHECK(r.diagnostics.empty());
}

TEST_CASE("example_p3(2) has the published shape") {
  auto inst = instantiate_parameter(Family::example_p3, 2);
  CHECK(inst.warnings.empty());
  const auto &p = inst.presentation;
  CHECK(p.prime == 3);
  CHECK(p.generators == std::vector<std::string>{"a", "b", "c", "d1", "d2", "e1", "e2", "f"});
  CHECK(p.relative_orders == std::vector<Exponent>{9, 3, 3, 3, 3, 3, 3, 3});
  CHECK(validate_structure(p).empty());
  // [b,a] = c^-1, i.e. [a,b] = c
  CHECK(p.commutator(1, 0) == Word{{2, -1}});
  CHECK(p.commutator(4, 1).empty());  // [d2,b] = 1
}

TEST_CASE("example_p2 as printed names an undeclared generator") {
  auto text = published_text(Family::example_p2, 3);
  auto r = parse_presentation(text);
  CHECK_FALSE(r.ok());
  CHECK(mentions(r.diagnostics, "undeclared generator e3"));
  for (const auto &d : r.diagnostics)
    CHECK(d.location.rfind("line ", 0) == 0);
}

TEST_CASE("example_p2 instantiation drops the e3 relations with warnings") {
  auto inst = instantiate_parameter(Family::example_p2, 3);
  REQUIRE(inst.warnings.size() == 2);
  for (const auto &w : inst.warnings) {
    CHECK(w.severity == Severity::warning);
    CHECK(w.message.find("e3") != std::string::npos);
  }
  const auto &p = inst.presentation;
  CHECK(p.rank() == 7);
  CHECK(p.relative_orders == std::vector<Exponent>{8, 8, 4, 4, 4, 4, 2});
  Exponent product = 1;
  for (auto o : p.relative_orders)
    product *= o;
  CHECK(product == (1 << 15));
  CHECK(validate_structure(p).empty());
}

TEST_CASE("family parameters below the minimum are rejected") {
  CHECK_THROWS_AS(instantiate_parameter(Family::example_p2, 2), std::invalid_argument);
  CHECK_THROWS_AS(instantiate_parameter(Family::example_p3, 1), std::invalid_argument);
  CHECK_NOTHROW(instantiate_parameter(Family::example_p3, 2));
}

TEST_CASE("generator counts are fixed across the families") {
  for (int n = 3; n <= 8; ++n)
    CHECK(instantiate_parameter(Family::example_p2, n).presentation.rank() == 7);
  for (int n = 2; n <= 8; ++n) {
    auto p = instantiate_parameter(Family::example_p3, n).presentation;
    CHECK(p.rank() == 8);
    Exponent expected = 1;
    for (int k = 0; k < n; ++k)
      expected *= 3;
    CHECK(p.relative_orders[0] == expected);
  }
}

TEST_CASE("family names round-trip") {
  for (auto f : {Family::example_p2, Family::example_p3})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK_FALSE(family_from_name("example_p5").has_value());
}

TEST_CASE("structural errors carry locations") {
  SUBCASE("undeclared generator") {
    auto ds = errors_of("pgroup p=2\ngens a b\norder a 2\norder b 2\ncomm b a = z\n");
    CHECK(mentions(ds, "undeclared generator z"));
  }
  SUBCASE("RHS ordering") {
    auto ds = errors_of("pgroup p=2\ngens a b\norder a 2\norder b 2\ncomm b a = a\n");
    CHECK(mentions(ds, "RHS index not greater than i"));
    ds = errors_of("pgroup p=2\ngens a b\norder a 2\norder b 2\npow b = a\n");
    CHECK(mentions(ds, "RHS index not greater than i"));
  }
  SUBCASE("non p-power order") {
    auto ds = errors_of("pgroup p=3\ngens a\norder a 6\n");
    CHECK(mentions(ds, "relative order not a p-power"));
    ds = errors_of("pgroup p=3\ngens a\norder a 1\n");
    CHECK(mentions(ds, "relative order not a p-power"));
  }
  SUBCASE("duplicate generator") {
    auto ds = errors_of("pgroup p=2\ngens a a\norder a 2\n");
    CHECK(mentions(ds, "duplicate generator name a"));
  }
  SUBCASE("bad header") {
    errors_of("gens a\norder a 2\n");
    errors_of("pgroup p=4\ngens a\norder a 4\n");
  }
  SUBCASE("commutator with hi not after lo") {
    errors_of("pgroup p=2\ngens a b\norder a 2\norder b 2\ncomm a b = 1\n");
  }
  SUBCASE("missing order line") {
    errors_of("pgroup p=2\ngens a b\norder a 2\n");
  }
  SUBCASE("malformed word") {
    errors_of("pgroup p=2\ngens a b\norder a 2\norder b 2\npow a = b^x\n");
  }
}

TEST_CASE("validate_structure on hand-built presentations") {
  PcPresentation p;
  p.prime = 3;
  p.add_generator("g1", 3);
  p.add_generator("g2", 3);
  CHECK(validate_structure(p).empty());

  auto bad = p;
  bad.commutator_relations[{1, 0}] = Word{{0, 1}};
  CHECK(mentions(validate_structure(bad), "RHS index not greater than i"));

  bad = p;
  bad.relative_orders[1] = 6;
  CHECK(mentions(validate_structure(bad), "relative order not a p-power"));
  // pure: same input, same diagnostics
  CHECK(validate_structure(bad) == validate_structure(bad));
}

TEST_CASE("comments, blank lines and exponent forms") {
  auto r = parse_presentation(
      "# leading comment\n\npgroup p=2   # trailing\ngens a b c\norder a 4\norder b 2\norder c 2\n"
      "pow a = c^1 # same as c\ncomm b a = c^-1\n");
  REQUIRE(r.ok());
  CHECK(r.presentation->power(0) == Word{{2, 1}});
  CHECK(r.presentation->commutator(1, 0) == Word{{2, -1}});
}

TEST_CASE("explicit identity relations are omitted") {
  auto r = parse_presentation("pgroup p=3\ngens a b\norder a 3\norder b 3\npow a = 1\ncomm b a = 1\n");
  REQUIRE(r.ok());
  CHECK(r.presentation->power(0).empty());
  CHECK(r.presentation->commutator_relations.empty());
  CHECK(serialize_presentation(*r.presentation).find("comm") == std::string::npos);
}

TEST_CASE("serialize then parse is the identity") {
  for (auto text : {fixtures::c5, fixtures::c3xc3, fixtures::d8, fixtures::q8, fixtures::maxclass81}) {
    auto p = fixtures::parse(text);
    auto again = parse_presentation(serialize_presentation(p));
    REQUIRE(again.ok());
    CHECK(*again.presentation == p);
  }
  auto p3 = fixtures::builtin(Family::example_p3, 2);
  CHECK(*parse_presentation(serialize_presentation(p3)).presentation == p3);
}

TEST_CASE("round-trip property on random structurally valid presentations") {
  std::mt19937_64 rng(20241018);
  for (int k = 0; k < 300; ++k) {
    auto p = random_presentation(rng);
    REQUIRE(validate_structure(p).empty());
    auto text = serialize_presentation(p);
    auto r = parse_presentation(text);
    REQUIRE_MESSAGE(r.ok(), text);
    CHECK(*r.presentation == p);
    CHECK(serialize_presentation(*r.presentation) == text);
  }
}

TEST_CASE("prime helpers") {
  CHECK(is_prime(2));
  CHECK(is_prime(97));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
  CHECK(p_power_exponent(27, 3) == 3);
  CHECK_FALSE(p_power_exponent(1, 3).has_value());  // positive powers only
  CHECK_FALSE(p_power_exponent(12, 2).has_value());
}
