#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "oracle.hpp"

using namespace pgrp;

namespace {

const GroupAnalysis &p3() {
  static const GroupAnalysis an(make_group(fixtures::builtin(Family::example_p3, 2)));
  return an;
}

const GroupAnalysis &p2v() {
  static const GroupAnalysis an(make_group(fixtures::p2_variant()));
  return an;
}

VerificationReport run(const GroupAnalysis &g, std::vector<std::string> ids,
                       std::optional<std::size_t> trials, std::uint64_t seed) {
  return run_identity_suite(g, "test", ids, trials, seed);
}

const IdentityCheck &only(const VerificationReport &r) {
  REQUIRE(r.checks.size() == 1);
  return r.checks.front();
}

}  // namespace

TEST_CASE("catalog contents") {
  const auto &ids = identity_catalog();
  CHECK(ids.size() == 13);
  CHECK(ids.front() == "basic_expansions");
  for (const auto &id : ids)
    CHECK(default_trials(id) >= 1);
  CHECK(default_trials("metabelian_criterion") == 100);
  CHECK(default_trials("hall_witt") == 1000);
  CHECK_THROWS_AS(default_trials("nope"), std::invalid_argument);
}

TEST_CASE("every identity passes on example_p3(2)") {
  auto rep = run(p3(), identity_catalog(), 150, 3);
  for (const auto &c : rep.checks) {
    INFO(c.id);
    CHECK(c.status == CheckStatus::pass);
    CHECK(c.failure_count == 0);
    CHECK(c.trials >= 1);
  }
  CHECK_FALSE(rep.any_failed());
}

TEST_CASE("every applicable identity passes on the p = 2 variant") {
  auto rep = run(p2v(), identity_catalog(), 150, 4);
  for (const auto &c : rep.checks) {
    INFO(c.id);
    CHECK(c.failure_count == 0);
    const bool odd_only = c.id == "K5_structure" || c.id == "pth_power_depth" || c.id == "eq7_symmetry";
    CHECK(c.status == (odd_only ? CheckStatus::skip : CheckStatus::pass));
  }
}

TEST_CASE("published sample runs") {
  CHECK(only(run(p3(), {"hall_witt"}, 1000, 7)).failure_count == 0);
  const auto &v = only(run(p3(), {"vanishing"}, 500, 1));
  CHECK(v.status == CheckStatus::pass);
  CHECK(v.trials == 500);
}

TEST_CASE("K6 on the p = 2 variant is the trivial cyclic subgroup") {
  CHECK(p2v().lcs_term(6).is_trivial());
  const auto &c = p2v().collector();
  std::vector<ExponentVector> w{c.generator(0), c.generator(1), c.generator(0),
                                c.generator(1), c.generator(0), c.generator(1)};
  CHECK(c.left_normed_commutator(w).is_identity());
  CHECK(only(run(p2v(), {"K6_structure"}, 200, 1)).status == CheckStatus::pass);
}

TEST_CASE("reports are deterministic in the seed") {
  auto a = run(p3(), {"multilinearity", "power_expansion"}, 100, 42);
  auto b = run(p3(), {"multilinearity", "power_expansion"}, 100, 42);
  CHECK(format_report_lines(a) == format_report_lines(b));
  CHECK(format_report_text(p3().collector(), a) == format_report_text(p3().collector(), b));
}

TEST_CASE("report order follows the catalog") {
  auto rep = run(p3(), {"hall_witt", "basic_expansions"}, 5, 0);
  REQUIRE(rep.checks.size() == 2);
  CHECK(rep.checks[0].id == "basic_expansions");
  CHECK(rep.checks[1].id == "hall_witt");
}

TEST_CASE("hypotheses that fail give skips, never passes") {
  GroupAnalysis ea(make_group(fixtures::parse(fixtures::c3xc3)));
  auto rep = run(ea, {"power_expansion", "K6_structure", "class_bound"}, 10, 0);
  for (const auto &c : rep.checks) {
    INFO(c.id);
    CHECK(c.status == CheckStatus::skip);
    CHECK(c.trials == 0);
    CHECK_FALSE(c.note.empty());
  }
  GroupAnalysis e8(make_group(fixtures::parse(fixtures::c2_cubed)));
  CHECK(only(run(e8, {"swap_mod_K5"}, 10, 0)).status == CheckStatus::skip);
  CHECK(only(run(e8, {"basic_expansions"}, 10, 0)).status == CheckStatus::pass);
}

TEST_CASE("bad arguments") {
  std::vector<std::string> ids{"basic_expansions", "bogus"};
  CHECK_THROWS_AS(run_identity_suite(p3(), "x", ids, std::nullopt, 0), std::invalid_argument);
  std::vector<std::string> ok{"basic_expansions"};
  CHECK_THROWS_AS(run_identity_suite(p3(), "x", ok, 0, 0), std::invalid_argument);
}

TEST_CASE("main theorem check") {
  auto t = verify_main_theorem(p3());
  CHECK(t.status == CheckStatus::pass);
  CHECK(t.note == "class 5, K6 trivial");
  CHECK(verify_main_theorem(p2v()).status == CheckStatus::pass);

  GroupAnalysis v4(make_group(fixtures::parse(fixtures::c2xc2)));
  auto s = verify_main_theorem(v4);
  CHECK(s.status == CheckStatus::skip);
  CHECK(s.note.find("class 1") != std::string::npos);

  GroupAnalysis c5(make_group(fixtures::parse(fixtures::c5)));
  CHECK_THROWS_AS(verify_main_theorem(c5), std::domain_error);
}

TEST_CASE("a false relation produces a reproducible witness") {
  const auto &c = p3().collector();
  Witness w;
  w.relation = "[x,y,z1,...,zs] = 1";
  w.elements = {c.generator(0), c.generator(1), c.generator(0)};  // [a,b,a] = d1
  auto ev = evaluate_witness(p3(), w);
  CHECK_FALSE(ev.holds);
  CHECK(ev.lhs == c.generator(3));
  CHECK(ev.rhs.is_identity());

  Witness unknown;
  unknown.relation = "x = y";
  CHECK_THROWS_AS(evaluate_witness(p3(), unknown), std::invalid_argument);
}

TEST_CASE("failures on a broken presentation carry re-checkable witnesses") {
  // Deliberately bypass the consistency gate: the printed p = 2 relations
  // give a non-associative multiplication.
  auto broken = std::make_shared<const Collector>(fixtures::builtin(Family::example_p2, 3));
  REQUIRE(oracle::associativity_failures(*broken, 500, 1) > 0);
  GroupAnalysis an(broken);
  auto rep = run(an, {"basic_expansions"}, 500, 1);
  const auto &chk = only(rep);
  CHECK(chk.status == CheckStatus::fail);
  CHECK(chk.failure_count > 0);
  REQUIRE_FALSE(chk.failures.empty());
  CHECK(chk.failures.size() <= 5);
  for (const auto &w : chk.failures) {
    auto ev = evaluate_witness(an, w);
    CHECK_FALSE(ev.holds);
    CHECK(ev.lhs == w.lhs);
    CHECK(ev.rhs == w.rhs);
    CHECK(w.lhs != w.rhs);
  }
  auto text = format_report_text(*broken, rep);
  CHECK(text.find("witness {") != std::string::npos);
}

TEST_CASE("every formula is registered once") {
  auto fs = relation_formulas();
  std::set<std::string> uniq(fs.begin(), fs.end());
  CHECK(uniq.size() == fs.size());
  CHECK(uniq.count("[x,a,b^x][b,x,a^b][a,b,x^a] = 1") == 1);
}

TEST_CASE("line format") {
  IdentityCheck c;
  c.id = "hall_witt";
  c.status = CheckStatus::pass;
  c.trials = 12;
  CHECK(format_check_line(c) == "check hall_witt pass trials=12 failures=0");
}

TEST_CASE("uniform sampling covers every coordinate range") {
  const auto &c = p3().collector();
  std::mt19937_64 rng(1);
  std::vector<std::set<Exponent>> seen(c.rank());
  for (int k = 0; k < 2000; ++k) {
    auto u = uniform_element(c, rng);
    REQUIRE(c.is_normal(u));
    for (std::size_t i = 0; i < c.rank(); ++i)
      seen[i].insert(u[i]);
  }
  for (std::size_t i = 0; i < c.rank(); ++i)
    CHECK(seen[i].size() == static_cast<std::size_t>(c.relative_order(i)));
}
