#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "oracle.hpp"

using namespace pgrp;

namespace {

const GroupPtr &p3() {
  static const GroupPtr g = make_group(fixtures::builtin(Family::example_p3, 2));
  return g;
}

const GroupPtr &p2v() {
  static const GroupPtr g = make_group(fixtures::p2_variant());
  return g;
}

ExponentVector gen(const GroupPtr &g, std::string_view name) {
  return g->generator(*g->presentation().index_of(name));
}

std::vector<ExponentVector> gens(const GroupPtr &g, std::initializer_list<std::string_view> names) {
  std::vector<ExponentVector> out;
  for (auto n : names)
    out.push_back(gen(g, n));
  return out;
}

std::vector<std::uint64_t> orders(const CentralSeries &s) {
  std::vector<std::uint64_t> out;
  for (const auto &t : s.terms)
    out.push_back(t.order());
  return out;
}

oracle::ElementSet as_set(const std::vector<ExponentVector> &v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("closure of simple generating sets") {
  const auto &g = p3();
  CHECK(close_subgroup(g, {}).order() == 1);
  CHECK(close_subgroup(g, {}).is_trivial());
  CHECK(close_subgroup(g, pc_generators(*g)).order() == 19683);
  auto derived = close_subgroup(g, gens(g, {"c", "d1", "d2", "e1", "e2", "f"}));
  CHECK(derived.order() == 729);
  CHECK(derived == derived_subgroup(g, gens(g, {"a", "b"})));
  CHECK(close_subgroup(g, gens(g, {"a", "b"})) == whole_group(g));
}

TEST_CASE("induced sequences satisfy the echelon invariants") {
  const auto &g = p3();
  std::mt19937_64 rng(3);
  for (int k = 0; k < 30; ++k) {
    std::vector<ExponentVector> gs;
    for (int j = 0; j < 1 + k % 3; ++j)
      gs.push_back(oracle::random_element(*g, rng));
    auto h = close_subgroup(g, gs);
    auto lead = h.leading_indices();
    CHECK(std::is_sorted(lead.begin(), lead.end()));
    CHECK(std::adjacent_find(lead.begin(), lead.end()) == lead.end());
    for (const auto &x : gs)
      CHECK(h.sift(x).is_identity());
    std::uint64_t prod = 1;
    for (auto r : h.relative_orders())
      prod *= static_cast<std::uint64_t>(r);
    CHECK(prod == h.order());
  }
}

TEST_CASE("closure order matches BFS cardinality") {
  for (const auto *grp : {&p3(), &p2v()}) {
    const auto &g = *grp;
    std::mt19937_64 rng(9);
    int tested = 0;
    while (tested < 15) {
      std::vector<ExponentVector> gs;
      for (int j = 0; j < 2; ++j)
        gs.push_back(oracle::random_element(*g, rng));
      auto h = close_subgroup(g, gs);
      if (h.order() > 4096)
        continue;  // keep BFS cheap
      auto bfs = oracle::closure(*g, gs);
      CHECK(bfs.size() == h.order());
      CHECK(as_set(h.elements()) == bfs);
      for (const auto &u : bfs)
        REQUIRE(contains(h, u));
      ++tested;
    }
  }
}

TEST_CASE("membership agrees with BFS on random elements") {
  const auto &g = p3();
  auto h = close_subgroup(g, gens(g, {"b", "d1"}));
  auto bfs = oracle::closure(*g, gens(g, {"b", "d1"}));
  std::mt19937_64 rng(4);
  for (int k = 0; k < 500; ++k) {
    auto u = oracle::random_element(*g, rng);
    CHECK(contains(h, u) == (bfs.count(u) > 0));
  }
  CHECK(contains(h, g->identity()));
  CHECK_FALSE(contains(trivial_subgroup(g), gen(g, "a")));
}

TEST_CASE("canonicity: different generating sets, identical sequences") {
  for (const auto *grp : {&p3(), &p2v()}) {
    const auto &g = *grp;
    std::mt19937_64 rng(21);
    for (int k = 0; k < 25; ++k) {
      std::vector<ExponentVector> gs{oracle::random_element(*g, rng), oracle::random_element(*g, rng)};
      auto h = close_subgroup(g, gs);
      // same subgroup from different generators: products, inverses, extra members
      std::vector<ExponentVector> other{g->multiply(gs[0], gs[1]), g->inverse(gs[1]),
                                        h.random_element(rng), g->commutator(gs[0], gs[1])};
      auto h2 = close_subgroup(g, other);
      CHECK(h2 == h);
      CHECK(h2.induced_sequence() == h.induced_sequence());
      // joining with members changes nothing
      std::vector<ExponentVector> extra{h.random_element(rng)};
      CHECK(join(h, extra).induced_sequence() == h.induced_sequence());
    }
  }
}

TEST_CASE("normal closure") {
  const auto &g = p3();
  auto c = gens(g, {"c"});
  CHECK(normal_closure(g, c).order() == 729);
  CHECK(normal_closure(g, c) == derived_subgroup(g, pc_generators(*g)));
  std::vector<ExponentVector> one{g->identity()};
  CHECK(normal_closure(g, one).is_trivial());
  auto f = gens(g, {"f"});
  CHECK(normal_closure(g, f).order() == 3);
  // normal closure is closed under conjugation by everything
  std::mt19937_64 rng(1);
  auto n = normal_closure(g, gens(g, {"d1"}));
  for (int k = 0; k < 200; ++k)
    CHECK(contains(n, g->conjugate(n.random_element(rng), oracle::random_element(*g, rng))));
}

TEST_CASE("lower central series of example_p3(2)") {
  const auto &g = p3();
  auto s = lower_central_series(g, gens(g, {"a", "b"}));
  CHECK(orders(s) == std::vector<std::uint64_t>{19683, 729, 243, 27, 3, 1});
  CHECK(s.nilpotency_class() == 5);
  CHECK(contains(s.term(5), gen(g, "f")));
  CHECK(s.term(7).is_trivial());
  CHECK(s.term(1) == whole_group(g));
}

TEST_CASE("lower central series of the p = 2 variant") {
  const auto &g = p2v();
  auto s = lower_central_series(g, gens(g, {"a", "b"}));
  REQUIRE(s.terms.size() == 6);
  CHECK(s.nilpotency_class() == 5);
  auto last = s.terms[4];
  CHECK(last.order() == 2);
  auto e1 = gen(g, "e1");
  CHECK(last == close_subgroup(g, std::vector<ExponentVector>{g->power(e1, 2)}));
}

TEST_CASE("series agrees with brute-force [K_i, G]") {
  std::vector<GroupPtr> groups{p3(), make_group(fixtures::parse(fixtures::d16)),
                               make_group(fixtures::parse(fixtures::maxclass81)),
                               make_group(fixtures::parse(fixtures::q8))};
  for (const auto &g : groups) {
    auto gs = pc_generators(*g);
    auto s = lower_central_series(g, gs);
    auto brute = oracle::lower_central(*g, gs);
    REQUIRE(s.terms.size() == brute.size());
    for (std::size_t i = 0; i < brute.size(); ++i)
      CHECK(as_set(s.terms[i].elements()) == brute[i]);
  }
}

TEST_CASE("series contract: [K_i, G] <= K_{i+1}") {
  for (const auto *grp : {&p3(), &p2v()}) {
    const auto &g = *grp;
    auto s = lower_central_series(g, pc_generators(*g));
    for (std::size_t i = 0; i + 1 < s.terms.size(); ++i) {
      CHECK(is_subgroup_of(s.terms[i + 1], s.terms[i]));
      for (const auto &h : s.terms[i].induced_sequence())
        for (const auto &x : pc_generators(*g))
          CHECK(contains(s.terms[i + 1], g->commutator(h, x)));
    }
  }
}

TEST_CASE("small classes") {
  auto ab = make_group(fixtures::parse(fixtures::c3xc3));
  auto s = lower_central_series(ab, pc_generators(*ab));
  CHECK(orders(s) == std::vector<std::uint64_t>{9, 1});
  CHECK(nilpotency_class(ab, pc_generators(*ab)) == 1);
  CHECK(is_abelian(ab, pc_generators(*ab)));
  CHECK(is_metabelian(ab, pc_generators(*ab)));

  auto triv = make_group(fixtures::parse("pgroup p=2\ngens\n"));
  CHECK(nilpotency_class(triv, {}) == 0);
  CHECK(format_series(lower_central_series(triv, {})) == "K1 order 1 gens 1\n");

  auto d16 = make_group(fixtures::parse(fixtures::d16));
  CHECK(nilpotency_class(d16, pc_generators(*d16)) == 3);
}

TEST_CASE("metabelian verdicts") {
  CHECK(is_metabelian(p3(), pc_generators(*p3())));
  CHECK_FALSE(is_abelian(p3(), pc_generators(*p3())));
  CHECK_FALSE(is_metabelian(p2v(), pc_generators(*p2v())));
  // every 2-generated subgroup of class <= 4 is metabelian
  const auto &g = p2v();
  std::mt19937_64 rng(8);
  int seen = 0;
  for (int k = 0; k < 300 && seen < 20; ++k) {
    std::vector<ExponentVector> xy{oracle::random_element(*g, rng), oracle::random_element(*g, rng)};
    if (nilpotency_class(g, xy) >= 5)
      continue;
    ++seen;
    CHECK(is_metabelian(g, xy));
  }
  CHECK(seen > 0);
}

TEST_CASE("elements() enumerates the subgroup exactly once") {
  const auto &g = p3();
  auto h = close_subgroup(g, gens(g, {"a"}));
  auto els = h.elements();
  CHECK(els.size() == 9);
  CHECK(as_set(els).size() == 9);
  CHECK_THROWS(whole_group(g).elements(100));
}

TEST_CASE("inconsistent presentations are refused") {
  auto pres = fixtures::builtin(Family::example_p2, 3);
  try {
    make_group(pres);
    FAIL("expected InconsistentPresentation");
  } catch (const InconsistentPresentation &e) {
    CHECK_FALSE(e.report().consistent);
  }
}

TEST_CASE("format_series rows") {
  auto text = format_series(lower_central_series(p3(), pc_generators(*p3())));
  CHECK(text.rfind("K1 order 19683 gens a, b, c, d1, d2, e1, e2, f\n", 0) == 0);
  CHECK(text.find("K5 order 3 gens f\n") != std::string::npos);
  CHECK(text.find("K6 order 1 gens 1\n") != std::string::npos);
}
