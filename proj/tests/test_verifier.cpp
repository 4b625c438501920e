#include <doctest.h>

#include "fixtures.hpp"

using namespace pgrp;

namespace {

const ClaimsReport &report() {
  static const ClaimsReport r = verify_builtin_claims(3, 2, 0, 100);
  return r;
}

const Claim &claim(const InstanceReport &r, std::string_view name) {
  for (const auto &c : r.claims)
    if (c.name == name)
      return c;
  throw std::runtime_error("no claim " + std::string(name));
}

}  // namespace

TEST_CASE("example_p3 claims reproduce") {
  const auto &g3 = report().instances.at(1);
  CHECK(g3.family == Family::example_p3);
  CHECK(g3.consistency.consistent);
  for (const auto &c : g3.claims) {
    INFO(c.name);
    CHECK(c.status == ClaimStatus::pass);
  }
  CHECK(claim(g3, "order").observed == "3^9");
  CHECK(claim(g3, "class").observed == "5");
  REQUIRE(g3.p3);
  CHECK(g3.p3->maximal_count == 4);
  REQUIRE(g3.theorem);
  CHECK(g3.theorem->status == CheckStatus::pass);
  REQUIRE(g3.identities);
  CHECK_FALSE(g3.identities->any_failed());
}

TEST_CASE("example_p2 claims are downgraded, not failed") {
  const auto &g2 = report().instances.at(0);
  CHECK(g2.family == Family::example_p2);
  CHECK(g2.warnings.size() == 2);
  CHECK_FALSE(g2.consistency.consistent);
  CHECK(g2.consistency_text.find("failure triple-overlap") != std::string::npos);
  for (const auto &c : g2.claims)
    CHECK(c.status == ClaimStatus::unreproducible);
  CHECK(claim(g2, "order").expected == "2^15");
  CHECK_FALSE(g2.series.has_value());
  CHECK_FALSE(g2.any_failed());
  CHECK_FALSE(report().any_failed());
}

TEST_CASE("next parameter values give the same verdicts") {
  auto g3 = verify_instance(Family::example_p3, 3, 0, 20);
  CHECK(claim(g3, "order").observed == "3^10");
  CHECK_FALSE(g3.any_failed());
  auto g2 = verify_instance(Family::example_p2, 4, 0, 20);
  CHECK_FALSE(g2.consistency.consistent);
}

TEST_CASE("verdicts do not depend on the seed") {
  auto a = verify_builtin_claims(3, 2, 1, 30);
  auto b = verify_builtin_claims(3, 2, 99, 30);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto &x = a.instances[i], &y = b.instances[i];
    REQUIRE(x.claims.size() == y.claims.size());
    for (std::size_t k = 0; k < x.claims.size(); ++k) {
      CHECK(x.claims[k].status == y.claims[k].status);
      CHECK(x.claims[k].observed == y.claims[k].observed);
    }
    CHECK(x.any_failed() == y.any_failed());
  }
}

TEST_CASE("parameters below the family minimum are errors") {
  CHECK_THROWS_AS(verify_builtin_claims(2, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(verify_builtin_claims(3, 1, 0), std::invalid_argument);
}

TEST_CASE("line output") {
  auto lines = format_claims_lines(report());
  CHECK(lines.find("claim example_p2 n=3 class unreproducible expected=5 observed=-\n") !=
        std::string::npos);
  CHECK(lines.find("claim example_p3 n=2 class pass expected=5 observed=5\n") != std::string::npos);
  CHECK(lines.find("lcs example_p3 n=2 19683 729 243 27 3 1\n") != std::string::npos);
  CHECK(lines.find("example_p3 n=2 check main_theorem pass trials=1 failures=0\n") !=
        std::string::npos);
  CHECK(lines.substr(lines.size() - 11) == "overall ok\n");
}
