#include "pgrp/verifier.hpp"

#include <future>
#include <sstream>

namespace pgrp {

namespace {

std::string power_string(std::int64_t p, std::int64_t e) {
  return std::to_string(p) + "^" + std::to_string(e);
}

Claim compare(std::string name, std::string expected, std::string observed) {
  Claim c{std::move(name), std::move(expected), std::move(observed), ClaimStatus::pass};
  if (c.observed != c.expected)
    c.status = ClaimStatus::fail;
  return c;
}

std::string tag(const InstanceReport &r) {
  return std::string(family_name(r.family)) + " n=" + std::to_string(r.n);
}

// Published expectations shared by both families.
struct Expected {
  std::int64_t prime;
  std::int64_t order_exponent;
  std::size_t maximals;
};

Expected expected_for(Family f, int n) {
  if (f == Family::example_p2)
    return {2, n + 12, 3};
  return {3, n + 7, 4};
}

}  // namespace

std::string_view to_string(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::pass:
      return "pass";
    case ClaimStatus::fail:
      return "fail";
    case ClaimStatus::unreproducible:
      return "unreproducible";
  }
  return "?";
}

bool InstanceReport::any_failed() const {
  for (const auto &c : claims)
    if (c.status == ClaimStatus::fail)
      return true;
  if (identities && identities->any_failed())
    return true;
  return theorem && theorem->status == CheckStatus::fail;
}

bool ClaimsReport::any_failed() const {
  for (const auto &i : instances)
    if (i.any_failed())
      return true;
  return false;
}

InstanceReport verify_instance(Family f, int n, std::uint64_t seed,
                               std::optional<std::size_t> trials) {
  auto inst = instantiate_parameter(f, n);
  InstanceReport r;
  r.family = f;
  r.n = n;
  r.warnings = inst.warnings;
  r.consistency = check_consistency(inst.presentation);
  r.consistency_text = format_consistency_report(inst.presentation, r.consistency);

  const auto ex = expected_for(f, n);
  const std::string max_count = std::to_string(ex.maximals);
  if (!r.consistency.consistent) {
    for (std::string name : {"order", "class", "P3", "maximals", "maximal-class"})
      r.claims.push_back({name, "", "", ClaimStatus::unreproducible});
    r.claims[0].expected = power_string(ex.prime, ex.order_exponent);
    r.claims[1].expected = "5";
    r.claims[2].expected = "member";
    r.claims[3].expected = max_count;
    r.claims[4].expected = "<=3";
    return r;
  }

  auto g = make_group(inst.presentation);
  r.group = g;
  GroupAnalysis an(g);
  r.series = an.series();
  r.p3 = an.verify_Pn(3);

  r.claims.push_back(compare("order", power_string(ex.prime, ex.order_exponent),
                             power_string(ex.prime, g->order_exponent())));
  r.claims.push_back(compare("class", "5", std::to_string(an.nilpotency_class())));
  r.claims.push_back(compare("P3", "member", r.p3->member ? "member" : "nonmember"));
  r.claims.push_back(compare("maximals", max_count, std::to_string(r.p3->maximal_count)));
  std::size_t worst = 0;
  for (const auto &m : r.p3->per_maximal)
    worst = std::max(worst, m.nilpotency_class);
  auto mc = compare("maximal-class", "<=3", "max " + std::to_string(worst));
  mc.status = worst <= 3 ? ClaimStatus::pass : ClaimStatus::fail;
  r.claims.push_back(mc);

  const auto &ids = identity_catalog();
  r.identities = run_identity_suite(an, tag(r), ids, trials, seed);
  r.theorem = verify_main_theorem(an);
  return r;
}

ClaimsReport verify_builtin_claims(int n2, int n3, std::uint64_t seed,
                                   std::optional<std::size_t> trials) {
  // fail fast on bad parameters, before either pipeline starts
  for (auto [f, n] : {std::pair{Family::example_p2, n2}, std::pair{Family::example_p3, n3}})
    if (n < family_minimum_parameter(f))
      throw std::invalid_argument(std::string(family_name(f)) + " needs n >= " +
                                  std::to_string(family_minimum_parameter(f)));
  auto f2 = std::async(std::launch::async, verify_instance, Family::example_p2, n2, seed, trials);
  auto r3 = verify_instance(Family::example_p3, n3, seed, trials);
  ClaimsReport rep;
  rep.seed = seed;
  rep.instances.push_back(f2.get());
  rep.instances.push_back(std::move(r3));
  return rep;
}

std::string format_claims_text(const ClaimsReport &rep) {
  std::ostringstream out;
  out << "built-in claims report (seed " << rep.seed << ")\n";
  for (const auto &r : rep.instances) {
    out << "\n== " << tag(r) << " ==\n";
    for (const auto &w : r.warnings)
      out << to_string(w) << '\n';
    out << r.consistency_text;
    if (!r.consistency.consistent)
      out << "claims not reproducible from the printed presentation: it is not consistent\n";
    for (const auto &c : r.claims) {
      out << "  " << c.name << ": expected " << c.expected;
      if (!c.observed.empty())
        out << ", observed " << c.observed;
      out << " -> " << to_string(c.status) << '\n';
    }
    if (r.series)
      out << "lower central series:\n" << format_series(*r.series);
    if (r.p3)
      out << format_verdict_lines(*r.p3);
    if (r.identities)
      out << format_report_text(*r.group, *r.identities);
    if (r.theorem)
      out << "class bound 5: " << to_string(r.theorem->status) << " (" << r.theorem->note << ")\n";
  }
  out << "\noverall: " << (rep.any_failed() ? "FAIL" : "OK") << '\n';
  return out.str();
}

std::string format_claims_lines(const ClaimsReport &rep) {
  std::ostringstream out;
  for (const auto &r : rep.instances) {
    const auto t = tag(r);
    for (const auto &w : r.warnings)
      out << "warning " << t << ' ' << w.message << '\n';
    std::istringstream cons(r.consistency_text);
    for (std::string line; std::getline(cons, line);)
      out << "consistency " << t << ' ' << line << '\n';
    for (const auto &c : r.claims)
      out << "claim " << t << ' ' << c.name << ' ' << to_string(c.status) << " expected="
          << c.expected << " observed=" << (c.observed.empty() ? "-" : c.observed) << '\n';
    if (r.series) {
      out << "lcs " << t;
      for (const auto &term : r.series->terms)
        out << ' ' << term.order();
      out << '\n';
    }
    if (r.p3) {
      std::istringstream v(format_verdict_lines(*r.p3));
      for (std::string line; std::getline(v, line);)
        out << t << ' ' << line << '\n';
    }
    if (r.identities)
      for (const auto &c : r.identities->checks)
        out << t << ' ' << format_check_line(c) << '\n';
    if (r.theorem)
      out << t << ' ' << format_check_line(*r.theorem) << '\n';
  }
  out << "overall " << (rep.any_failed() ? "fail" : "ok") << '\n';
  return out.str();
}

}  // namespace pgrp
