#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pgrp/verifier.hpp"

namespace pgrp {

namespace {

enum class Format { text, lines };

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

// Raised for bad input files; carries its own exit code.
struct CliFailure {
  int code;
};

PcPresentation load(const std::string &path, std::ostream &err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot read " << path << '\n';
    throw CliFailure{kUsage};
  }
  std::stringstream buf;
  buf << in.rdbuf();
  auto res = parse_presentation(buf.str());
  for (const auto &d : res.diagnostics)
    err << path << ": " << to_string(d) << '\n';
  if (!res.ok())
    throw CliFailure{kUsage};
  return *res.presentation;
}

GroupPtr load_group(const std::string &path, std::ostream &err) {
  auto pres = load(path, err);
  try {
    return make_group(pres);
  } catch (const InconsistentPresentation &e) {
    err << path << ": presentation is inconsistent\n"
        << format_consistency_report(pres, e.report());
    throw CliFailure{kCheckFailed};
  }
}

std::string power_of(const Collector &c) {
  return std::to_string(c.prime()) + "^" + std::to_string(c.order_exponent());
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Finite p-group engine over power-commutator presentations", "pgrp"};
  app.require_subcommand(1);
  app.fallthrough();

  Format format = Format::text;
  app.add_option("--format", format, "Output style: text or lines")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"text", Format::text}, {"lines", Format::lines}}));

  std::string file;
  auto *check = app.add_subcommand("check", "Structural diagnostics and consistency report");
  check->add_option("file", file)->required();
  auto *order = app.add_subcommand("order", "Group order");
  order->add_option("file", file)->required();
  auto *cls = app.add_subcommand("class", "Nilpotency class and lower central series");
  cls->add_option("file", file)->required();
  auto *maxs = app.add_subcommand("maximals", "Maximal subgroups with orders and classes");
  maxs->add_option("file", file)->required();

  int pn = 0;
  auto *vpn = app.add_subcommand("verify-pn", "Membership in P_n");
  vpn->add_option("file", file)->required();
  vpn->add_option("--n", pn, "n >= 1")->required()->check(CLI::PositiveNumber);

  std::vector<std::string> ids;
  std::optional<std::size_t> trials;
  std::uint64_t seed = 0;
  auto *idn = app.add_subcommand("identities", "Sampled identity suite");
  idn->add_option("file", file)->required();
  idn->add_option("--ids", ids, "Catalog ids (default: all)")->delimiter(',');
  idn->add_option("--trials", trials, "Trials per identity")->check(CLI::PositiveNumber);
  idn->add_option("--seed", seed);

  int n2 = 3, n3 = 2;
  auto *vp = app.add_subcommand("verify-paper", "Reproduce the claims about both built-in examples");
  vp->add_option("--n2", n2, "example_p2 parameter (>= 3)");
  vp->add_option("--n3", n3, "example_p3 parameter (>= 2)");
  vp->add_option("--seed", seed);
  vp->add_option("--trials", trials, "Trials per identity")->check(CLI::PositiveNumber);

  std::string family, out_path;
  int bn = 0;
  auto *bi = app.add_subcommand("builtin", "Write a built-in presentation");
  bi->add_option("family", family, "example_p2 or example_p3")->required();
  bi->add_option("--n", bn)->required();
  bi->add_option("--out", out_path)->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const bool lines = format == Format::lines;
  try {
    if (check->parsed()) {
      auto pres = load(file, err);
      auto rep = check_consistency(pres);
      out << format_consistency_report(pres, rep);
      return rep.consistent ? kOk : kCheckFailed;
    }
    if (order->parsed()) {
      auto g = load_group(file, err);
      if (lines)
        out << "order " << g->relative_order_product() << " exponent " << g->order_exponent() << '\n';
      else
        out << g->relative_order_product() << '\n';
      return kOk;
    }
    if (cls->parsed()) {
      GroupAnalysis an(load_group(file, err));
      if (lines) {
        out << "class " << an.nilpotency_class() << '\n';
        const auto &terms = an.series().terms;
        for (std::size_t i = 0; i < terms.size(); ++i)
          out << "term " << i + 1 << " order " << terms[i].order() << '\n';
      } else {
        out << "class " << an.nilpotency_class() << '\n' << format_series(an.series());
      }
      return kOk;
    }
    if (maxs->parsed()) {
      GroupAnalysis an(load_group(file, err));
      const auto &ms = an.maximal_subgroups();
      const auto &cs = an.maximal_classes();
      if (!lines)
        out << ms.size() << " maximal subgroups of a group of order " << power_of(an.collector())
            << " (d = " << an.generator_count() << ")\n";
      for (std::size_t k = 0; k < ms.size(); ++k) {
        out << "maximal " << k + 1 << " order " << ms[k].order() << " class " << cs[k];
        if (!lines) {
          out << " gens";
          for (const auto &u : ms[k].induced_sequence())
            out << ' ' << an.collector().format(u) << ';';
        }
        out << '\n';
      }
      return kOk;
    }
    if (vpn->parsed()) {
      GroupAnalysis an(load_group(file, err));
      auto v = an.verify_Pn(pn);
      out << (lines ? format_verdict_lines(v) : format_verdict(an.collector(), v));
      return kOk;
    }
    if (idn->parsed()) {
      GroupAnalysis an(load_group(file, err));
      if (ids.empty())
        ids = identity_catalog();
      auto rep = run_identity_suite(an, file, ids, trials, seed);
      out << (lines ? format_report_lines(rep) : format_report_text(an.collector(), rep));
      return rep.any_failed() ? kCheckFailed : kOk;
    }
    if (vp->parsed()) {
      auto rep = verify_builtin_claims(n2, n3, seed, trials);
      out << (lines ? format_claims_lines(rep) : format_claims_text(rep));
      return rep.any_failed() ? kCheckFailed : kOk;
    }
    if (bi->parsed()) {
      auto f = family_from_name(family);
      if (!f) {
        err << "error: unknown family " << family << " (expected example_p2 or example_p3)\n";
        return kUsage;
      }
      auto inst = instantiate_parameter(*f, bn);
      for (const auto &w : inst.warnings)
        err << to_string(w) << '\n';
      std::ofstream o(out_path);
      if (!o) {
        err << "error: cannot write " << out_path << '\n';
        return kUsage;
      }
      o << serialize_presentation(inst.presentation);
      if (!lines)
        out << "wrote " << family << " n=" << bn << " to " << out_path << '\n';
      return kOk;
    }
  } catch (const CliFailure &f) {
    return f.code;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace pgrp
