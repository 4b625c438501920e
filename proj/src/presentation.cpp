#include "pgrp/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pgrp {

std::optional<std::size_t> PcPresentation::index_of(std::string_view name) const {
  auto it = std::find(generators.begin(), generators.end(), name);
  if (it == generators.end())
    return std::nullopt;
  return static_cast<std::size_t>(it - generators.begin());
}

std::size_t PcPresentation::add_generator(std::string name, Exponent relative_order) {
  generators.push_back(std::move(name));
  relative_orders.push_back(relative_order);
  power_relations.emplace_back();
  return generators.size() - 1;
}

void PcPresentation::set_power(std::size_t gen, Word rhs) {
  power_relations.at(gen) = std::move(rhs);
}

void PcPresentation::set_commutator(std::size_t hi, std::size_t lo, Word rhs) {
  if (rhs.empty())
    commutator_relations.erase({hi, lo});
  else
    commutator_relations[{hi, lo}] = std::move(rhs);
}

const Word &PcPresentation::commutator(std::size_t hi, std::size_t lo) const {
  static const Word empty;
  auto it = commutator_relations.find({hi, lo});
  return it == commutator_relations.end() ? empty : it->second;
}

std::string to_string(const Diagnostic &d) {
  std::string out = d.severity == Severity::error ? "error" : "warning";
  if (!d.location.empty())
    out += " (" + d.location + ")";
  return out + ": " + d.message;
}

bool has_errors(const std::vector<Diagnostic> &diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic &d) { return d.severity == Severity::error; });
}

bool is_prime(std::int64_t n) {
  if (n < 2)
    return false;
  for (std::int64_t d = 2; d <= n / d; ++d)
    if (n % d == 0)
      return false;
  return true;
}

std::optional<int> p_power_exponent(std::int64_t n, std::int64_t p) {
  if (p < 2 || n < p)
    return std::nullopt;
  int k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  if (n != 1)
    return std::nullopt;
  return k;
}

std::string format_word(const PcPresentation &pres, const Word &w) {
  if (w.empty())
    return "1";
  std::string out;
  for (const auto &s : w) {
    if (!out.empty())
      out += ' ';
    out += s.gen < pres.rank() ? pres.generators[s.gen] : "?" + std::to_string(s.gen);
    if (s.exp != 1)
      out += '^' + std::to_string(s.exp);
  }
  return out;
}

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok)
    out.push_back(tok);
  return out;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    return std::nullopt;
  return v;
}

bool valid_name(std::string_view s) {
  if (s.empty() || s == "1")
    return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

class Parser {
 public:
  Parser(std::string_view text, bool drop_undeclared)
      : text_(text), drop_undeclared_(drop_undeclared) {}

  ParseResult run();

 private:
  void error(std::string msg) {
    diags_.push_back({Severity::error, "line " + std::to_string(line_no_), std::move(msg)});
  }
  void warning(std::string msg) {
    diags_.push_back({Severity::warning, "line " + std::to_string(line_no_), std::move(msg)});
  }

  // Names that are not declared generators, in order of appearance.
  std::vector<std::string> undeclared(const std::vector<std::string> &names) const;
  std::optional<Word> parse_word(const std::vector<std::string> &toks, std::size_t first);
  void handle_relation(const std::vector<std::string> &toks, const std::string &line);

  std::string_view text_;
  bool drop_undeclared_;
  std::size_t line_no_ = 0;
  std::vector<Diagnostic> diags_;
  PcPresentation pres_;
  bool have_header_ = false;
  bool have_gens_ = false;
  std::vector<bool> order_seen_;
  std::vector<bool> power_seen_;
  std::set<CommutatorKey> comm_seen_;
};

std::vector<std::string> Parser::undeclared(const std::vector<std::string> &names) const {
  std::vector<std::string> out;
  for (const auto &n : names)
    if (!pres_.index_of(n) && std::find(out.begin(), out.end(), n) == out.end())
      out.push_back(n);
  return out;
}

std::optional<Word> Parser::parse_word(const std::vector<std::string> &toks, std::size_t first) {
  Word w;
  if (first >= toks.size()) {
    error("missing relation right-hand side");
    return std::nullopt;
  }
  if (toks.size() == first + 1 && toks[first] == "1")
    return w;
  for (std::size_t t = first; t < toks.size(); ++t) {
    std::string_view tok = toks[t];
    auto caret = tok.find('^');
    std::string_view name = tok.substr(0, caret);
    Exponent e = 1;
    if (caret != std::string_view::npos) {
      auto v = parse_int(tok.substr(caret + 1));
      if (!v) {
        error("bad exponent in factor '" + std::string(tok) + "'");
        return std::nullopt;
      }
      e = *v;
    }
    auto idx = pres_.index_of(name);
    if (!idx) {
      error("undeclared generator " + std::string(name));
      return std::nullopt;
    }
    w.push_back({*idx, e});
  }
  return w;
}

void Parser::handle_relation(const std::vector<std::string> &toks, const std::string &line) {
  const std::string &kw = toks[0];
  if (kw == "order") {
    if (toks.size() != 3) {
      error("expected 'order <name> <p-power>'");
      return;
    }
    if (auto bad = undeclared({toks[1]}); !bad.empty()) {
      error("undeclared generator " + bad.front());
      return;
    }
    auto idx = *pres_.index_of(toks[1]);
    auto v = parse_int(toks[2]);
    if (!v) {
      error("bad relative order '" + toks[2] + "'");
      return;
    }
    if (order_seen_[idx]) {
      error("duplicate order for generator " + toks[1]);
      return;
    }
    order_seen_[idx] = true;
    pres_.relative_orders[idx] = *v;
    if (!p_power_exponent(*v, pres_.prime))
      error("relative order not a p-power: " + toks[1] + " has order " + toks[2]);
    return;
  }

  bool is_pow = kw == "pow";
  std::size_t name_count = is_pow ? 1 : 2;
  if (toks.size() < name_count + 3 || toks[name_count + 1] != "=") {
    error(is_pow ? "expected 'pow <name> = <word>'" : "expected 'comm <hi> <lo> = <word>'");
    return;
  }

  std::vector<std::string> names(toks.begin() + 1, toks.begin() + 1 + name_count);
  for (std::size_t t = name_count + 2; t < toks.size(); ++t) {
    if (toks[t] == "1")
      continue;
    names.push_back(toks[t].substr(0, toks[t].find('^')));
  }
  if (auto bad = undeclared(names); !bad.empty()) {
    if (drop_undeclared_) {
      warning("dropped relation naming undeclared generator " + bad.front() + ": " + line);
    } else {
      for (const auto &b : bad)
        error("undeclared generator " + b);
    }
    return;
  }

  auto rhs = parse_word(toks, name_count + 2);
  if (!rhs)
    return;

  auto hi = *pres_.index_of(toks[1]);
  if (is_pow) {
    if (power_seen_[hi]) {
      error("duplicate power relation for " + toks[1]);
      return;
    }
    power_seen_[hi] = true;
    pres_.set_power(hi, std::move(*rhs));
    return;
  }

  auto lo = *pres_.index_of(toks[2]);
  if (hi <= lo) {
    error("commutator relation must name [hi,lo] with index(hi) > index(lo): " + line);
    return;
  }
  if (!comm_seen_.insert({hi, lo}).second) {
    error("duplicate commutator relation [" + toks[1] + "," + toks[2] + "]");
    return;
  }
  pres_.set_commutator(hi, lo, std::move(*rhs));
}

ParseResult Parser::run() {
  std::istringstream in{std::string(text_)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no_;
    std::string line = raw.substr(0, raw.find('#'));
    auto toks = split_ws(line);
    if (toks.empty())
      continue;
    // Normalised single-spaced copy for messages.
    std::string flat;
    for (const auto &t : toks)
      flat += (flat.empty() ? "" : " ") + t;

    if (!have_header_) {
      if (toks.size() != 2 || toks[0] != "pgroup" || toks[1].rfind("p=", 0) != 0) {
        error("expected header 'pgroup p=<prime>'");
        break;
      }
      auto p = parse_int(std::string_view(toks[1]).substr(2));
      if (!p || !is_prime(*p)) {
        error("p must be a prime: '" + toks[1] + "'");
        break;
      }
      pres_.prime = *p;
      have_header_ = true;
      continue;
    }
    if (!have_gens_) {
      if (toks[0] != "gens") {
        error("expected 'gens <name> ...' after header");
        break;
      }
      for (std::size_t t = 1; t < toks.size(); ++t) {
        if (!valid_name(toks[t])) {
          error("invalid generator name '" + toks[t] + "'");
          continue;
        }
        if (pres_.index_of(toks[t])) {
          error("duplicate generator name " + toks[t]);
          continue;
        }
        pres_.add_generator(toks[t], 0);
      }
      order_seen_.assign(pres_.rank(), false);
      power_seen_.assign(pres_.rank(), false);
      have_gens_ = true;
      continue;
    }
    if (toks[0] == "order" || toks[0] == "pow" || toks[0] == "comm") {
      handle_relation(toks, flat);
    } else {
      error("unknown declaration '" + toks[0] + "'");
    }
  }

  if (!have_header_ && diags_.empty()) {
    line_no_ = 1;
    error("expected header 'pgroup p=<prime>'");
  } else if (have_header_ && !have_gens_ && !has_errors(diags_)) {
    error("missing 'gens' line");
  }
  if (have_gens_) {
    for (std::size_t i = 0; i < pres_.rank(); ++i)
      if (!order_seen_[i])
        diags_.push_back({Severity::error, "gens",
                          "missing order declaration for generator " + pres_.generators[i]});
  }

  if (!has_errors(diags_)) {
    auto structural = validate_structure(pres_);
    diags_.insert(diags_.end(), structural.begin(), structural.end());
  }

  ParseResult result;
  if (!has_errors(diags_))
    result.presentation = std::move(pres_);
  result.diagnostics = std::move(diags_);
  return result;
}

ParseResult parse_impl(std::string_view text, bool drop_undeclared) {
  return Parser(text, drop_undeclared).run();
}

std::string relation_label(const PcPresentation &pres, std::size_t hi, std::size_t lo) {
  auto name = [&](std::size_t i) {
    return i < pres.rank() ? pres.generators[i] : "#" + std::to_string(i);
  };
  return "[" + name(hi) + "," + name(lo) + "]";
}

}  // namespace

ParseResult parse_presentation(std::string_view text) { return parse_impl(text, false); }

std::string serialize_presentation(const PcPresentation &pres) {
  std::ostringstream out;
  out << "pgroup p=" << pres.prime << '\n';
  out << "gens";
  for (const auto &g : pres.generators)
    out << ' ' << g;
  out << '\n';
  for (std::size_t i = 0; i < pres.rank(); ++i)
    out << "order " << pres.generators[i] << ' ' << pres.relative_orders[i] << '\n';
  for (std::size_t i = 0; i < pres.rank(); ++i)
    if (!pres.power_relations[i].empty())
      out << "pow " << pres.generators[i] << " = " << format_word(pres, pres.power_relations[i])
          << '\n';
  for (const auto &[key, rhs] : pres.commutator_relations)
    if (!rhs.empty())
      out << "comm " << pres.generators[key.first] << ' ' << pres.generators[key.second]
          << " = " << format_word(pres, rhs) << '\n';
  return out.str();
}

std::vector<Diagnostic> validate_structure(const PcPresentation &pres) {
  std::vector<Diagnostic> out;
  auto err = [&](std::string loc, std::string msg) {
    out.push_back({Severity::error, std::move(loc), std::move(msg)});
  };

  if (!is_prime(pres.prime))
    err("header", "p must be a prime, got " + std::to_string(pres.prime));

  const std::size_t m = pres.rank();
  if (pres.relative_orders.size() != m || pres.power_relations.size() != m) {
    err("gens", "relative order / power relation count does not match generator count");
    return out;
  }

  std::set<std::string> seen;
  for (std::size_t i = 0; i < m; ++i) {
    if (!seen.insert(pres.generators[i]).second)
      err("gens", "duplicate generator name " + pres.generators[i]);
  }

  for (std::size_t i = 0; i < m; ++i) {
    auto e = is_prime(pres.prime) ? p_power_exponent(pres.relative_orders[i], pres.prime)
                                  : std::nullopt;
    // Exponents live in int64; keep room for one multiplication by p.
    if (!e)
      err("order " + pres.generators[i],
          "relative order not a p-power: " + std::to_string(pres.relative_orders[i]));
    else if (pres.relative_orders[i] > (std::int64_t{1} << 40))
      err("order " + pres.generators[i], "relative order exceeds 2^40");
  }

  for (std::size_t i = 0; i < m; ++i) {
    for (const auto &s : pres.power_relations[i]) {
      if (s.gen >= m)
        err("pow " + pres.generators[i], "undeclared generator #" + std::to_string(s.gen));
      else if (s.gen <= i)
        err("pow " + pres.generators[i],
            "RHS index not greater than i: power relation of " + pres.generators[i] + " uses " +
                pres.generators[s.gen]);
    }
  }

  for (const auto &[key, rhs] : pres.commutator_relations) {
    auto [hi, lo] = key;
    std::string loc = "comm " + relation_label(pres, hi, lo);
    if (hi >= m || lo >= m) {
      err(loc, "undeclared generator in commutator key");
      continue;
    }
    if (hi <= lo) {
      err(loc, "commutator relation must name [hi,lo] with index(hi) > index(lo)");
      continue;
    }
    for (const auto &s : rhs) {
      if (s.gen >= m)
        err(loc, "undeclared generator #" + std::to_string(s.gen));
      else if (s.gen <= lo)
        err(loc, "RHS index not greater than i: " + relation_label(pres, hi, lo) + " uses " +
                     pres.generators[s.gen]);
    }
  }
  return out;
}

std::optional<Family> family_from_name(std::string_view name) {
  if (name == "example_p2")
    return Family::example_p2;
  if (name == "example_p3")
    return Family::example_p3;
  return std::nullopt;
}

std::string_view family_name(Family f) {
  return f == Family::example_p2 ? "example_p2" : "example_p3";
}

int family_minimum_parameter(Family f) { return f == Family::example_p2 ? 3 : 2; }

std::string published_text(Family f, int n) {
  std::ostringstream out;
  if (f == Family::example_p2) {
    std::int64_t a_order = std::int64_t{1} << n;
    out << "pgroup p=2\n"
           "gens a b c d1 d2 e1 e2\n"
        << "order a " << a_order << "\n"
        << "order b 8\norder c 4\norder d1 4\norder d2 4\norder e1 4\norder e2 2\n"
           "comm b a = c^-1   # [a,b] = c\n"
           "comm c a = d1\n"
           "comm c b = d2\n"
           "comm d1 a = e1\n"
           "comm d1 b = e2\n"
           "comm d2 a = e1^2 e2\n"
           "comm d2 b = 1\n"
           "comm e2 a = e1^2\n"
           "comm e1 a = 1\n"
           "comm e1 b = 1\n"
           "comm e2 b = 1\n"
           "comm e3 a = 1\n"
           "comm e3 b = 1\n";
  } else {
    std::int64_t a_order = 1;
    for (int i = 0; i < n; ++i)
      a_order *= 3;
    out << "pgroup p=3\n"
           "gens a b c d1 d2 e1 e2 f\n"
        << "order a " << a_order << "\n"
        << "order b 3\norder c 3\norder d1 3\norder d2 3\norder e1 3\norder e2 3\norder f 3\n"
           "comm b a = c^-1   # [a,b] = c\n"
           "comm c a = d1\n"
           "comm c b = d2\n"
           "comm d1 a = e1\n"
           "comm d1 b = e2\n"
           "comm d2 a = e2\n"
           "comm d2 b = 1\n"
           "comm e1 b = f\n"
           "comm e2 a = f\n"
           "comm e1 a = 1\n"
           "comm e2 b = 1\n"
           "comm f a = 1\n"
           "comm f b = 1\n";
  }
  return out.str();
}

Instantiation instantiate_parameter(Family f, int n) {
  int min_n = family_minimum_parameter(f);
  if (n < min_n)
    throw std::invalid_argument(std::string(family_name(f)) + " requires n >= " +
                                std::to_string(min_n) + ", got " + std::to_string(n));
  if (n > (f == Family::example_p2 ? 40 : 25))
    throw std::invalid_argument("parameter n too large for 64-bit exponents");

  auto parsed = parse_impl(published_text(f, n), true);
  if (!parsed.ok()) {
    std::string msg = "built-in presentation failed to parse";
    for (const auto &d : parsed.diagnostics)
      msg += "; " + to_string(d);
    throw std::logic_error(msg);
  }
  Instantiation inst{std::move(*parsed.presentation), {}};
  for (auto &d : parsed.diagnostics)
    if (d.severity == Severity::warning)
      inst.warnings.push_back(std::move(d));
  return inst;
}

}  // namespace pgrp
