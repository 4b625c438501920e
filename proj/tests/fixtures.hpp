#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "pgrp/verifier.hpp"

namespace fixtures {

inline pgrp::PcPresentation parse(const std::string &text) {
  auto r = pgrp::parse_presentation(text);
  if (!r.ok())
    throw std::runtime_error("fixture does not parse: " + pgrp::to_string(r.diagnostics.at(0)));
  return *r.presentation;
}

inline pgrp::GroupPtr group(const std::string &text) { return pgrp::make_group(parse(text)); }

inline std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string data(const std::string &name) {
  return read_file(std::string(PGRP_TEST_DATA) + "/" + name);
}

inline const char *const c5 = "pgroup p=5\ngens a\norder a 5\n";
inline const char *const c9 = "pgroup p=3\ngens g h\norder g 3\norder h 3\npow g = h\n";
inline const char *const c3xc3 = "pgroup p=3\ngens a b\norder a 3\norder b 3\n";
inline const char *const c2xc2 = "pgroup p=2\ngens a b\norder a 2\norder b 2\n";
inline const char *const c2_cubed =
    "pgroup p=2\ngens a b c\norder a 2\norder b 2\norder c 2\n";
inline const char *const d8 =
    "pgroup p=2\ngens x y z\norder x 2\norder y 2\norder z 2\npow y = z\ncomm y x = z\n";
inline const char *const q8 =
    "pgroup p=2\ngens x y z\norder x 2\norder y 2\norder z 2\npow x = z\npow y = z\ncomm y x = z\n";
inline const char *const heisenberg3 =
    "pgroup p=3\ngens x y z\norder x 3\norder y 3\norder z 3\ncomm y x = z\n";
// maximal class, order 81
inline const char *const maxclass81 =
    "pgroup p=3\ngens a b c d\norder a 3\norder b 3\norder c 3\norder d 3\n"
    "comm b a = c\ncomm c a = d\n";
// dihedral of order 16, class 3
inline const char *const d16 =
    "pgroup p=2\ngens x y z w\norder x 2\norder y 2\norder z 2\norder w 2\n"
    "pow y = z\npow z = w\ncomm y x = z w\ncomm z x = w\n";

// example_p2 with the e3 relations removed and [d1,c] = e1^2 added: a
// consistent variant used to exercise the p = 2 paths. Not the printed group.
inline pgrp::PcPresentation p2_variant() { return parse(data("example_p2_variant.pc")); }

inline pgrp::PcPresentation builtin(pgrp::Family f, int n) {
  return pgrp::instantiate_parameter(f, n).presentation;
}

}  // namespace fixtures
