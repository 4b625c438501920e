#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace pgrp {

// Exit codes: 0 all checks passed, 1 a check failed, 2 usage or parse error.
int run_cli(std::span<const std::string> args, std::ostream &out, std::ostream &err);

}  // namespace pgrp
