// cli.hpp — command-line front end.
//
// Exit codes: 0 for success / an affirmative verdict, 1 for a negative or
// inconclusive verdict, 2 for usage and input errors.

#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace mucheck::cli {

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace mucheck::cli
