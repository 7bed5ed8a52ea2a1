#pragma once

#include <ostream>

namespace probterm {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace probterm
