#ifndef cellaut_tools_cli_hpp
#define cellaut_tools_cli_hpp

#include <iosfwd>

namespace cellaut::cli {

// Exit codes: 0 success, 1 domain error (parse, capacity, failed verification), 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cellaut::cli

#endif
