#ifndef LOWMULT_CLI_HPP
#define LOWMULT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace lowmult {

// exit codes: 0 success, 1 usage error, 2 invariant violation / domain error
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lowmult

#endif
