#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mdattack::cli
{

/// Runs one command line. Returns 0 on success, 1 on runtime errors, 2 on
/// usage errors. Metrics JSON goes to `out`; messages and logs go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mdattack::cli
