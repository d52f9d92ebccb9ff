#pragma once
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace subfou {

enum ExitCode { exit_ok = 0, exit_config = 1, exit_numeric = 2, exit_experiment = 3 };

// Commands: simulate, estimate, predict, mc-consistency, mc-normality, mc-berry-esseen,
// mc-tail, validate-kernels. Settings come from --config (key = value) overlaid by flags.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv);

} // namespace subfou
