#ifndef UDIRONY_CLI_H_
#define UDIRONY_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace udirony {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitTraining = 3 };

// Runs one subcommand. `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace udirony

#endif  // UDIRONY_CLI_H_
