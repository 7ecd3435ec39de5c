// Command-line driver. Subcommands:
//   run        simulate a preset or explicit config, writing snapshots,
//              diagnostics and a provenance record
//   converge   pure-diffusion refinement study with observed orders
//   diagnose   consistency / limit-conformity / regularity decay table
//   mesh-info  geometry and regularity report of a mesh
// Exit codes: 0 success, 1 validation error, 2 solver failure.

#ifndef HMMRD_CLI_HPP
#define HMMRD_CLI_HPP

#include <iosfwd>

namespace hmmrd {

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace hmmrd

#endif
