#pragma once

#include <string>
#include <vector>

namespace hexcpg {

// Command-line front end (simulate | check | sweep | sample-skills).
// Returns the process exit code: 0 on success, 1 when the requested work
// ran but failed (failed checks, runtime errors), 2 for usage or config
// errors. args excludes argv[0]. HEXCPG_LOG_LEVEL=quiet|info|debug controls
// the progress notes printed to stderr; results go to stdout.
int run_cli(std::vector<std::string> args);
int run_cli(int argc, char** argv);

}  // namespace hexcpg
