#pragma once

namespace edgeworth {

// Subcommands: cumulants, density, measure, exact, rate.
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.
int cli_main(int argc, char** argv);

}  // namespace edgeworth
