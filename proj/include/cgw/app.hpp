#pragma once

#include "cgw/config.hpp"

namespace cgw {

// Exit statuses: 0 success, 1 solver failure, 2 configuration error.
int run(const RunConfig& cfg);
// Parses the config (file and flags), runs it and writes error.json on failure.
int run_cli(const CliOverrides& cli);

} // namespace cgw
