// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hybridlab::cli {

// Runs one subcommand. Returns 0 on success, 2 on usage errors, 1 on
// domain/fit errors. Deterministic given seeds; seeds are echoed in output.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hybridlab::cli
