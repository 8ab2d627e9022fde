// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace otfs::cli {

/// Entry point shared by the otfs_lab binary and the CLI tests.
/// args excludes the program name. Output is buffered and only written to
/// `out` (or the --out file) when the command succeeds.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace otfs::cli
