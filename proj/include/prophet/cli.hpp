#pragma once

// Command-line driver. Returns the process exit status: 0 on success, 1 when
// a verification check fails, 2 on usage or input errors (no artifact is
// written in that case).

namespace prophet::cli {

int run(int argc, char** argv);

}  // namespace prophet::cli
