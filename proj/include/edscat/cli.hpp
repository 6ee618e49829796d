#pragma once
// Command-line front end. Exit codes are a stable contract:
//   0 success, 1 numerical-stage failure, 2 I/O or parse failure,
//   3 validation rejection.

namespace edscat::cli {

int run(int argc, char** argv);

}  // namespace edscat::cli
