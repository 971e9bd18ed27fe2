#pragma once

// Command implementations behind the `schurdil` executable.  Each command
// writes its report to `out`, diagnostics to `err`, and returns the process
// exit code.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "schurdil/serialize.hpp"

namespace schurdil::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 1,   // invalid symbol or failed verification
  kExitParse = 2,     // unreadable or malformed input
  kExitNotFound = 3,  // search budget exhausted
};

struct Options {
  SearchConfig search;
  std::size_t depth = 4;
  double tol = kDefaultTol;
  double p = 3.0;
  std::size_t max_total_dim = 4096;
  bool joint_shift = false;
  bool json = false;
  std::string out;  // empty: stdout
};

/// Largest K <= requested with n * D^K <= cap, or 0 when even K = 1 is too big.
std::size_t fit_depth(std::size_t n, std::size_t block_dim, std::size_t requested, std::size_t cap);

int cmd_validate(const std::string& input, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_search(const std::string& input, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_dilate(const std::vector<std::string>& symbol_witness_pairs, const Options& opts,
               std::ostream& out, std::ostream& err);
int cmd_certify(const std::string& input, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_recheck(const std::string& certificate, const Options& opts, std::ostream& out,
                std::ostream& err);
int cmd_norming(const std::string& input, const Options& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a command.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace schurdil::cli
