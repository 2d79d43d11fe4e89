#pragma once

#include "cohmatch/coherent.hpp"
#include "cohmatch/fixtures.hpp"
#include "cohmatch/io.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace cohmatch::cli {

/// Settings of the invariant suite run by `check`.
struct CheckOptions {
  int resolution = 32;
  int word_length = 2;
  int enumeration_limit = 6;
  Real a_min = kDefaultAMin;
  Real b_margin = 1.0;
  Real dmatch_tol = 1e-2;
  std::size_t dmatch_max_evaluations = 20000;
  int field = 2;
};

/// Stability and D <= CD for every pair of functions, and the transport
/// laws on the first two (three) functions. `passed` is true when all hold
/// (skipped law checks do not count as failures).
Json check_report(const fixtures::Sample& sample, const CheckOptions& options);

/// Runs the command line; returns the exit status. Errors go to `err` as
/// {"error": kind, "message": text} with status 2.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cohmatch::cli
