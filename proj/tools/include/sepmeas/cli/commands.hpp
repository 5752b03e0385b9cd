#pragma once

// Entry points behind the sepmeas executable. Arguments exclude the program
// name; all output goes to the given streams so tests can drive commands
// in-process.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace sepmeas::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInvariant = 3;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyRow {
  int n = 0;
  std::vector<std::size_t> dims;
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Full invariant suite for one instance. Never throws; a failed step shows
/// up as a failed check carrying the error text.
VerifyRow verify_instance(int n, const std::vector<std::size_t>& dims, double cone_tol);

/// Rows for every ascending factorization of n - 1 with at least two
/// factors, for each n in order. Work runs concurrently; output order
/// follows the input. Throws InputError unless every n is a prime >= 5.
std::vector<VerifyRow> verify_all(const std::vector<int>& ns, double cone_tol);

}  // namespace sepmeas::cli
