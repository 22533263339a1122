#pragma once

// Experiment orchestration behind the jsrkit command line.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "jsr/matrix_set.hpp"
#include "jsr/symbolic.hpp"

namespace jsr {

enum class Command { bounds, pruned, splitting, sturmian, epsilon, convergence };

// Throws ValueError on an unknown name.
Command parse_command(const std::string& name);
std::string command_name(Command c);

struct RunConfig {
  Command command = Command::bounds;
  std::string input;
  std::string out;
  std::size_t max_depth = 10;
  std::string norm = "euclidean";  // or "adapted"
  std::size_t adapted_depth = 6;
  std::optional<double> rho_hat;   // default: pruned-bounds midpoint (norms) or lower bound (splitting)
  double delta = 0.1;
  std::vector<Rational> gamma;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string word = "0";          // splitting: the periodic cycle
  bool svg = false;
  std::uint64_t budget = kDefaultMultiplicationBudget;
};

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitInconclusive = 3, kExitInvariant = 4 };

// Runs the pipeline, writes <out> (CSV) and <out>.json (metadata) atomically,
// and returns the exit code. On failure one line of the form
//   jsrkit: exit=<code> kind=<kind> message="<text>"
// goes to `err`.
int run(const RunConfig& config, std::ostream& err);

}  // namespace jsr
