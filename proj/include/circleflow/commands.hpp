#pragma once

// Entry points behind the `circleflow` executable. Each returns the process
// exit code:
//   0  success
//   1  other error (bad arguments, unsupported layout, I/O failure)
//   2  mesh or trace file could not be parsed
//   3  mesh failed validation
//   4  an existence condition fails
//   5  flow or Newton iteration did not converge, or degenerated
//   6  an existence condition could not be decided (near tie, subset scan
//      skipped, loop of undetermined homotopy class)

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace circleflow {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int error = 1;
inline constexpr int parse = 2;
inline constexpr int validation = 3;
inline constexpr int condition_fails = 4;
inline constexpr int non_convergence = 5;
inline constexpr int undecided = 6;
}  // namespace exit_code

struct CheckOptions {
  std::filesystem::path mesh;
  bool json = false;
  /// Accept faces with repeated vertex triples (generalized triangulations
  /// whose faces are told apart only by their edges).
  bool relaxed = false;
  int subset_cap = 20;
};

int cmd_check(const CheckOptions& options, std::ostream& out, std::ostream& err);

struct FlowOptions {
  std::filesystem::path mesh;
  std::string mode = "euler";  // "euler" or "newton"
  std::optional<double> tol;
  std::optional<std::size_t> max_steps;
  std::optional<std::filesystem::path> trace_out;
  bool json = false;
};

int cmd_flow(const FlowOptions& options, std::ostream& out, std::ostream& err);

struct LayoutOptions {
  std::filesystem::path mesh;
  std::filesystem::path svg_out;
  /// Take radii from the last sample of this trace instead of the mesh file.
  std::optional<std::filesystem::path> trace;
  /// Solve for the target curvatures with Newton's method first.
  bool solve = false;
  double size = 800.0;
};

int cmd_layout(const LayoutOptions& options, std::ostream& out, std::ostream& err);

}  // namespace circleflow
