#include <iostream>

#include <CLI11.hpp>

#include "circleflow/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Combinatorial Ricci flow for weighted circle packings"};
  app.require_subcommand(1);

  circleflow::CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Validate a mesh and test the existence conditions");
  check_cmd->add_option("mesh", check.mesh, "Mesh file (JSON)")->required();
  check_cmd->add_flag("--json", check.json, "Print the report as JSON");
  check_cmd->add_flag("--relaxed", check.relaxed, "Allow faces with repeated vertex triples");
  check_cmd->add_option("--subset-cap", check.subset_cap, "Largest vertex count for the exhaustive subset scan")
      ->check(CLI::Range(1, 31));

  circleflow::FlowOptions flow;
  auto* flow_cmd = app.add_subcommand("flow", "Run the curvature flow or Newton's method");
  flow_cmd->add_option("mesh", flow.mesh, "Mesh file (JSON)")->required();
  flow_cmd->add_option("--mode", flow.mode, "euler or newton")->check(CLI::IsMember({"euler", "newton"}));
  flow_cmd->add_option("--tol", flow.tol, "Sup-norm tolerance on K - target");
  flow_cmd->add_option("--max-steps", flow.max_steps, "Step (or Newton iteration) budget");
  flow_cmd->add_option("--out", flow.trace_out, "Trace output (JSON lines)");

  circleflow::LayoutOptions layout;
  auto* layout_cmd = app.add_subcommand("layout", "Develop a packing and draw it as SVG");
  layout_cmd->add_option("mesh", layout.mesh, "Mesh file (JSON)")->required();
  layout_cmd->add_option("--out", layout.svg_out, "SVG output")->required();
  layout_cmd->add_option("--trace", layout.trace, "Take radii from the last sample of a trace");
  layout_cmd->add_flag("--solve", layout.solve, "Solve for the target curvatures first");
  layout_cmd->add_option("--size", layout.size, "Drawing size in pixels")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : circleflow::exit_code::error;
  }

  try {
    if (*check_cmd) return circleflow::cmd_check(check, std::cout, std::cerr);
    if (*flow_cmd) return circleflow::cmd_flow(flow, std::cout, std::cerr);
    return circleflow::cmd_layout(layout, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return circleflow::exit_code::error;
  }
}
