#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sobext/render.hpp"
#include "sobext/serialize.hpp"

namespace sobext {

enum class Command { decompose, groups, functionals, norm, extend, eval, verify, render, gen };

const char* to_string(Command command);

struct RunConfig {
  Command command = Command::decompose;
  std::string sites_path;
  /// Values come from here if set, else from the sites file.
  std::string values_path;
  std::vector<double> ps{1.5};
  /// extend: W x H samples over bbox (user coordinates).
  FieldGrid field;
  /// eval: the point, as rational strings.
  std::string at_x, at_y;
  /// verify: oracle grid sizes and quadrature refinement.
  std::vector<int> oracle_grids{129};
  int refine = 1;
  /// JSON (or SVG for render) destination; empty means stdout.
  std::string out_path;
  RenderOptions render;
  Family family = Family::uniform;
  std::size_t n = 16;
  std::uint64_t seed = 0;
  /// 0 keeps the SOBEXT_THREADS / default setting.
  int threads = 0;
};

/// Checks the config before any work: input files readable, output
/// directories present, every p in (1, 2), sizes in range. Throws
/// ValidationError.
void validate(const RunConfig& config);

/// Runs one subcommand. Returns 0 on success, 1 on a validation failure
/// (message on err), 2 when an internal check fails (the message names it).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace sobext
