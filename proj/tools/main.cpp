#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "sobext/cli.hpp"

namespace {

using sobext::Command;
using sobext::RunConfig;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

double to_number(const std::string& s, const char* flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw sobext::ValidationError(std::string(flag) + ": not a number: " + s);
  }
}

int to_int(const std::string& s, const char* flag) {
  const double v = to_number(s, flag);
  if (v != static_cast<int>(v)) throw sobext::ValidationError(std::string(flag) + ": not an integer: " + s);
  return static_cast<int>(v);
}

struct Raw {
  std::string p = "1.5";
  std::string grid;
  std::string bbox;
  std::string at;
  std::string family = "uniform";
  std::string view = "inner";
};

void finish(RunConfig& c, const Raw& raw) {
  c.ps.clear();
  for (const auto& s : split(raw.p, ',')) c.ps.push_back(to_number(s, "--p"));
  if (c.command == Command::extend) {
    std::string g = raw.grid;
    // Accept "WxH" and "W×H".
    for (const std::string times : {"\xC3\x97", "X"}) {
      for (auto pos = g.find(times); pos != std::string::npos; pos = g.find(times)) g.replace(pos, times.size(), "x");
    }
    const auto wh = split(g, 'x');
    if (wh.size() != 2) throw sobext::ValidationError("--grid must be WxH");
    c.field.width = to_int(wh[0], "--grid");
    c.field.height = to_int(wh[1], "--grid");
    const auto box = split(raw.bbox, ',');
    if (box.size() != 4) throw sobext::ValidationError("--bbox must be x0,y0,x1,y1");
    c.field.x0 = to_number(box[0], "--bbox");
    c.field.y0 = to_number(box[1], "--bbox");
    c.field.x1 = to_number(box[2], "--bbox");
    c.field.y1 = to_number(box[3], "--bbox");
  }
  if (c.command == Command::verify && !raw.grid.empty()) {
    c.oracle_grids.clear();
    for (const auto& s : split(raw.grid, ',')) c.oracle_grids.push_back(to_int(s, "--grid"));
  }
  if (c.command == Command::eval) {
    const auto xy = split(raw.at, ',');
    if (xy.size() != 2) throw sobext::ValidationError("--at must be x,y");
    c.at_x = xy[0];
    c.at_y = xy[1];
  }
  if (c.command == Command::gen) c.family = sobext::parse_family(raw.family);
  if (c.command == Command::render) {
    if (raw.view == "inner") {
      c.render.radius = 0x1p-9;
    } else if (raw.view == "full") {
      c.render.radius = 1.0;
    } else {
      c.render.radius = to_number(raw.view, "--view");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sobolev trace extension from points on a line"};
  app.require_subcommand(1);
  RunConfig config;
  Raw raw;
  app.add_option("--threads", config.threads, "Worker threads (default: SOBEXT_THREADS or 1)");

  auto common = [&](CLI::App* sub, bool values) {
    sub->add_option("--sites", config.sites_path, "Sites JSON {\"sites\": [...], \"values\": [...]}")->required();
    if (values) sub->add_option("--values", config.values_path, "Values JSON (default: from the sites file)");
  };

  struct Entry {
    Command command;
    const char* help;
  };
  const Entry entries[] = {
      {Command::decompose, "CZ decomposition to cz.json"},
      {Command::groups, "Groups, towers, gangs and anchors to groups.json"},
      {Command::functionals, "The functional family to fam.json"},
      {Command::norm, "Print the triple norm for each --p"},
      {Command::extend, "Sample the extension on a grid to field.json"},
      {Command::eval, "Evaluate the extension at one point"},
      {Command::verify, "Quadrature and oracle comparison to report.json"},
      {Command::render, "SVG of the decomposition"},
      {Command::gen, "Generate a random instance"},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(sobext::to_string(e.command), e.help);
    subs.emplace_back(sub, e.command);
    switch (e.command) {
      case Command::decompose:
      case Command::groups:
      case Command::functionals:
        common(sub, false);
        sub->add_option("--out", config.out_path, "Output path (default: stdout)");
        break;
      case Command::norm:
        common(sub, true);
        sub->add_option("--p", raw.p, "Exponents in (1,2), comma separated");
        break;
      case Command::extend:
        common(sub, true);
        sub->add_option("--grid", raw.grid, "Samples WxH")->required();
        sub->add_option("--bbox", raw.bbox, "x0,y0,x1,y1 in user coordinates")->required();
        sub->add_option("--out", config.out_path, "Output path (default: stdout)");
        break;
      case Command::eval:
        common(sub, true);
        sub->add_option("--at", raw.at, "x,y in user coordinates (rationals allowed)")->required();
        break;
      case Command::verify:
        common(sub, true);
        sub->add_option("--p", raw.p, "Exponents in (1,2), comma separated");
        sub->add_option("--grid", raw.grid, "Oracle grid sizes, odd, comma separated (default 129)");
        sub->add_option("--refine", config.refine, "Quadrature panel refinement levels (default 1)");
        sub->add_option("--out", config.out_path, "Output path (default: stdout)");
        break;
      case Command::render:
        common(sub, false);
        sub->add_option("--svg", config.out_path, "Output SVG path (default: stdout)");
        sub->add_option("--view", raw.view, "inner, full, or a half-width in the normalized frame");
        sub->add_flag("!--no-towers", config.render.towers, "Do not outline towers");
        sub->add_flag("!--no-gangs", config.render.gangs, "Do not mark gangs");
        break;
      case Command::gen:
        sub->add_option("--family", raw.family, "uniform, cluster, near-pair or lattice");
        sub->add_option("--n", config.n, "Number of sites");
        sub->add_option("--seed", config.seed, "Random seed");
        sub->add_option("--out", config.out_path, "Output path (default: stdout)");
        break;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  for (const auto& [sub, command] : subs) {
    if (sub->parsed()) config.command = command;
  }
  try {
    finish(config, raw);
  } catch (const sobext::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return sobext::run(config, std::cout, std::cerr);
}
