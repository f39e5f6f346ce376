#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sobext/comparability.hpp"
#include "sobext/instances.hpp"

namespace sobext {

using Json = nlohmann::json;

/// {"sites": [...], "values": [...]}. Sites are rational strings (numbers are
/// accepted and read exactly); values may be absent.
struct InputFile {
  std::vector<Rational> sites;
  std::vector<double> values;
};

InputFile parse_input(const Json& doc);
InputFile read_input(const std::string& path);
/// A values file: {"values": [...]} or a bare array.
std::vector<double> read_values(const std::string& path);

Json read_json(const std::string& path);
/// Pretty-printed with a trailing newline.
void write_json(const std::string& path, const Json& doc);

/// "q<id>", the key used for a square in every artifact.
std::string square_key(SquareId id);

// Site references in every artifact are indices into the caller's input
// order; the auxiliary point (-1, 0) is written as null. Coordinates are
// exact rational strings in the normalized frame.

Json instance_json(const Instance& instance);
Json cz_json(const Pipeline& pipeline);
Json groups_json(const Pipeline& pipeline);
Json functionals_json(const Pipeline& pipeline);

/// Row-major samples of T#f on a W x H grid over a box in user coordinates.
struct FieldGrid {
  int width = 0;
  int height = 0;
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};
Json field_json(const ExtensionField& field, const FieldGrid& grid);
Json jet_json(const Jet& jet);

Json report_json(const Pipeline& pipeline, const std::vector<ComparabilityRow>& rows, const ComparabilityOptions& options);

}  // namespace sobext
