#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "spantri/triangulation.hpp"

namespace spantri {

/// {n, k, boundary, rotations: {"id": [...]}, internal, regime_tag}, keys in
/// that order and rotations in id order, so output is byte-stable.
nlohmann::ordered_json to_json(const Triangulation& t);

/// Inverse of to_json. Missing or mistyped fields throw ParameterError;
/// dangling ids or asymmetric rotations throw StructuralError. The result is
/// not validated.
Triangulation from_json(const nlohmann::json& j);

Triangulation read_triangulation(const std::string& path);
void write_triangulation(const Triangulation& t, const std::string& path);

/// Graphviz; boundary edges bold and red, internal vertices filled.
std::string to_dot(const Triangulation& t);

}  // namespace spantri
