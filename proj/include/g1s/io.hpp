#pragma once

#include <string>

#include "g1s/g1basis.hpp"

namespace g1s {

// `.g1basis.json`: {"k", "r", "mesh_hash", "functions": [{"tag", "grids": {face: [["p/q", ...], ...]}}]}.
// Only faces carrying nonzero coefficients are written.
std::string basis_to_json(const QuadMesh& mesh, const BasisSet& basis);
// Raises ShapeMismatch when the file was written for a different mesh.
BasisSet basis_from_json(const QuadMesh& mesh, const std::string& text);

std::string dimension_report_json(const QuadMesh& mesh, const DimensionReport& rep);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace g1s
