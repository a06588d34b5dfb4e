#include "g1s/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "g1s/error.hpp"

namespace g1s {

using json = nlohmann::ordered_json;

std::string basis_to_json(const QuadMesh& mesh, const BasisSet& basis) {
  json doc;
  doc["k"] = basis.layout.k;
  doc["r"] = basis.layout.r;
  doc["mesh_hash"] = mesh.hash();
  json funcs = json::array();
  for (int n = 0; n < basis.size(); ++n) {
    const SplineFunction& f = basis.functions[n];
    json grids = json::object();
    for (int face : f.support_faces()) {
      json grid = json::array();
      for (const auto& row : f.grid(face)) {
        json jr = json::array();
        for (const auto& v : row) jr.push_back(to_string(v));
        grid.push_back(jr);
      }
      grids[std::to_string(face)] = grid;
    }
    funcs.push_back({{"tag", basis.tags[n]}, {"grids", grids}});
  }
  doc["functions"] = funcs;
  return doc.dump(1);
}

BasisSet basis_from_json(const QuadMesh& mesh, const std::string& text) {
  try {
    const json doc = json::parse(text);
    const int k = doc.at("k").get<int>(), r = doc.at("r").get<int>();
    if (r < 0 || r >= k) fail("ShapeMismatch", "basis file needs 0 <= r < k");
    if (doc.contains("mesh_hash") && doc["mesh_hash"].get<std::string>() != mesh.hash()) {
      fail("ShapeMismatch", "basis file was written for a different mesh or gluing");
    }
    BasisSet basis;
    basis.layout = SplineLayout(k, r, mesh.num_faces());
    for (const auto& jf : doc.at("functions")) {
      std::map<int, std::vector<std::vector<Rational>>> grids;
      for (const auto& [key, jg] : jf.at("grids").items()) {
        auto& g = grids[std::stoi(key)];
        for (const auto& jr : jg) {
          std::vector<Rational> row;
          for (const auto& v : jr) row.push_back(parse_rational(v.get<std::string>()));
          g.push_back(std::move(row));
        }
      }
      basis.functions.push_back(SplineFunction::from_grids(basis.layout, grids));
      basis.tags.push_back(jf.at("tag").get<std::string>());
    }
    return basis;
  } catch (const nlohmann::json::exception& ex) {
    fail("ParseError", std::string("basis JSON: ") + ex.what());
  }
}

std::string dimension_report_json(const QuadMesh& mesh, const DimensionReport& rep) {
  json doc;
  doc["total"] = rep.total;
  doc["vertex"] = rep.vertex;
  doc["edge"] = rep.edge;
  doc["face"] = rep.face;
  doc["face_interior"] = rep.face_interior;
  doc["free_boundary"] = rep.free_boundary;
  json pv = json::object(), pe = json::object();
  for (const auto& [v, d] : rep.per_vertex) pv[std::to_string(mesh.vertices[v].id)] = d;
  for (const auto& [e, d] : rep.per_edge) pe[mesh.edge_key(e)] = d;
  doc["per_vertex"] = pv;
  doc["per_edge"] = pe;
  return doc.dump(1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail("IoError", "cannot write '" + path + "'");
  out << text;
  if (!out) fail("IoError", "write to '" + path + "' failed");
}

}  // namespace g1s
