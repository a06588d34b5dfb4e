// Command-line front end: dimensions, bases, mu-bases, checks, fitting and export.

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "g1s/error.hpp"
#include "g1s/g1basis.hpp"
#include "g1s/io.hpp"
#include "g1s/mesh.hpp"
#include "g1s/surf.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace g1s;

constexpr int kMaxDegree = 16;
constexpr int kMaxRegularity = 3;

struct Config {
  std::string mesh_path;
  int k = 4;
  int r = 1;
  std::string gluing;
  int gluing_degree = -1;
  int gluing_regularity = -1;
  std::string method = "all";
  bool exact = false;
  int samples = 16;
  std::string out;
  std::string basis_path;
  std::string surface_path;
  std::string target_path;
  std::string format = "sampled_obj";
};

void emit(const Config& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text << '\n';
  } else {
    write_file(cfg.out, text + "\n");
  }
}

void warn(const std::string& msg) { std::cerr << json{{"warning", msg}}.dump() << '\n'; }

QuadMesh load(const Config& cfg) {
  if (cfg.k < 1 || cfg.k > kMaxDegree) fail("RangeViolation", "degree must lie in [1, 16]");
  if (cfg.r < 0 || cfg.r > kMaxRegularity || cfg.r >= cfg.k) {
    fail("RangeViolation", "regularity must satisfy 0 <= r <= 3 and r < k");
  }
  QuadMesh mesh = load_mesh(cfg.mesh_path);
  const bool regluing = !cfg.gluing.empty() || cfg.gluing_degree >= 0 || cfg.gluing_regularity >= 0;
  if (regluing) {
    const GluingMode mode = cfg.gluing.empty() ? mesh.gluing.mode : parse_gluing_mode(cfg.gluing);
    const int l = cfg.gluing_degree >= 0 ? cfg.gluing_degree : mesh.gluing.degree;
    const int s = cfg.gluing_regularity >= 0 ? cfg.gluing_regularity : mesh.gluing.regularity;
    if (l > kMaxDegree || s > kMaxRegularity) fail("RangeViolation", "gluing degree or regularity out of range");
    mesh.gluing = {mode, l, s};
    if (mode == GluingMode::Explicit) {
      assign_explicit_gluing(mesh, mesh.explicit_triples);
    } else if (mesh.num_interior_edges() > 0) {
      assign_gluing(mesh, mode, l, s);
    }
  }
  return mesh;
}

json poly_json(const Poly& p) {
  json a = json::array();
  for (const auto& c : p.coeffs()) a.push_back(to_string(c));
  return a;
}

json syz_vector_json(const SyzVector& v) { return json::array({poly_json(v[0]), poly_json(v[1]), poly_json(v[2])}); }

int run_dim(const Config& cfg) {
  const QuadMesh mesh = load(cfg);
  json doc;
  doc["mesh_hash"] = mesh.hash();
  doc["k"] = cfg.k;
  doc["r"] = cfg.r;
  const bool all = cfg.method == "all";
  std::optional<DimensionReport> comp;
  auto components = [&]() -> const DimensionReport& {
    if (!comp) comp = components_dimension(mesh, cfg.k, cfg.r);
    return *comp;
  };
  if (all || cfg.method == "components") {
    doc["components"] = json::parse(dimension_report_json(mesh, components()));
  }
  if (all || cfg.method == "formula") {
    if (mesh.closed()) {
      doc["formula"] = formula_dimension(mesh, cfg.k, cfg.r);
    } else {
      warn("the closed-form dimension applies to meshes without boundary; reporting the components value");
      doc["formula"] = components().total;
      doc["formula_source"] = "components";
    }
  }
  if (all || cfg.method == "oracle") doc["oracle"] = oracle_dimension(mesh, cfg.k, cfg.r);
  emit(cfg, doc.dump(1));
  return 0;
}

int run_basis(const Config& cfg) {
  const QuadMesh mesh = load(cfg);
  const BasisSet basis = full_basis(mesh, cfg.k, cfg.r);
  emit(cfg, basis_to_json(mesh, basis));
  return 0;
}

int run_mubasis(const Config& cfg) {
  const QuadMesh mesh = load(cfg);
  json edges = json::array();
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edges[e].interior()) continue;
    const GluingTriple& g = *mesh.edges[e].gluing;
    json je;
    je["edge"] = mesh.edge_key(e);
    json pieces = json::array();
    for (int p = 0; p < 2; ++p) {
      const MuBasis mb = mu_basis(piece_triple(g, p));
      pieces.push_back({{"mu", mb.mu}, {"nu", mb.nu}, {"n", mb.n}, {"e", mb.e}, {"p", syz_vector_json(mb.p)},
                        {"q", syz_vector_json(mb.q)}});
    }
    je["pieces"] = pieces;
    je["delta"] = delta_tau(g);
    try {
      je["d_formula"] = spline_syz_dim(g, cfg.k, cfg.r);
    } catch (const Error& ex) {
      je["d_formula"] = nullptr;
      je["d_formula_error"] = ex.code();
    }
    je["syz_exact"] = brute_force_syz_dim(g, cfg.k, cfg.r, cfg.r, cfg.r);
    if (cfg.r >= 1) je["syz_relaxed_exact"] = brute_force_syz_dim(g, cfg.k, cfg.r - 1, cfg.r, cfg.r);
    je["separability_bound"] = separability_bound(g, cfg.r);
    je["separability_degree"] = separability_degree(mesh, e, cfg.r, cfg.r + 1, kMaxDegree);
    edges.push_back(je);
  }
  emit(cfg, json{{"mesh_hash", mesh.hash()}, {"k", cfg.k}, {"r", cfg.r}, {"edges", edges}}.dump(1));
  return 0;
}

int run_check(const Config& cfg) {
  const QuadMesh mesh = load(cfg);
  json doc;
  bool ok = true;
  json cycles = json::object(), crossings = json::object();
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const std::string id = std::to_string(mesh.vertices[v].id);
    if (!mesh.stars[v].interior) continue;
    const bool c1 = check_vertex_cycle(mesh, v).ok;
    cycles[id] = c1;
    ok = ok && c1;
    if (is_crossing_vertex(mesh, v)) {
      const bool c2 = check_crossing_conditions(mesh, v);
      crossings[id] = c2;
      ok = ok && c2;
    }
  }
  doc["vertex_cycle"] = cycles;
  doc["crossing_conditions"] = crossings;
  json sep = json::object();
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edges[e].interior()) continue;
    const SeparabilityReport rep = separability(mesh, e, cfg.k, cfg.r);
    sep[mesh.edge_key(e)] = {{"rank", rep.rank}, {"required", rep.required}, {"separable", rep.separable}};
    ok = ok && rep.separable;
  }
  doc["separability"] = sep;
  if (!cfg.basis_path.empty()) {
    const BasisSet basis = basis_from_json(mesh, read_file(cfg.basis_path));
    const BasisCheck chk = check_basis(mesh, basis);
    const int oracle = oracle_dimension(mesh, basis.layout.k, basis.layout.r);
    doc["basis"] = {{"size", basis.size()},
                    {"oracle_dimension", oracle},
                    {"independent", chk.independent},
                    {"zero_residual", chk.zero_residual},
                    {"edge_jets_zero", chk.edge_jets_zero}};
    ok = ok && chk.independent && chk.zero_residual && chk.edge_jets_zero && basis.size() == oracle;
  }
  if (!cfg.surface_path.empty()) {
    ParametricSurface s;
    s.net = control_net_from_json(read_file(cfg.surface_path), mesh.num_faces());
    const double res = max_g1_residual(mesh, s, 33);
    doc["surface"] = {{"max_g1_residual", res}, {"tolerance", 1e-9}};
    ok = ok && res < 1e-9;
  }
  doc["ok"] = ok;
  emit(cfg, doc.dump(1));
  return ok ? 0 : 1;
}

int run_fit(const Config& cfg) {
  const QuadMesh mesh = load(cfg);
  const SplineLayout lay(cfg.k, cfg.r, mesh.num_faces());
  ControlNet target = cfg.target_path.empty() ? bilinear_net(mesh, lay)
                                              : control_net_from_json(read_file(cfg.target_path), mesh.num_faces());
  if (target.layout.k != cfg.k || target.layout.r != cfg.r) {
    fail("ShapeMismatch", "target control net degree or regularity differs from --degree/--regularity");
  }
  const BasisSet basis = full_basis(mesh, cfg.k, cfg.r);
  const Projection proj = project_g1(target, basis, cfg.exact);
  for (const auto& w : proj.warnings) warn(w);
  std::cerr << json{{"residual_norm", proj.residual_norm},
                    {"max_g1_residual", max_g1_residual(mesh, proj.surface, 33)},
                    {"basis_size", basis.size()}}
                   .dump()
            << '\n';
  emit(cfg, control_net_to_json(proj.surface.net, mesh.hash()));
  return 0;
}

int run_export(const Config& cfg) {
  QuadMesh mesh = load_mesh(cfg.mesh_path);
  ParametricSurface s;
  if (cfg.surface_path.empty()) {
    s.net = bilinear_net(mesh, SplineLayout(cfg.k, cfg.r, mesh.num_faces()));
  } else {
    s.net = control_net_from_json(read_file(cfg.surface_path), mesh.num_faces());
  }
  ExportStats stats;
  const std::string text = export_surface(mesh, s, parse_export_mode(cfg.format), cfg.samples, &stats);
  std::cerr << json{{"vertices", stats.vertices}, {"faces", stats.faces}, {"merged", stats.merged}}.dump() << '\n';
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    write_file(cfg.out, text);
  }
  return 0;
}

void add_common(CLI::App* sub, Config& cfg) {
  sub->add_option("--mesh", cfg.mesh_path, "Mesh file (.qmesh.json)")->required()->check(CLI::ExistingFile);
  sub->add_option("--degree,-k", cfg.k, "Spline degree k");
  sub->add_option("--regularity,-r", cfg.r, "Interior regularity r");
  sub->add_option("--gluing", cfg.gluing, "Gluing mode override")
      ->check(CLI::IsMember({"symmetric", "fan", "constant-denominator", "constant_denominator", "explicit"}));
  sub->add_option("--gluing-degree", cfg.gluing_degree, "Gluing degree l");
  sub->add_option("--gluing-regularity", cfg.gluing_regularity, "Gluing regularity s");
  sub->add_option("--out,-o", cfg.out, "Output path (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"G1 spline spaces over quad meshes"};
  app.require_subcommand(1);
  Config cfg;

  auto* dim = app.add_subcommand("dim", "Dimension of the G1 spline space");
  add_common(dim, cfg);
  dim->add_option("--method", cfg.method, "formula|components|oracle|all")
      ->check(CLI::IsMember({"formula", "components", "oracle", "all"}));

  auto* basis = app.add_subcommand("basis", "Write the structured basis as .g1basis.json");
  add_common(basis, cfg);

  auto* mub = app.add_subcommand("mubasis", "Per-edge mu-basis and syzygy data");
  add_common(mub, cfg);

  auto* check = app.add_subcommand("check", "Verify gluing conditions, separability, and optional basis/surface");
  add_common(check, cfg);
  check->add_option("--basis", cfg.basis_path, "Basis file to verify")->check(CLI::ExistingFile);
  check->add_option("--surface", cfg.surface_path, "Surface control net to verify")->check(CLI::ExistingFile);

  auto* fit = app.add_subcommand("fit", "Least-squares projection of a control net onto the G1 space");
  add_common(fit, cfg);
  fit->add_option("--target", cfg.target_path, "Target control net JSON (default: bilinear net of the mesh)")
      ->check(CLI::ExistingFile);
  fit->add_flag("--exact", cfg.exact, "Solve the normal equations in exact rational arithmetic");

  auto* exp = app.add_subcommand("export", "Write a surface as OBJ or OFF");
  add_common(exp, cfg);
  exp->add_option("--surface", cfg.surface_path, "Surface control net JSON")->check(CLI::ExistingFile);
  exp->add_option("--samples", cfg.samples, "Samples per patch side")->check(CLI::PositiveNumber);
  exp->add_option("--format", cfg.format, "control_net_obj|sampled_obj|sampled_off")
      ->check(CLI::IsMember({"control_net_obj", "sampled_obj", "sampled_off"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    std::cerr << json{{"error", "UsageError"}, {"message", ex.what()}}.dump() << '\n';
    return 2;
  }

  try {
    if (*dim) return run_dim(cfg);
    if (*basis) return run_basis(cfg);
    if (*mub) return run_mubasis(cfg);
    if (*check) return run_check(cfg);
    if (*fit) return run_fit(cfg);
    if (*exp) return run_export(cfg);
  } catch (const Error& ex) {
    std::cerr << json{{"error", ex.code()}, {"message", ex.what()}}.dump() << '\n';
    return 3;
  } catch (const std::exception& ex) {
    std::cerr << json{{"error", "InternalError"}, {"message", ex.what()}}.dump() << '\n';
    return 4;
  }
  return 0;
}
