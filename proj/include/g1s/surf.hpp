#pragma once

#include <array>
#include <string>
#include <vector>

#include "g1s/g1basis.hpp"

namespace g1s {

using Vec3 = std::array<double, 3>;

// Per-face (m+1) x (m+1) grids of 3D control points, stored over SplineLayout.
struct ControlNet {
  SplineLayout layout;
  std::vector<Vec3> points;  // size layout.total()

  static ControlNet zero(const SplineLayout& layout);
  Vec3& at(int face, int i, int j) { return points[layout.index(face, i, j)]; }
  const Vec3& at(int face, int i, int j) const { return points[layout.index(face, i, j)]; }
};

// Surface with one spline per coordinate. Exact coordinates are kept when the
// surface was produced by an exact projection.
struct ParametricSurface {
  ControlNet net;
  bool has_exact = false;
  std::array<SplineFunction, 3> exact;

  const SplineLayout& layout() const { return net.layout; }
};

// Point and first partial derivatives of face patch at native (u, v) in [0, 1]^2.
Vec3 eval(const ParametricSurface& s, int face, double u, double v);
std::array<Vec3, 3> eval_with_derivatives(const ParametricSurface& s, int face, double u, double v);
// Exact point on a surface carrying exact coordinates.
std::array<Rational, 3> eval_exact(const ParametricSurface& s, int face, const Rational& u, const Rational& v);

struct Projection {
  ParametricSurface surface;
  double residual_norm = 0;     // Euclidean norm of target - projection over all coefficients
  std::vector<Vec3> weights;    // coefficients on the basis functions
  std::vector<std::string> warnings;
};

// Least-squares projection of a control net onto span(basis) in the
// Euclidean inner product of stacked coefficient vectors.
Projection project_g1(const ControlNet& target, const BasisSet& basis, bool exact = false);

// Largest G1 defect over sampled points of every interior edge, relative to
// the diameter of the control net: trace mismatch and the derivative relation.
double max_g1_residual(const QuadMesh& mesh, const ParametricSurface& s, int samples_per_edge = 33);

enum class ExportMode { ControlNetObj, SampledObj, SampledOff };
ExportMode parse_export_mode(const std::string& name);

struct ExportStats {
  int vertices = 0;
  int faces = 0;
  int merged = 0;  // shared boundary samples emitted once
};

// OBJ/OFF text of a surface. Sampled modes emit (samples+1)^2 points per face;
// samples on shared vertices and edges are emitted once when both faces agree.
std::string export_surface(const QuadMesh& mesh, const ParametricSurface& s, ExportMode mode, int samples,
                           ExportStats* stats = nullptr);

// JSON: {"k", "r", "mesh_hash"?, "faces": {face: [[[x, y, z], ...], ...]}}.
std::string control_net_to_json(const ControlNet& net, const std::string& mesh_hash = "");
ControlNet control_net_from_json(const std::string& text, int num_faces);

// Control net with face grids interpolating the mesh vertex positions
// bilinearly (zero positions when absent).
ControlNet bilinear_net(const QuadMesh& mesh, const SplineLayout& layout);

}  // namespace g1s
