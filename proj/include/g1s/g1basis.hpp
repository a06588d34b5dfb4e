#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "g1s/linalg.hpp"
#include "g1s/mesh.hpp"
#include "g1s/syzygy.hpp"

namespace g1s {

// Coefficient layout of S_k^r over a mesh: face-major, native (i, j) grids
// with i along s and j along t, each of size (m+1)^2, m = 2k - r.
struct SplineLayout {
  int k = 0, r = 0, m = 0, num_faces = 0;

  SplineLayout() = default;
  SplineLayout(int k_, int r_, int faces) : k(k_), r(r_), m(2 * k_ - r_), num_faces(faces) {}

  int side() const { return m + 1; }
  int face_size() const { return side() * side(); }
  int total() const { return face_size() * num_faces; }
  int index(int face, int i, int j) const { return face * face_size() + i * side() + j; }
  int index(const CornerFrame& fr, int i, int j) const {
    const auto [ni, nj] = fr.to_native(i, j, m);
    return index(fr.face, ni, nj);
  }
};

// Spline on a quad mesh stored as a sparse coefficient vector over SplineLayout.
struct SplineFunction {
  SplineLayout layout;
  SparseRow coeffs;

  Rational coefficient(int face, int i, int j) const;
  std::vector<std::vector<Rational>> grid(int face) const;
  bool is_zero() const { return coeffs.empty(); }
  // Faces carrying a nonzero coefficient, ascending.
  std::vector<int> support_faces() const;

  static SplineFunction from_grids(const SplineLayout& layout,
                                   const std::map<int, std::vector<std::vector<Rational>>>& grids);
};

// [c00, c10, c01, c11] per star face, in the native-orientation frame at the vertex.
struct TaylorJet {
  int vertex = -1;
  std::vector<int> faces;
  std::vector<std::array<Rational, 4>> blocks;
};

struct HSpace {
  int vertex = -1;
  int dimension = 0;
  std::vector<int> faces;        // star faces, walk order
  std::vector<SparseRow> basis;  // jet vectors of length 4F (RREF rows)
};

struct BasisSet {
  SplineLayout layout;
  std::vector<SplineFunction> functions;
  std::vector<std::string> tags;  // "vertex:<id>", "edge:<a>-<b>", "face:<f>", "free"

  std::map<std::string, int> counts_by_kind() const;
  int size() const { return static_cast<int>(functions.size()); }
};

// ---------------------------------------------------------------- operators

TaylorJet taylor_vertex(const QuadMesh& mesh, const SplineFunction& f, int vertex);
// Keeps the two coefficient rows of face sigma along edge e (zero map if e is not an edge of sigma).
SplineFunction restrict_edge(const QuadMesh& mesh, const SplineFunction& f, int e, int sigma);
// Keeps the coefficients of sigma within distance one of its boundary.
SplineFunction restrict_face(const SplineFunction& f, int sigma);

// Exact linear constraints of S^{1,r}_k across interior edge e (traces and the
// denominator-cleared derivative relation, coefficient-wise per piece).
std::vector<SparseRow> edge_constraint_rows(const QuadMesh& mesh, int e, const SplineLayout& layout);

struct EdgeResidual {
  UniSpline trace;       // f1(u, 0) - f0(0, u)
  UniSpline derivative;  // c dv f1 - b du f0 - a dv f0 (pieces, no smoothness claim)
  bool is_zero() const { return trace.is_zero() && derivative.is_zero(); }
};
std::map<int, EdgeResidual> g1_residual(const QuadMesh& mesh, const SplineFunction& f);

// Two-face spline built from a0 and a relaxed syzygy (A, B, C) along edge e.
SplineFunction theta_edge(const QuadMesh& mesh, int e, const Rational& a0, const SplineSyzTriple& s,
                          const SplineLayout& layout);

// Relaxed syzygy basis Syz^{r-1,r,r}_k of an edge (structured, with exact fallback).
std::vector<SplineSyzTriple> relaxed_syzygy_basis(const GluingTriple& g, int k, int r);

struct SeparabilityReport {
  int rank = 0;
  int required = 0;
  bool separable = false;
};
SeparabilityReport separability(const QuadMesh& mesh, int e, int k, int r);
int separability_bound(const GluingTriple& g, int r);
// Smallest k in [kmin, kmax] at which edge e is separable, or -1.
int separability_degree(const QuadMesh& mesh, int e, int r, int kmin, int kmax);

std::vector<SplineFunction> edge_basis(const QuadMesh& mesh, int e, int k, int r);
HSpace h_space(const QuadMesh& mesh, int vertex, int k, int r);
std::vector<SplineFunction> vertex_basis(const QuadMesh& mesh, int vertex, int k, int r);
std::vector<SplineFunction> face_basis(const QuadMesh& mesh, int face, int k, int r);
BasisSet full_basis(const QuadMesh& mesh, int k, int r);

enum class DimensionMethod { Formula, Components, Oracle };

struct DimensionReport {
  int total = 0;
  int vertex = 0;
  int edge = 0;
  int face = 0;  // face interiors plus free boundary slots
  int face_interior = 0;
  int free_boundary = 0;
  std::map<int, int> per_vertex;  // vertex index -> dim H
  std::map<int, int> per_edge;    // edge index -> dim E
};

int oracle_dimension(const QuadMesh& mesh, int k, int r);
int formula_dimension(const QuadMesh& mesh, int k, int r);
DimensionReport components_dimension(const QuadMesh& mesh, int k, int r);
int dimension(const QuadMesh& mesh, int k, int r, DimensionMethod method);

struct BasisCheck {
  bool independent = false;
  bool zero_residual = false;
  bool edge_jets_zero = false;
  int rank = 0;
};
BasisCheck check_basis(const QuadMesh& mesh, const BasisSet& basis);
// Exact membership of f in the span of the basis.
bool in_span(const BasisSet& basis, const SplineFunction& f);

// Worker count from G1_THREADS (default: hardware concurrency).
int worker_count();

}  // namespace g1s
