#pragma once

#include "opq/algebras.hpp"
#include "opq/complex.hpp"
#include "opq/fieldtheory.hpp"

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace opq {

/// Oriented triangulated surface, possibly with boundary. Vertices are 0..vertices-1;
/// vertex_order lists them in the global order used by cup products.
struct TriangulatedSurface {
  std::size_t vertices = 0;
  std::vector<std::size_t> vertex_order;
  std::vector<std::array<std::size_t, 3>> triangles;
  std::vector<std::array<std::size_t, 2>> boundary_edges;
};

struct SurfaceReport {
  std::vector<std::string> problems;
  [[nodiscard]] bool ok() const { return problems.empty(); }
};

SurfaceReport validate_surface(const TriangulatedSurface &s);

using Edge = std::array<std::size_t, 2>;

/// Relative cochain bookkeeping for a valid surface. Simplices are stored with their
/// vertices sorted by the vertex order; cochain coordinates are values on these
/// ordered simplices.
struct SurfaceCochains {
  std::vector<std::size_t> position;                 // vertex -> place in vertex_order
  std::vector<std::array<std::size_t, 3>> triangles; // ordered, same sequence as the input
  std::vector<int> orientation;                      // +1 when the input triangle is an even permutation
  std::vector<Edge> interior_edges;                  // ordered, sorted by positions
  std::vector<std::size_t> interior_vertices;        // sorted by position
  std::map<Edge, std::size_t> edge_index;            // ordered edge -> index in interior_edges
  std::map<std::size_t, std::size_t> vertex_index;   // vertex -> index in interior_vertices
  std::map<std::array<std::size_t, 3>, std::size_t> triangle_index;

  /// Flat index in cs_complex: triangles (degree -1), then edges (0), then vertices (1).
  [[nodiscard]] std::size_t flat_triangle(std::size_t t) const { return t; }
  [[nodiscard]] std::size_t flat_edge(std::size_t e) const { return triangles.size() + e; }
  [[nodiscard]] std::size_t flat_vertex(std::size_t v) const {
    return triangles.size() + interior_edges.size() + v;
  }
  /// Edge with its endpoints sorted by the vertex order.
  [[nodiscard]] Edge ordered(std::size_t a, std::size_t b) const {
    return position[a] < position[b] ? Edge{a, b} : Edge{b, a};
  }
};

/// Throws StructuralError when the surface is invalid.
SurfaceCochains surface_cochains(const TriangulatedSurface &s);

/// Shifted relative cochains: C² in degree -1, C¹ in degree 0, C⁰ in degree 1, differential -δ.
ChainComplex cs_complex(const TriangulatedSurface &s);
/// cs_complex with the antisymmetrized cup-product pairing.
PresymplecticComplex cs_presymplectic(const TriangulatedSurface &s);

struct SurfaceMorphism {
  std::string name;
  std::string src;
  std::string tgt;
  std::vector<std::size_t> vertex_map;
};

/// Throws StructuralError naming the offending simplex unless the vertex map is injective,
/// simplicial, orientation- and order-preserving and satisfies the star condition.
void check_surface_morphism(const TriangulatedSurface &src, const TriangulatedSurface &tgt,
                            const std::vector<std::size_t> &vertex_map);
/// Extension by zero as a flat matrix cs_complex(src) -> cs_complex(tgt).
RationalMatrix extension_by_zero(const TriangulatedSurface &src, const TriangulatedSurface &tgt,
                                 const std::vector<std::size_t> &vertex_map);
/// Image triangles of a morphism (as vertex sets), the interior of its image.
std::set<std::array<std::size_t, 3>> image_interior(const TriangulatedSurface &src,
                                                    const std::vector<std::size_t> &vertex_map);

struct SurfaceDiagram {
  std::map<std::string, TriangulatedSurface> surfaces;
  std::vector<SurfaceMorphism> morphisms;
};

/// Morphisms of the diagram closed under composition (composites are named "g*f").
std::vector<SurfaceMorphism> composition_closure(const SurfaceDiagram &d);

/// Linear Chern-Simons theory: Heisenberg algebras of the shifted cochains, actions by
/// extension by zero, morphisms orthogonal when their image interiors are disjoint.
FieldTheory build_bcs(const SurfaceDiagram &d);
/// Its truncated quantization.
FieldTheory build_acs(const SurfaceDiagram &d, std::size_t n);

struct HomologyCcrReport {
  std::size_t h0_lie = 0;  // dim H_0 of the shifted cochains
  std::size_t ccr_dim = 0; // dim of the truncated CCR algebra of (H_0, induced pairing)
  std::size_t h0_quantized = 0;
  std::size_t induced_rank = 0;
  [[nodiscard]] bool injective() const { return induced_rank == ccr_dim; }
};

/// Compares the truncated CCR algebra of degree-0 homology with H_0 of the quantized algebra.
HomologyCcrReport compare_h0_with_ccr(const TriangulatedSurface &s, std::size_t n);

} // namespace opq
