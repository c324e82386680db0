#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sim/linalg.hpp"

namespace sim {

struct Vec3 {
  double x = 0, y = 0, z = 0;
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    return {x / n, y / n, z / n};
  }
};

using Face = std::array<int, 3>;

// Unit-sphere mesh built by `level` midpoint subdivisions of a canonical
// icosahedron. Vertex indexing is prefix-stable across levels: the vertices
// of level k are bitwise equal to the first 10*4^k+2 vertices of level k+1.
struct IcoSphere {
  int level = 0;
  std::vector<Vec3> vertices;
  std::vector<Face> faces;  // counter-clockwise seen from outside

  int vertex_count() const { return int(vertices.size()); }
  int face_count() const { return int(faces.size()); }
};

inline int64_t icosphere_vertex_count(int level) { return 10 * (int64_t(1) << (2 * level)) + 2; }
inline int64_t icosphere_face_count(int level) { return 20 * (int64_t(1) << (2 * level)); }

IcoSphere generate_icosphere(int level);

// Vertex-index lists of a fine mesh grouped by the faces of a coarse mesh of
// the same subdivision family. Patch i covers coarse face i; within a patch,
// vertices follow the row-major barycentric lattice order anchored at the
// face's first corner. Boundary vertices are shared between patches.
struct PatchIndex {
  int fine_level = 0;
  int coarse_level = 0;
  std::vector<std::vector<int>> patches;

  int num_patches() const { return int(patches.size()); }
  int patch_size() const { return patches.empty() ? 0 : int(patches[0].size()); }
  // Number of patches each fine vertex belongs to.
  std::vector<int> vertex_multiplicity(int fine_vertex_count) const;
};

inline int patch_vertex_count(int level_gap) {
  int side = 1 << level_gap;
  return (side + 1) * (side + 2) / 2;
}

PatchIndex build_patching(const IcoSphere& fine, const IcoSphere& coarse);

// Scalar fields / time series sampled on icosphere vertices. First dimension
// is the vertex index (column-major storage keeps one frame contiguous).
struct SurfaceField {
  int mesh_level = 0;
  CMat<float> values;  // V x C
};
using SurfaceSeries = SurfaceField;  // V x T_total

struct LocateResult {
  int face = -1;
  std::array<double, 3> bary{};
};

// Point location by gnomonic (ray-triangle) containment with lowest-face-id
// tie breaking. Precomputes the subdivision hierarchy for O(level) queries.
class MeshLocator {
 public:
  explicit MeshLocator(const IcoSphere& mesh);
  LocateResult locate(const Vec3& unit_point) const;

 private:
  int level_;
  std::vector<std::vector<Vec3>> level_vertices_;  // borrowed geometry per level
  std::vector<std::vector<Face>> level_faces_;
  std::vector<std::vector<int>> vertex_faces_;  // fine level: vertex -> incident faces

  bool bary_in_face(const Vec3& p, int lvl, int face, std::array<double, 3>& out) const;
};

LocateResult locate(const Vec3& unit_point, const IcoSphere& mesh);

// Barycentric resampling of a surface field onto another icosphere.
SurfaceField barycentric_resample(const SurfaceField& src, const IcoSphere& src_mesh,
                                  const IcoSphere& dst_mesh);

// Plain-text export: header `ICOSPHERE v1 level=<k> V=<n> F=<m>`, one vertex
// per line, then one face per line (zero-based indices).
void export_icosphere(const IcoSphere& mesh, std::ostream& out);

namespace detail {
// Midpoint vertex ids for one subdivision step: edge (u,v) of level k gets id
// V_k + rank of (min,max) in the sorted edge list. Purely combinatorial.
std::vector<std::pair<std::pair<int, int>, int>> sorted_edge_midpoints(const std::vector<Face>& faces,
                                                                       int vertex_count);
}  // namespace detail

}  // namespace sim
