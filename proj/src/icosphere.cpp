#include "sim/icosphere.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

#include "sim/errors.hpp"

namespace sim {

namespace {

// Canonical golden-ratio icosahedron, faces wound counter-clockwise when
// viewed from outside.
void base_icosahedron(std::vector<Vec3>& verts, std::vector<Face>& faces) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double raw[12][3] = {
      {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1},
  };
  verts.clear();
  for (auto& v : raw) verts.push_back(Vec3{v[0], v[1], v[2]}.normalized());
  faces = {
      {0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10},  {0, 10, 11},
      {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6},  {7, 1, 8},
      {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},   {3, 8, 9},
      {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},   {9, 8, 1},
  };
}

struct Builder {
  std::vector<Vec3> verts;  // grows by appending midpoints, so levels share a prefix
  std::vector<std::vector<Face>> faces_per_level;

  explicit Builder(int level) {
    std::vector<Face> f0;
    base_icosahedron(verts, f0);
    faces_per_level.push_back(std::move(f0));
    for (int k = 0; k < level; ++k) subdivide(k);
  }

  void subdivide(int k) {
    const auto& faces = faces_per_level[k];
    int vbase = int(verts.size());
    auto mids = detail::sorted_edge_midpoints(faces, vbase);
    std::map<std::pair<int, int>, int> mid_id(mids.begin(), mids.end());
    verts.resize(vbase + mids.size());
    for (const auto& [edge, id] : mids)
      verts[id] = (verts[edge.first] + verts[edge.second]).normalized();

    std::vector<Face> next;
    next.reserve(faces.size() * 4);
    auto mid = [&](int a, int b) { return mid_id.at(std::minmax(a, b)); };
    for (const Face& f : faces) {
      int a = f[0], b = f[1], c = f[2];
      int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({ab, b, bc});
      next.push_back({ca, bc, c});
      next.push_back({ab, bc, ca});
    }
    faces_per_level.push_back(std::move(next));
  }
};

std::array<double, 3> barycentric_on_plane(const Vec3& p, const Vec3& a, const Vec3& b,
                                           const Vec3& c, bool& hits) {
  // Intersect the ray through p with the plane of (a,b,c), then express the
  // hit point in barycentric coordinates via the normal-projected areas.
  Vec3 n = (b - a).cross(c - a);
  double denom = p.dot(n);
  hits = false;
  if (denom <= 0) return {0, 0, 0};  // back-facing or parallel
  double t = a.dot(n) / denom;
  if (t <= 0) return {0, 0, 0};
  Vec3 q = p * t;
  double area = n.dot(n);
  double b0 = (b - q).cross(c - q).dot(n) / area;
  double b1 = (c - q).cross(a - q).dot(n) / area;
  double b2 = 1.0 - b0 - b1;
  hits = true;
  return {b0, b1, b2};
}

}  // namespace

namespace detail {

std::vector<std::pair<std::pair<int, int>, int>> sorted_edge_midpoints(
    const std::vector<Face>& faces, int vertex_count) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(faces.size() * 3);
  for (const Face& f : faces) {
    edges.push_back(std::minmax(f[0], f[1]));
    edges.push_back(std::minmax(f[1], f[2]));
    edges.push_back(std::minmax(f[2], f[0]));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<std::pair<std::pair<int, int>, int>> out;
  out.reserve(edges.size());
  for (size_t i = 0; i < edges.size(); ++i) out.push_back({edges[i], vertex_count + int(i)});
  return out;
}

}  // namespace detail

IcoSphere generate_icosphere(int level) {
  if (level < 0 || level > 8)
    throw BoundsError("generate_icosphere: level must be in [0, 8], got " + std::to_string(level));
  Builder b(level);
  IcoSphere mesh;
  mesh.level = level;
  mesh.vertices = std::move(b.verts);
  mesh.faces = std::move(b.faces_per_level[level]);
  return mesh;
}

std::vector<int> PatchIndex::vertex_multiplicity(int fine_vertex_count) const {
  std::vector<int> mult(fine_vertex_count, 0);
  for (const auto& p : patches)
    for (int v : p) mult[v]++;
  return mult;
}

PatchIndex build_patching(const IcoSphere& fine, const IcoSphere& coarse) {
  if (fine.level <= coarse.level)
    throw ArgumentError("build_patching: fine level must exceed coarse level");
  if (fine.vertex_count() != icosphere_vertex_count(fine.level) ||
      coarse.vertex_count() != icosphere_vertex_count(coarse.level))
    throw ArgumentError("build_patching: meshes must come from generate_icosphere");

  int gap = fine.level - coarse.level;

  // Rebuild the combinatorial subdivision chain between the two levels; the
  // midpoint ids depend only on sorted edge order, not on geometry.
  Builder chain(fine.level);

  // Lattice of vertex ids per coarse face, refined one level at a time.
  // Point (i,j with j<=i) of a side-s lattice sits at barycentric
  // ((s-i), (i-j), j)/s of corners (A,B,C); storage is row-major in i.
  struct Lattice {
    int side;
    std::vector<int> ids;  // (side+1)(side+2)/2 entries
    int& at(int i, int j) { return ids[i * (i + 1) / 2 + j]; }
    int at(int i, int j) const { return ids[i * (i + 1) / 2 + j]; }
  };

  std::vector<Lattice> lattices(coarse.faces.size());
  for (size_t f = 0; f < coarse.faces.size(); ++f) {
    lattices[f].side = 1;
    lattices[f].ids = {coarse.faces[f][0], coarse.faces[f][1], coarse.faces[f][2]};
  }

  for (int step = 0; step < gap; ++step) {
    int lvl = coarse.level + step;
    int vcount = int(icosphere_vertex_count(lvl));
    auto mids = detail::sorted_edge_midpoints(chain.faces_per_level[lvl], vcount);
    std::map<std::pair<int, int>, int> mid_id(mids.begin(), mids.end());
    auto mid = [&](int a, int b) { return mid_id.at(std::minmax(a, b)); };

    for (auto& lat : lattices) {
      Lattice next;
      next.side = lat.side * 2;
      next.ids.resize((next.side + 1) * (next.side + 2) / 2);
      for (int i = 0; i <= next.side; ++i) {
        for (int j = 0; j <= i; ++j) {
          int& slot = next.at(i, j);
          bool iodd = i & 1, jodd = j & 1;
          if (!iodd && !jodd)
            slot = lat.at(i / 2, j / 2);
          else if (!iodd && jodd)
            slot = mid(lat.at(i / 2, (j - 1) / 2), lat.at(i / 2, (j + 1) / 2));
          else if (iodd && !jodd)
            slot = mid(lat.at((i - 1) / 2, j / 2), lat.at((i + 1) / 2, j / 2));
          else
            slot = mid(lat.at((i - 1) / 2, (j - 1) / 2), lat.at((i + 1) / 2, (j + 1) / 2));
        }
      }
      lat = std::move(next);
    }
  }

  PatchIndex index;
  index.fine_level = fine.level;
  index.coarse_level = coarse.level;
  index.patches.reserve(lattices.size());
  for (auto& lat : lattices) index.patches.push_back(std::move(lat.ids));
  return index;
}

MeshLocator::MeshLocator(const IcoSphere& mesh) : level_(mesh.level) {
  Builder chain(mesh.level);
  level_faces_ = std::move(chain.faces_per_level);
  level_vertices_.resize(level_ + 1);
  for (int k = 0; k <= level_; ++k)
    level_vertices_[k].assign(chain.verts.begin(),
                              chain.verts.begin() + icosphere_vertex_count(k));
  vertex_faces_.resize(icosphere_vertex_count(level_));
  const auto& faces = level_faces_[level_];
  for (int f = 0; f < int(faces.size()); ++f)
    for (int v : faces[f]) vertex_faces_[v].push_back(f);
}

bool MeshLocator::bary_in_face(const Vec3& p, int lvl, int face, std::array<double, 3>& out) const {
  const auto& fs = level_faces_[lvl][face];
  const auto& vs = level_vertices_[lvl];
  bool hits = false;
  out = barycentric_on_plane(p, vs[fs[0]], vs[fs[1]], vs[fs[2]], hits);
  if (!hits) return false;
  const double eps = 1e-9;
  return out[0] >= -eps && out[1] >= -eps && out[2] >= -eps;
}

LocateResult MeshLocator::locate(const Vec3& point) const {
  if (std::abs(point.norm() - 1.0) > 1e-9)
    throw ArgumentError("locate: point must be unit-norm");

  // Descend the face hierarchy: child faces of face f at level k are
  // 4f..4f+3 at level k+1. Pick the child with the largest minimum
  // barycentric coordinate, which tolerates the projection wobble near
  // child boundaries.
  std::array<double, 3> bary{};
  int face = -1;
  double best = -1e30;
  for (int f = 0; f < 20; ++f) {
    std::array<double, 3> b;
    bool hits = false;
    b = barycentric_on_plane(point, level_vertices_[0][level_faces_[0][f][0]],
                             level_vertices_[0][level_faces_[0][f][1]],
                             level_vertices_[0][level_faces_[0][f][2]], hits);
    if (!hits) continue;
    double m = std::min({b[0], b[1], b[2]});
    if (m > best) {
      best = m;
      face = f;
      bary = b;
    }
  }
  for (int lvl = 1; lvl <= level_; ++lvl) {
    int parent = face;
    best = -1e30;
    face = -1;
    for (int c = 4 * parent; c < 4 * parent + 4; ++c) {
      bool hits = false;
      const auto& fs = level_faces_[lvl][c];
      const auto& vs = level_vertices_[lvl];
      auto b = barycentric_on_plane(point, vs[fs[0]], vs[fs[1]], vs[fs[2]], hits);
      if (!hits) continue;
      double m = std::min({b[0], b[1], b[2]});
      if (m > best) {
        best = m;
        face = c;
        bary = b;
      }
    }
    if (face < 0) break;
  }

  const double eps = 1e-9;
  if (face < 0 || std::min({bary[0], bary[1], bary[2]}) < -eps) {
    // Projection pushed the point outside the descended branch; fall back to
    // a full scan in face-id order.
    for (int f = 0; f < int(level_faces_[level_].size()); ++f) {
      std::array<double, 3> b;
      if (bary_in_face(point, level_, f, b)) {
        face = f;
        bary = b;
        break;
      }
    }
  } else {
    // Lowest-id tie breaking: a point on a shared edge or vertex is also
    // contained in faces incident to the found face's corners.
    int best_face = face;
    auto best_bary = bary;
    for (int corner : level_faces_[level_][face]) {
      for (int f : vertex_faces_[corner]) {
        if (f >= best_face) continue;
        std::array<double, 3> b;
        if (bary_in_face(point, level_, f, b)) {
          best_face = f;
          best_bary = b;
        }
      }
    }
    face = best_face;
    bary = best_bary;
  }

  if (face < 0) throw NumericError("locate: no containing face found");
  for (auto& b : bary) b = std::max(b, 0.0);
  double s = bary[0] + bary[1] + bary[2];
  for (auto& b : bary) b /= s;
  return {face, bary};
}

LocateResult locate(const Vec3& point, const IcoSphere& mesh) {
  MeshLocator loc(mesh);
  return loc.locate(point);
}

SurfaceField barycentric_resample(const SurfaceField& src, const IcoSphere& src_mesh,
                                  const IcoSphere& dst_mesh) {
  if (src.values.rows() != src_mesh.vertex_count())
    throw ArgumentError("barycentric_resample: field/mesh vertex count mismatch");
  if (!src.values.allFinite())
    throw ArgumentError("barycentric_resample: source field has non-finite values");

  MeshLocator loc(src_mesh);
  SurfaceField dst;
  dst.mesh_level = dst_mesh.level;
  dst.values.resize(dst_mesh.vertex_count(), src.values.cols());
  for (int v = 0; v < dst_mesh.vertex_count(); ++v) {
    auto r = loc.locate(dst_mesh.vertices[v].normalized());
    const Face& f = src_mesh.faces[r.face];
    for (int c = 0; c < src.values.cols(); ++c) {
      dst.values(v, c) = float(r.bary[0] * src.values(f[0], c) + r.bary[1] * src.values(f[1], c) +
                               r.bary[2] * src.values(f[2], c));
    }
  }
  return dst;
}

void export_icosphere(const IcoSphere& mesh, std::ostream& out) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "ICOSPHERE v1 level=%d V=%d F=%d\n", mesh.level,
                mesh.vertex_count(), mesh.face_count());
  out << buf;
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.12g %.12g %.12g\n", v.x, v.y, v.z);
    out << buf;
  }
  for (const Face& f : mesh.faces) {
    std::snprintf(buf, sizeof buf, "%d %d %d\n", f[0], f[1], f[2]);
    out << buf;
  }
}

}  // namespace sim
