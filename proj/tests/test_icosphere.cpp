#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "sim/errors.hpp"
#include "sim/icosphere.hpp"
#include "sim/rng.hpp"

using namespace sim;

namespace {

std::set<std::pair<int, int>> edge_set(const IcoSphere& m) {
  std::set<std::pair<int, int>> edges;
  for (const Face& f : m.faces) {
    edges.insert(std::minmax(f[0], f[1]));
    edges.insert(std::minmax(f[1], f[2]));
    edges.insert(std::minmax(f[2], f[0]));
  }
  return edges;
}

Vec3 random_unit(Rng& rng) {
  while (true) {
    Vec3 v{rng.normal(), rng.normal(), rng.normal()};
    if (v.norm() > 1e-3) return v.normalized();
  }
}

// Independent barycentric containment check for the gnomonic projection of a
// face: solve p*t = b0*V0 + b1*V1 + b2*V2 directly via a 3x3 system.
bool face_contains(const IcoSphere& m, int face, const Vec3& p, double eps = 1e-8) {
  const Face& f = m.faces[face];
  Eigen::Matrix3d A;
  const Vec3& v0 = m.vertices[f[0]];
  const Vec3& v1 = m.vertices[f[1]];
  const Vec3& v2 = m.vertices[f[2]];
  A << v0.x, v1.x, v2.x, v0.y, v1.y, v2.y, v0.z, v1.z, v2.z;
  Vec3 n = (v1 - v0).cross(v2 - v0);
  double denom = p.dot(n);
  if (denom <= 0) return false;
  double t = v0.dot(n) / denom;
  Eigen::Vector3d rhs(p.x * t, p.y * t, p.z * t);
  Eigen::Vector3d b = A.fullPivLu().solve(rhs);
  return b.minCoeff() >= -eps && std::abs(b.sum() - 1.0) < 1e-6;
}

}  // namespace

TEST_CASE("icosphere counts and invariants for levels 0..6") {
  for (int k = 0; k <= 6; ++k) {
    IcoSphere m = generate_icosphere(k);
    CHECK(m.vertex_count() == icosphere_vertex_count(k));
    CHECK(m.face_count() == icosphere_face_count(k));

    for (const Vec3& v : m.vertices) CHECK(std::abs(v.norm() - 1.0) < 1e-12);

    // Euler characteristic and 2-manifoldness.
    auto edges = edge_set(m);
    CHECK(m.vertex_count() - int(edges.size()) + m.face_count() == 2);
    std::map<std::pair<int, int>, int> edge_faces;
    for (const Face& f : m.faces) {
      edge_faces[std::minmax(f[0], f[1])]++;
      edge_faces[std::minmax(f[1], f[2])]++;
      edge_faces[std::minmax(f[2], f[0])]++;
    }
    for (const auto& [e, count] : edge_faces) CHECK(count == 2);

    // Outward counter-clockwise winding.
    for (const Face& f : m.faces) {
      const Vec3 &a = m.vertices[f[0]], &b = m.vertices[f[1]], &c = m.vertices[f[2]];
      Vec3 centroid = (a + b + c) * (1.0 / 3.0);
      CHECK((b - a).cross(c - a).dot(centroid) > 0);
    }
  }
}

TEST_CASE("icosphere level 0/3/6 counts match known values") {
  CHECK(generate_icosphere(0).vertex_count() == 12);
  CHECK(generate_icosphere(0).face_count() == 20);
  CHECK(generate_icosphere(3).vertex_count() == 642);
  CHECK(generate_icosphere(3).face_count() == 1280);
  CHECK(generate_icosphere(6).vertex_count() == 40962);
  CHECK(generate_icosphere(6).face_count() == 81920);
}

TEST_CASE("icosphere rejects out-of-range level") {
  CHECK_THROWS_AS(generate_icosphere(-1), BoundsError);
  CHECK_THROWS_AS(generate_icosphere(9), BoundsError);
}

TEST_CASE("vertex indexing is prefix-stable across levels") {
  IcoSphere a = generate_icosphere(3);
  IcoSphere b = generate_icosphere(4);
  REQUIRE(b.vertex_count() > a.vertex_count());
  for (int i = 0; i < a.vertex_count(); ++i) {
    CHECK(a.vertices[i].x == b.vertices[i].x);
    CHECK(a.vertices[i].y == b.vertices[i].y);
    CHECK(a.vertices[i].z == b.vertices[i].z);
  }
}

TEST_CASE("patching I4/I1 gives 80 patches of 45 vertices covering the mesh") {
  IcoSphere fine = generate_icosphere(4);
  IcoSphere coarse = generate_icosphere(1);
  PatchIndex p = build_patching(fine, coarse);

  CHECK(p.num_patches() == 80);
  // Lattice-point enumeration oracle for the patch size at a 3-level gap.
  int count = 0;
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j <= i; ++j) ++count;
  CHECK(count == 45);
  for (const auto& patch : p.patches) CHECK(int(patch.size()) == count);

  std::set<int> covered;
  for (const auto& patch : p.patches) covered.insert(patch.begin(), patch.end());
  CHECK(int(covered.size()) == fine.vertex_count());
}

TEST_CASE("patch multiplicity: interior 1, edge 2, corner = incident coarse faces") {
  IcoSphere fine = generate_icosphere(3);
  IcoSphere coarse = generate_icosphere(0);
  PatchIndex p = build_patching(fine, coarse);
  auto mult = p.vertex_multiplicity(fine.vertex_count());

  // Coarse vertices are the first 12 fine vertices by prefix stability.
  std::vector<int> coarse_incidence(coarse.vertex_count(), 0);
  for (const Face& f : coarse.faces)
    for (int v : f) coarse_incidence[v]++;
  for (int v = 0; v < coarse.vertex_count(); ++v) CHECK(mult[v] == coarse_incidence[v]);

  int interior = 0, boundary = 0;
  for (int v = coarse.vertex_count(); v < fine.vertex_count(); ++v) {
    CHECK((mult[v] == 1 || mult[v] == 2));
    (mult[v] == 1 ? interior : boundary)++;
  }
  // 80 patches x 45 slots = coarse corners + 2*edge vertices + interior.
  int corner_slots = 0;
  for (int c : coarse_incidence) corner_slots += c;
  CHECK(interior + 2 * boundary + corner_slots == p.num_patches() * 45);
}

TEST_CASE("patching rejects equal or inverted levels") {
  IcoSphere a = generate_icosphere(2);
  IcoSphere b = generate_icosphere(2);
  CHECK_THROWS_AS(build_patching(a, b), ArgumentError);
  IcoSphere fine = generate_icosphere(3);
  CHECK_THROWS_AS(build_patching(a, fine), ArgumentError);
}

TEST_CASE("patch vertex order is deterministic") {
  IcoSphere fine = generate_icosphere(3);
  IcoSphere coarse = generate_icosphere(1);
  PatchIndex p1 = build_patching(fine, coarse);
  PatchIndex p2 = build_patching(fine, coarse);
  CHECK(p1.patches == p2.patches);
  // Row-major lattice: first entry is the coarse face's first corner.
  for (int f = 0; f < coarse.face_count(); ++f) CHECK(p1.patches[f][0] == coarse.faces[f][0]);
}

TEST_CASE("locate finds centroids and vertices") {
  IcoSphere m = generate_icosphere(2);
  MeshLocator loc(m);

  for (int f = 0; f < m.face_count(); f += 37) {
    Vec3 c = (m.vertices[m.faces[f][0]] + m.vertices[m.faces[f][1]] + m.vertices[m.faces[f][2]])
                 .normalized();
    auto r = loc.locate(c);
    CHECK(r.face == f);
    for (double b : r.bary) CHECK(b == doctest::Approx(1.0 / 3).epsilon(1e-6));
  }

  for (int v = 0; v < m.vertex_count(); v += 11) {
    auto r = loc.locate(m.vertices[v]);
    const Face& f = m.faces[r.face];
    CHECK((f[0] == v || f[1] == v || f[2] == v));
    double bmax = std::max({r.bary[0], r.bary[1], r.bary[2]});
    CHECK(bmax == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("locate rejects non-unit input") {
  IcoSphere m = generate_icosphere(1);
  CHECK_THROWS_AS(locate(Vec3{0.5, 0, 0}, m), ArgumentError);
}

TEST_CASE("locate: 1000 random points land in containing faces") {
  IcoSphere m = generate_icosphere(3);
  MeshLocator loc(m);
  Rng rng(20240901);
  for (int i = 0; i < 1000; ++i) {
    Vec3 p = random_unit(rng);
    auto r = loc.locate(p);
    CHECK(face_contains(m, r.face, p));
    CHECK(r.bary[0] + r.bary[1] + r.bary[2] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::min({r.bary[0], r.bary[1], r.bary[2]}) >= 0.0);
  }
}

TEST_CASE("resampling: constants exact, identity on same mesh, linear field accurate") {
  IcoSphere i5 = generate_icosphere(5);
  IcoSphere i6 = generate_icosphere(6);

  SurfaceField constant;
  constant.mesh_level = 5;
  constant.values = CMat<float>::Constant(i5.vertex_count(), 1, 3.25f);
  SurfaceField up = barycentric_resample(constant, i5, i6);
  CHECK(up.values.rows() == i6.vertex_count());
  CHECK((up.values.array() == 3.25f).all());

  SurfaceField linear;
  linear.mesh_level = 5;
  linear.values.resize(i5.vertex_count(), 1);
  for (int v = 0; v < i5.vertex_count(); ++v) linear.values(v, 0) = float(i5.vertices[v].x);

  SurfaceField same = barycentric_resample(linear, i5, i5);
  double max_same = (same.values - linear.values).cwiseAbs().maxCoeff();
  CHECK(max_same < 1e-6);

  SurfaceField fine = barycentric_resample(linear, i5, i6);
  double max_err = 0;
  for (int v = 0; v < i6.vertex_count(); ++v)
    max_err = std::max(max_err, std::abs(double(fine.values(v, 0)) - i6.vertices[v].x));
  CHECK(max_err < 5e-3);
}

TEST_CASE("mesh export header and counts") {
  IcoSphere m = generate_icosphere(1);
  std::ostringstream out;
  export_icosphere(m, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "ICOSPHERE v1 level=1 V=42 F=80");
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 42 + 80);
}
