#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "horolab/error.hpp"
#include "horolab/serialize.hpp"
#include "horolab/suites.hpp"

using namespace horolab;

namespace {

HorosphereContext context3() {
  Vector v(3);
  v << 1.0, 0.0, -1.0;
  return compute_margins(BusemannConfig::make(v / std::sqrt(2.0)));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::NumericalFailure;
}

}  // namespace

TEST(Exploded, TriangleTopCells) {
  const ExplodedComplex cx = build_exploded(2);
  const auto top = cx.top_cells();
  ASSERT_EQ(top.size(), 10u);
  int by_face_size[4] = {0, 0, 0, 0};
  for (int c : top) ++by_face_size[cx.faces()[cx.cells()[c].face].size()];
  EXPECT_EQ(by_face_size[3], 1);
  EXPECT_EQ(by_face_size[2], 3);
  EXPECT_EQ(by_face_size[1], 6);
}

TEST(Exploded, CellCountsByDimension) {
  EXPECT_EQ(build_exploded(1).top_cells().size(), 3u);  // middle segment plus two vertex collars
  EXPECT_EQ(build_exploded(0).top_cells().size(), 1u);
  EXPECT_GT(build_exploded(3).top_cells().size(), 10u);
}

TEST(Exploded, ProjectionsAtSpecialPoints) {
  const ExplodedComplex cx = build_exploded(2);
  for (int v = 0; v < 3; ++v) {
    Vector q = Vector::Zero(3);
    q(v) = 1.0;
    EXPECT_LE((cx.p1(q) - q).norm(), 1e-12);
    EXPECT_LE((cx.p2(q) - q).norm(), 1e-12);
  }
  const Vector b = Vector::Constant(3, 1.0 / 3.0);
  EXPECT_LE((cx.p2(b) - b).norm(), 1e-12);
  EXPECT_LE((cx.p1(b) - b).norm(), 1e-12);
  Vector outside(3);
  outside << 1.2, -0.1, -0.1;
  EXPECT_EQ(kind_of([&] { cx.locate(outside); }), ErrorKind::InvalidArgument);
}

TEST(Exploded, ProjectionsLandInSimplexAndAreLipschitz) {
  const ExplodedComplex cx = build_exploded(2);
  Rng rng(3);
  for (int s = 0; s < 500; ++s) {
    Vector q = (rng.normal_vector(3).array().abs() + 1e-3).matrix();
    q /= q.sum();
    const ExplodedPoint ep = cx.locate(q);
    EXPECT_NEAR(ep.p.sum(), 1.0, 1e-12);
    EXPECT_GE(ep.p.minCoeff(), -1e-12);
    EXPECT_NEAR(ep.y.sum(), 1.0, 1e-12);
    EXPECT_LE(((1.0 - cx.collar()) * ep.y + cx.collar() * ep.p - q).norm(), 1e-10);
  }
  const ProjectionLipschitz lip = measure_projection_lipschitz(cx, 2000, 5);
  EXPECT_TRUE(std::isfinite(lip.p1));
  EXPECT_LT(lip.p1, 50.0);
  EXPECT_LT(lip.p2, 50.0);
}

TEST(OmegaInfty, VertexAnchorsAtHeightOne) {
  const HorosphereContext ctx = context3();
  Rng rng(7);
  std::vector<Point> z;
  for (int i = 0; i < 3; ++i) z.push_back(retract_to_Z(sample_ball(base_point(3), 1.5, rng), ctx));
  OmegaComplex oc(ctx, 11);
  for (const Point& p : z) oc.add_vertex(p);
  for (int i = 0; i < 3; ++i) {
    const FaceData& f = oc.face({i});
    EXPECT_NEAR(f.h, 1.0, 1e-9);
    EXPECT_LT(f.max_rho, 1.0);
    ASSERT_TRUE(f.b.has_value());
  }
  const FaceData& edge = oc.face({0, 1});
  EXPECT_TRUE(edge.cone.has_value());
  // Omega at a vertex weight sits on Z
  Vector w(2);
  w << 1.0, 0.0;
  EXPECT_NEAR(ctx.height(oc.omega({0, 1}, w)), 0.0, 1e-7);
  w << 0.5, 0.5;
  EXPECT_NEAR(ctx.height(oc.omega({0, 1}, w)), 0.0, 1e-7);
  for (const OmegaCheck& c : oc.checks()) EXPECT_TRUE(c.pass) << c.id << " " << c.measured << " " << c.bound;
}

TEST(OmegaInfty, RejectsOffZVertex) {
  OmegaComplex oc(context3(), 1);
  EXPECT_ANY_THROW(oc.add_vertex(push(base_point(3), context3().cfg.tau, 0.5)));
}

TEST(Whitney, DegenerateSphereFillsConstantly) {
  const HorosphereContext ctx = context3();
  ZSphere s;
  s.m = 0;
  s.points = {base_point(3), base_point(3)};
  const FilledDisk d = whitney_fill(s, ctx);
  EXPECT_LE(d.boundary_residual, 1e-9);
  for (const Point& p : d.images) EXPECT_LE(distance(p, base_point(3)), 1e-6);
}

TEST(Whitney, PathFillOnZ) {
  const HorosphereContext ctx = context3();
  Rng rng(mix_seed(2024, 3));
  const auto [a, b] = z_pair_at_distance(ctx, 3.0, rng);
  EXPECT_NEAR(distance(a, b), 3.0, 1e-8);
  ZSphere s;
  s.m = 0;
  s.points = {a, b};
  WhitneyOptions opts;
  const FilledDisk d = whitney_fill(s, ctx, opts);
  EXPECT_LE(d.boundary_residual, 1e-9);
  EXPECT_LE(d.max_abs_h, 1e-7);
  EXPECT_GE(d.path_length, distance(a, b) - 1e-9);
  EXPECT_EQ(d.images.size(), d.vertices.size());
  for (const auto& e : d.simplices) EXPECT_EQ(e.size(), 2u);
}

TEST(Whitney, UnipotentLoopLipschitzScaling) {
  Rng rng(4);
  for (double lip : {1.0, 2.0, 4.0}) {
    Rng r = rng.split(static_cast<std::uint64_t>(lip));
    const ZSphere s = unipotent_loop(3, lip, 24, r);
    EXPECT_NEAR(s.lipschitz(), lip, 1e-9 * lip);
    EXPECT_EQ(s.points.size(), 24u);
  }
}

TEST(Serialize, PointRoundTripAndViolations) {
  Rng rng(5);
  const Point p = sample_ball(base_point(3), 2.0, rng);
  EXPECT_LE(distance(point_from_json(point_to_json(p), 3), p), 1e-12);
  Json bad = point_to_json(p);
  bad["rep"][0][0] = 1e6;
  EXPECT_EQ(kind_of([&] { point_from_json(bad, 3); }), ErrorKind::SchemaViolation);
  EXPECT_EQ(kind_of([&] { point_from_json(point_to_json(p), 4); }), ErrorKind::SchemaViolation);
}

TEST(Serialize, SphereFixtureParses) {
  const SphereFile f = parse_sphere(slurp(HOROLAB_TEST_DATA "/fixtures/sl3_m0.sphere.json"));
  EXPECT_EQ(f.n, 3);
  EXPECT_EQ(f.sphere.m, 0);
  EXPECT_EQ(f.sphere.points.size(), 2u);
  const SphereFile g = parse_sphere(slurp(HOROLAB_TEST_DATA "/fixtures/sl4_m1.sphere.json"));
  EXPECT_EQ(g.n, 4);
  EXPECT_EQ(g.sphere.m, 1);
}

TEST(Serialize, SphereSchemaViolations) {
  Json j = Json::parse(slurp(HOROLAB_TEST_DATA "/fixtures/sl3_m0.sphere.json"));
  Json wrong_schema = j;
  wrong_schema["schema"] = "horolab.sphere/9";
  EXPECT_EQ(kind_of([&] { sphere_from_json(wrong_schema); }), ErrorKind::SchemaViolation);
  Json off_z = j;
  off_z["points"][0] = point_to_json(push(base_point(3), context3().cfg.tau, 0.1));
  EXPECT_EQ(kind_of([&] { sphere_from_json(off_z); }), ErrorKind::SchemaViolation);
  Json missing = j;
  missing.erase("points");
  EXPECT_EQ(kind_of([&] { sphere_from_json(missing); }), ErrorKind::SchemaViolation);
  EXPECT_EQ(kind_of([] { parse_sphere("{not json"); }), ErrorKind::SchemaViolation);
}

TEST(Serialize, DiskRoundTrip) {
  const Json golden = Json::parse(slurp(HOROLAB_TEST_DATA "/golden/sl3_m0.disk.json"));
  const FilledDisk d = disk_from_json(golden);
  EXPECT_EQ(d.m, 0);
  EXPECT_EQ(d.images.size(), d.vertices.size());
  const Json again = disk_to_json(d, context3(), golden["seed"].get<std::uint64_t>());
  EXPECT_EQ(again["records"].dump(), golden["records"].dump());
  ASSERT_EQ(again["vertices"].size(), golden["vertices"].size());
  for (std::size_t i = 0; i < d.vertices.size(); ++i) {
    EXPECT_EQ(again["vertices"][i]["pos"], golden["vertices"][i]["pos"]);
    EXPECT_LE(distance(point_from_json(again["vertices"][i]["image"], 3),
                       point_from_json(golden["vertices"][i]["image"], 3)),
              1e-12);
  }
}
