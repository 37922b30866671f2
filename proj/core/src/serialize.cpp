#include "horolab/serialize.hpp"

#include <cmath>

#include "horolab/error.hpp"

namespace horolab {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::SchemaViolation, what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) bad(where + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(where + ": non-finite number");
  return v;
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where + ": expected an integer");
  return j.get<int>();
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector vector_from(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where + ": expected an array");
  Vector v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = number(j[i], where);
  return v;
}

void check_schema(const Json& j, const std::string& schema) {
  const Json& s = field(j, "schema", "document");
  if (!s.is_string() || s.get<std::string>() != schema)
    bad("document: expected schema '" + schema + "'");
}

HorosphereContext context_from(const Json& j, int n, Vector* tau_out) {
  const Vector tau = vector_from(field(j, "tau", "document"), "tau");
  if (tau.size() != n) bad("tau: expected " + std::to_string(n) + " entries");
  try {
    if (tau_out) *tau_out = tau;
    return compute_margins(BusemannConfig::make(tau));
  } catch (const Error& e) {
    bad("tau: " + e.detail());
  }
}

}  // namespace

Json point_to_json(const Point& p) {
  const Matrix m = p.any_rep().matrix();
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return Json{{"rep", rows}};
}

Point point_from_json(const Json& j, int n) {
  const Json& rows = field(j, "rep", "point");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) bad("point.rep: expected " + std::to_string(n) + " rows");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const Vector r = vector_from(rows[i], "point.rep");
    if (r.size() != n) bad("point.rep: expected " + std::to_string(n) + " columns");
    m.row(i) = r.transpose();
  }
  const double det = m.determinant();
  if (!(std::abs(det - 1.0) <= 1e-6)) bad("point.rep: determinant must be 1");
  return Point::from_rep(SpecialLinear::normalized(m));
}

Json sphere_to_json(const ZSphere& s, const HorosphereContext& ctx) {
  Json j;
  j["schema"] = "horolab.sphere/1";
  j["n"] = ctx.dim();
  j["tau"] = vector_json(ctx.cfg.tau.values());
  j["m"] = s.m;
  j["lipschitz"] = s.lipschitz();
  Json pts = Json::array();
  for (const Point& p : s.points) pts.push_back(point_to_json(p));
  j["points"] = pts;
  return j;
}

SphereFile sphere_from_json(const Json& j) {
  check_schema(j, "horolab.sphere/1");
  SphereFile out;
  out.n = integer(field(j, "n", "document"), "n");
  if (out.n < 2 || out.n > 16) bad("n: must be in [2, 16]");
  const HorosphereContext ctx = context_from(j, out.n, &out.tau);
  out.sphere.m = integer(field(j, "m", "document"), "m");
  if (out.sphere.m != 0 && out.sphere.m != 1) bad("m: must be 0 or 1");
  const Json& pts = field(j, "points", "document");
  if (!pts.is_array()) bad("points: expected an array");
  if (out.sphere.m == 0 && pts.size() != 2) bad("points: an m = 0 sphere has exactly 2 points");
  if (out.sphere.m == 1 && pts.size() < 3) bad("points: an m = 1 loop needs at least 3 points");
  for (const Json& p : pts) {
    Point q = point_from_json(p, out.n);
    if (!(std::abs(ctx.height(q)) <= 1e-7)) bad("points: every point must lie on Z (|h| <= 1e-7)");
    out.sphere.points.push_back(std::move(q));
  }
  return out;
}

SphereFile parse_sphere(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  return sphere_from_json(j);
}

std::vector<double> cell_lipschitz(const FilledDisk& d) {
  std::vector<double> out;
  for (const auto& s : d.simplices) {
    double lip = 0.0;
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b) {
        const double len = (d.vertices[s[a]].pos - d.vertices[s[b]].pos).norm();
        if (len > 0) lip = std::max(lip, distance(d.images[s[a]], d.images[s[b]]) / len);
      }
    out.push_back(lip);
  }
  return out;
}

Json disk_to_json(const FilledDisk& d, const HorosphereContext& ctx, std::uint64_t seed) {
  Json j;
  j["schema"] = "horolab.disk/1";
  j["n"] = ctx.dim();
  j["tau"] = vector_json(ctx.cfg.tau.values());
  j["m"] = d.m;
  j["seed"] = seed;
  j["domain_radius"] = d.domain_radius;
  j["records"] = {{"cubes", d.cubes},
                  {"large_simplices", d.large_simplices},
                  {"shape_constant", d.shape_constant},
                  {"lipschitz", d.lipschitz},
                  {"lipschitz_unit", d.lipschitz_unit},
                  {"input_lipschitz", d.input_lipschitz},
                  {"c_fill", d.c_fill},
                  {"boundary_residual", d.boundary_residual},
                  {"max_abs_h", d.max_abs_h},
                  {"path_length", d.path_length},
                  {"omega_faces", d.omega_faces}};
  Json verts = Json::array();
  for (std::size_t i = 0; i < d.vertices.size(); ++i) {
    const DiskVertex& v = d.vertices[i];
    Json vj{{"pos", vector_json(v.pos)}, {"depth", v.depth}, {"on_boundary", v.on_boundary},
            {"boundary_param", v.boundary_param}, {"deep", v.deep}};
    vj["image"] = point_to_json(d.images[i]);
    vj["h"] = ctx.height(d.images[i]);
    verts.push_back(vj);
  }
  j["vertices"] = verts;
  Json simp = Json::array();
  const std::vector<double> lips = cell_lipschitz(d);
  for (std::size_t i = 0; i < d.simplices.size(); ++i) simp.push_back({{"v", d.simplices[i]}, {"lipschitz", lips[i]}});
  j["simplices"] = simp;
  Json checks = Json::array();
  for (const OmegaCheck& c : d.omega_checks)
    checks.push_back({{"id", c.id}, {"measured", c.measured}, {"bound", c.bound}, {"pass", c.pass}});
  j["omega_checks"] = checks;
  return j;
}

FilledDisk disk_from_json(const Json& j) {
  check_schema(j, "horolab.disk/1");
  FilledDisk d;
  const int n = integer(field(j, "n", "document"), "n");
  if (n < 2 || n > 16) bad("n: must be in [2, 16]");
  d.m = integer(field(j, "m", "document"), "m");
  if (d.m != 0 && d.m != 1) bad("m: must be 0 or 1");
  d.domain_radius = number(field(j, "domain_radius", "document"), "domain_radius");
  const Json& rec = field(j, "records", "document");
  d.cubes = integer(field(rec, "cubes", "records"), "cubes");
  d.large_simplices = integer(field(rec, "large_simplices", "records"), "large_simplices");
  d.shape_constant = number(field(rec, "shape_constant", "records"), "shape_constant");
  d.lipschitz = number(field(rec, "lipschitz", "records"), "lipschitz");
  d.lipschitz_unit = number(field(rec, "lipschitz_unit", "records"), "lipschitz_unit");
  d.input_lipschitz = number(field(rec, "input_lipschitz", "records"), "input_lipschitz");
  d.c_fill = number(field(rec, "c_fill", "records"), "c_fill");
  d.boundary_residual = number(field(rec, "boundary_residual", "records"), "boundary_residual");
  d.max_abs_h = number(field(rec, "max_abs_h", "records"), "max_abs_h");
  d.path_length = number(field(rec, "path_length", "records"), "path_length");
  d.omega_faces = integer(field(rec, "omega_faces", "records"), "omega_faces");
  const Json& verts = field(j, "vertices", "document");
  if (!verts.is_array()) bad("vertices: expected an array");
  for (const Json& v : verts) {
    DiskVertex dv;
    dv.pos = vector_from(field(v, "pos", "vertex"), "vertex.pos");
    if (dv.pos.size() != std::max(1, d.m * 2)) bad("vertex.pos: wrong dimension");
    dv.depth = number(field(v, "depth", "vertex"), "vertex.depth");
    const Json& ob = field(v, "on_boundary", "vertex");
    const Json& deep = field(v, "deep", "vertex");
    if (!ob.is_boolean() || !deep.is_boolean()) bad("vertex: flags must be booleans");
    dv.on_boundary = ob.get<bool>();
    dv.deep = deep.get<bool>();
    dv.boundary_param = number(field(v, "boundary_param", "vertex"), "vertex.boundary_param");
    d.vertices.push_back(dv);
    d.images.push_back(point_from_json(field(v, "image", "vertex"), n));
  }
  const Json& simp = field(j, "simplices", "document");
  if (!simp.is_array()) bad("simplices: expected an array");
  for (const Json& s : simp) {
    const Json& vs = field(s, "v", "simplex");
    if (!vs.is_array() || static_cast<int>(vs.size()) != d.m + 2) bad("simplex.v: wrong vertex count");
    std::vector<int> idx;
    for (const Json& i : vs) {
      const int k = integer(i, "simplex.v");
      if (k < 0 || k >= static_cast<int>(d.vertices.size())) bad("simplex.v: vertex index out of range");
      idx.push_back(k);
    }
    d.simplices.push_back(idx);
  }
  return d;
}

Json omega_to_json(const OmegaComplex& oc) {
  const HorosphereContext& ctx = oc.context();
  Json j;
  j["schema"] = "horolab.omega/1";
  j["n"] = ctx.dim();
  j["tau"] = vector_json(ctx.cfg.tau.values());
  Json verts = Json::array();
  for (int i = 0; i < oc.vertex_count(); ++i) verts.push_back(point_to_json(oc.vertex(i)));
  j["vertices"] = verts;
  Json faces = Json::array();
  for (const auto& [labels, f] : oc.faces()) {
    Json fj{{"labels", labels}, {"h", f.h}, {"anchor_ratio", f.anchor_ratio}, {"max_rho", f.max_rho}, {"t0", f.t0}};
    fj["x"] = point_to_json(f.x);
    if (f.cone) {
      fj["push_time"] = f.cone->opp.push_time;
      fj["contract_time"] = f.cone->opp.contract_time;
      fj["min_gap"] = f.cone->min_gap;
    }
    faces.push_back(fj);
  }
  j["faces"] = faces;
  Json checks = Json::array();
  for (const OmegaCheck& c : oc.checks())
    checks.push_back({{"id", c.id}, {"measured", c.measured}, {"bound", c.bound}, {"pass", c.pass}});
  j["checks"] = checks;
  return j;
}

}  // namespace horolab
