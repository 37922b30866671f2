#pragma once

// JSON artifacts. Schemas (versioned, documented in the README):
//   horolab.sphere/1  input spheres for the fill command
//   horolab.disk/1    filled disks (m = 0 paths, m = 1 disks)
//   horolab.omega/1   Omega_infty data: vertices, anchors x_delta, per-face records
// Points are stored through a representative g (rows), [g] = g g^T.

#include <string>

#include <nlohmann/json.hpp>

#include "horolab/whitney.hpp"

namespace horolab {

using Json = nlohmann::ordered_json;

Json point_to_json(const Point& p);
/// Throws SchemaViolation on a malformed matrix (wrong shape, non-finite, det far from 1).
Point point_from_json(const Json& j, int n);

struct SphereFile {
  int n = 0;
  Vector tau;
  ZSphere sphere;
};

Json sphere_to_json(const ZSphere& s, const HorosphereContext& ctx);
/// Validates the horolab.sphere/1 schema including h = 0 +- 1e-7 on every point; throws SchemaViolation.
SphereFile sphere_from_json(const Json& j);
SphereFile parse_sphere(const std::string& text);

Json disk_to_json(const FilledDisk& d, const HorosphereContext& ctx, std::uint64_t seed);
/// Inverse of disk_to_json for the stored fields (schema-checked).
FilledDisk disk_from_json(const Json& j);

Json omega_to_json(const OmegaComplex& oc);

/// Per-simplex record: max over edges of d(image) / |domain edge|.
std::vector<double> cell_lipschitz(const FilledDisk& d);

}  // namespace horolab
