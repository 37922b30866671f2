#pragma once

// Flat cycles on the horosphere: the intersection of a flat through a point at
// height r with Z, reached by projecting the flat's boundary directions.

#include <utility>
#include <vector>

#include "horolab/horosphere.hpp"

namespace horolab {

struct FlatSphere {
  Point x;                                     // centre, h(x) = r
  double r = 0.0;
  Flat flat;                                   // p F0 through x
  std::vector<CartanVector> directions;        // sampled unit directions of the flat
  std::vector<Point> points;                   // i_x of each direction
  std::vector<Point> local_points;             // the same points translated by p^-1 (x at the base point)
  std::vector<std::pair<int, int>> neighbours; // pairs used for the Lipschitz record
  double lipschitz = 0.0;                      // max d / angle over neighbours
  double max_abs_h = 0.0;
};

/// Flat through the base point whose boundary chambers are all opposite the standard chamber
/// (best of `candidates` random rotations, fixed seed).
Flat stored_opposite_flat(int n, int candidates = 32);

/// Requires h(x) > 1. For n = 2 the sphere has 2 points, for n = 3 it is a loop of `samples`
/// points; for n >= 4 directions are a Fibonacci-type sample of the unit sphere in the flat.
FlatSphere flat_sphere_on_Z(const Point& x, const HorosphereContext& ctx, int samples = 48);

/// Point [exp(r tau)], at height r.
Point point_at_height(const HorosphereContext& ctx, double r);

struct ZMeshDistance {
  double distance = 0.0;  // shortest path in the mesh graph
  int nodes = 0;
  int edges = 0;
};

/// Graph distance between points a and b of `nodes` (indices) on the mesh made of all chords
/// between the given points of Z, each chord a geodesic retracted to Z and sampled `chord_samples`
/// times. An upper bound for the intrinsic distance in Z. With `level` != 0 the nodes are taken to
/// lie on the translated horosphere h = level (as for FlatSphere::local_points with level = -r).
ZMeshDistance z_mesh_distance(const std::vector<Point>& nodes, int a, int b, const HorosphereContext& ctx,
                              int chord_samples = 24, double level = 0.0);

}  // namespace horolab
