#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "poseval/geometry.hpp"
#include "poseval/metrics.hpp"
#include "poseval/rng.hpp"

// Shared test fixtures: procedurally generated point sets whose vertex sets
// are exactly closed under their symmetry groups (and centered at the
// origin), random pose/mesh generators, a gamma sampler used as the
// Nakagami oracle, and a point-splat depth renderer.
namespace fixtures {

using poseval::DepthMap;
using poseval::Mat3;
using poseval::PinholeCamera;
using poseval::Points;
using poseval::Pose;
using poseval::Rng;
using poseval::Vec3;

// Two rings of `per_ring` vertices at integer multiples of 360/per_ring
// degrees, at heights +-half_height. With per_ring = 360 the set is closed
// under the full 1-degree cylinder group (720 elements).
Points cylinder_points(double radius = 0.045, double half_height = 0.075,
                       int per_ring = 360);

// Corners, edge midpoints and face centers of a box: 26 points, closed
// under the three axis half-turns.
Points cuboid_points(double hx = 0.05, double hy = 0.035, double hz = 0.10);

// Elliptic rings at paired +-z heights; closed under the vertical
// half-turn when per_ring is even.
Points bottle_points(double a = 0.03, double b = 0.045, double half_height = 0.07,
                     int rings = 4, int per_ring = 12);

// Uniform cloud in a centered box with the given half-extents.
Points random_points(Rng& rng, int count, const Vec3& half_extents);

Pose random_pose(Rng& rng, double max_translation = 1.0);

// Marsaglia-Tsang gamma variate; with sqrt() this is the footnote
// construction for Nakagami samples.
double gamma_sample(Rng& rng, double shape, double scale);

double nakagami_sample(Rng& rng, double m, double omega);

// Writes vertices as an ASCII OBJ in millimeters (the on-disk convention).
void write_obj(const std::filesystem::path& path, const Points& points_m);

// Splats the model points seen from `pose` into a depth map, keeping the
// smallest depth per pixel. Uses the same rounding as the refinement.
DepthMap render_depth(const PinholeCamera& cam, const Pose& pose,
                      const Points& model_points);

// Unique writable scratch directory under the system temp path.
std::filesystem::path scratch_dir(const std::string& label);

}  // namespace fixtures
