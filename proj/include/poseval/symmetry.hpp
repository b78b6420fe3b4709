#pragma once

#include <string>
#include <vector>

#include "poseval/geometry.hpp"

namespace poseval {

// Geometric symmetry categories. Object canonical frame: z is vertical,
// x points to the object's front; mesh ingestion re-orients models that
// use another convention (see io::ModelConfig).
enum class SymmetryClass { Cylinder, Cuboid, Bottle, NoSymmetry };

const char* to_string(SymmetryClass c);
SymmetryClass symmetry_class_from_string(const std::string& name);

// Discrete set of symmetry-preserving rotations about the object origin.
// The identity is always element 0.
struct SymmetrySet {
  SymmetryClass cls = SymmetryClass::NoSymmetry;
  double increment_deg = 0.0;
  std::vector<Mat3> rotations;

  int size() const { return static_cast<int>(rotations.size()); }
};

// Cylinder: the full vertical sweep at `increment_deg`, with and without a
// 180-degree flip about the horizontal x axis (2 * 360/increment elements).
// Cuboid: identity plus the three axis half-turns (Klein four-group).
// Bottle: identity plus the vertical half-turn. NoSymmetry: identity only.
// Throws InvalidIncrement unless the increment divides 360 evenly.
SymmetrySet generate_symmetries(SymmetryClass cls, double increment_deg = 1.0);

}  // namespace poseval
