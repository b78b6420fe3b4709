#include "poseval/symmetry.hpp"

#include <cmath>
#include <numbers>

namespace poseval {

const char* to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::Cylinder: return "cylinder";
    case SymmetryClass::Cuboid: return "cuboid";
    case SymmetryClass::Bottle: return "bottle";
    case SymmetryClass::NoSymmetry: return "none";
  }
  return "none";
}

SymmetryClass symmetry_class_from_string(const std::string& name) {
  if (name == "cylinder") return SymmetryClass::Cylinder;
  if (name == "cuboid") return SymmetryClass::Cuboid;
  if (name == "bottle") return SymmetryClass::Bottle;
  if (name == "none" || name == "nosymmetry") return SymmetryClass::NoSymmetry;
  throw std::invalid_argument("unknown symmetry class: " + name);
}

SymmetrySet generate_symmetries(SymmetryClass cls, double increment_deg) {
  SymmetrySet set;
  set.cls = cls;
  set.increment_deg = increment_deg;

  switch (cls) {
    case SymmetryClass::NoSymmetry:
      set.rotations = {Mat3::Identity()};
      break;
    case SymmetryClass::Bottle:
      set.rotations = {Mat3::Identity(), half_turn(2)};
      break;
    case SymmetryClass::Cuboid:
      set.rotations = {Mat3::Identity(), half_turn(0), half_turn(1),
                       half_turn(2)};
      break;
    case SymmetryClass::Cylinder: {
      if (!(increment_deg > 0.0))
        throw InvalidIncrement("increment must be positive");
      const double ratio = 360.0 / increment_deg;
      const long steps = std::lround(ratio);
      if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9)
        throw InvalidIncrement("increment does not divide 360 evenly");
      const Mat3 flip = half_turn(0);
      set.rotations.reserve(2 * steps);
      for (int flipped = 0; flipped < 2; ++flipped) {
        for (long k = 0; k < steps; ++k) {
          const double angle =
              static_cast<double>(k) * increment_deg * std::numbers::pi / 180.0;
          Mat3 r = k == 0 ? Mat3::Identity() : axis_rotation(2, angle);
          if (flipped) r = r * flip;
          set.rotations.push_back(r);
        }
      }
      break;
    }
  }
  return set;
}

}  // namespace poseval
