#pragma once

#include <Eigen/Core>
#include <vector>

#include "poseval/errors.hpp"

namespace poseval {

// Square cost matrix in meters; entries must be finite.
using CostMatrix = Eigen::MatrixXd;

struct Assignment {
  std::vector<int> permutation;  // row i is matched to column permutation[i]
  double total_cost = 0.0;
};

// Exact minimum-cost linear sum assignment via Jonker-Volgenant style
// shortest augmenting paths with dual potentials, O(n^3). When several
// permutations attain the optimum, returns the lexicographically smallest
// one. Throws NonFiniteCost on NaN/inf entries.
Assignment solve_lap(const CostMatrix& cost);

// Exhaustive-enumeration oracle with the same contract as solve_lap.
// Throws TooLarge for n > 9.
Assignment brute_force_lap(const CostMatrix& cost);

}  // namespace poseval
