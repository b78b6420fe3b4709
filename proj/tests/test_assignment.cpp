#include <doctest.h>

#include <limits>

#include "poseval/assignment.hpp"
#include "poseval/rng.hpp"

using namespace poseval;

TEST_CASE("hand-checked instances") {
  SUBCASE("single element") {
    CostMatrix m(1, 1);
    m << 5.0;
    const Assignment a = solve_lap(m);
    CHECK(a.permutation == std::vector<int>{0});
    CHECK(a.total_cost == 5.0);
  }

  SUBCASE("2x2, off-diagonal wins") {
    CostMatrix m(2, 2);
    m << 4, 1, 2, 8;  // enumerating both: 4+8=12 vs 1+2=3
    const Assignment a = solve_lap(m);
    CHECK(a.permutation == std::vector<int>{1, 0});
    CHECK(a.total_cost == 3.0);
  }

  SUBCASE("3x3 rank-one matrix") {
    CostMatrix m(3, 3);
    m << 1, 2, 3, 2, 4, 6, 3, 6, 9;  // all 6 permutations: minimum 3+4+3=10
    const Assignment a = solve_lap(m);
    CHECK(a.permutation == std::vector<int>{2, 1, 0});
    CHECK(a.total_cost == 10.0);
  }
}

TEST_CASE("brute force oracle basics") {
  SUBCASE("zero diagonal") {
    CostMatrix m = CostMatrix::Ones(4, 4);
    m.diagonal().setZero();
    const Assignment a = brute_force_lap(m);
    CHECK(a.permutation == std::vector<int>{0, 1, 2, 3});
    CHECK(a.total_cost == 0.0);
  }

  SUBCASE("constant matrix ties break to the identity") {
    const CostMatrix m = CostMatrix::Constant(5, 5, 2.5);
    const Assignment brute = brute_force_lap(m);
    const Assignment solved = solve_lap(m);
    CHECK(brute.permutation == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(solved.permutation == brute.permutation);
    CHECK(brute.total_cost == 5 * 2.5);
  }

  SUBCASE("size guard") {
    CHECK_THROWS_AS(brute_force_lap(CostMatrix::Zero(10, 10)), TooLarge);
  }
}

TEST_CASE("solver equals the oracle on random instances") {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(7));
    CostMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(0.0, 10.0);
    const Assignment fast = solve_lap(m);
    const Assignment slow = brute_force_lap(m);
    CHECK(fast.total_cost == slow.total_cost);
    CHECK(fast.permutation == slow.permutation);
  }
}

TEST_CASE("deterministic tie-breaking picks the lexicographic minimum") {
  // two optimal permutations: {0,1} and {1,0} both cost 2
  CostMatrix m(2, 2);
  m << 1, 1, 1, 1;
  CHECK(solve_lap(m).permutation == std::vector<int>{0, 1});

  // block ties on a larger instance
  CostMatrix b = CostMatrix::Constant(4, 4, 3.0);
  b(0, 3) = 1.0;
  b(1, 2) = 1.0;  // optimum must use (0,3) and (1,2); rows 2,3 tie on {0,1}
  const Assignment a = solve_lap(b);
  CHECK(a.permutation == std::vector<int>{3, 2, 0, 1});
  CHECK(a.total_cost == 8.0);
  CHECK(a.permutation == brute_force_lap(b).permutation);
}

TEST_CASE("tie-breaking stress on small-integer matrices") {
  // integer entries create many exactly-tied optima, and keep the dual
  // variables exact, so this exercises the lexicographic refinement hard
  Rng rng(107);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(6));
    const int spread = 1 + static_cast<int>(rng.uniform_index(4));
    CostMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = static_cast<double>(rng.uniform_index(spread + 1));
    const Assignment fast = solve_lap(m);
    const Assignment slow = brute_force_lap(m);
    REQUIRE(fast.total_cost == slow.total_cost);
    REQUIRE(fast.permutation == slow.permutation);
  }
}

TEST_CASE("row shift invariance") {
  Rng rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(5));
    CostMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(0.0, 10.0);
    const Assignment base = solve_lap(m);

    const double shift = rng.uniform(0.5, 5.0);
    CostMatrix shifted = m;
    shifted.row(0).array() += shift;
    const Assignment moved = solve_lap(shifted);
    CHECK(moved.permutation == base.permutation);
    CHECK(moved.total_cost ==
          doctest::Approx(base.total_cost + shift).epsilon(1e-12));
  }
}

TEST_CASE("non-finite entries are rejected") {
  CostMatrix m = CostMatrix::Zero(3, 3);
  m(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(solve_lap(m), NonFiniteCost);
  m(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(solve_lap(m), NonFiniteCost);
  CHECK_THROWS_AS(brute_force_lap(m), NonFiniteCost);
  CHECK_THROWS_AS(solve_lap(CostMatrix::Zero(2, 3)), std::invalid_argument);
}
