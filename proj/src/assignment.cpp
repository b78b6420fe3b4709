#include "poseval/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace poseval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double checked_sum(const CostMatrix& cost, const std::vector<int>& perm) {
  double total = 0.0;
  for (int i = 0; i < static_cast<int>(perm.size()); ++i)
    total += cost(i, perm[i]);
  return total;
}

// Shortest augmenting path over the 1-based dual formulation; fills the
// column->row matching p and potentials u, v.
void jv_solve(const CostMatrix& cost, std::vector<int>& p,
              std::vector<double>& u, std::vector<double>& v) {
  const int n = static_cast<int>(cost.rows());
  u.assign(n + 1, 0.0);
  v.assign(n + 1, 0.0);
  p.assign(n + 1, 0);
  std::vector<int> way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
}

// Kuhn augmenting search restricted to unfixed rows/columns of the tight
// (zero reduced cost) subgraph.
bool augment(int row, const std::vector<std::vector<int>>& adj,
             std::vector<int>& row_to_col, std::vector<int>& col_to_row,
             std::vector<char>& row_fixed, std::vector<char>& col_fixed,
             std::vector<char>& visited) {
  for (int j : adj[row]) {
    if (col_fixed[j] || visited[j]) continue;
    visited[j] = 1;
    const int other = col_to_row[j];
    if (other < 0 || (!row_fixed[other] &&
                      augment(other, adj, row_to_col, col_to_row, row_fixed,
                              col_fixed, visited))) {
      row_to_col[row] = j;
      col_to_row[j] = row;
      return true;
    }
  }
  return false;
}

// Given optimal duals, every optimal permutation is a perfect matching of
// the tight subgraph; pick the lexicographically smallest one greedily.
std::vector<int> lexicographic_refine(const CostMatrix& cost,
                                      std::vector<int> row_to_col,
                                      const std::vector<double>& u,
                                      const std::vector<double>& v,
                                      double tol) {
  const int n = static_cast<int>(cost.rows());
  std::vector<std::vector<int>> adj(n);
  size_t edges = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == row_to_col[i] || cost(i, j) - u[i + 1] - v[j + 1] <= tol)
        adj[i].push_back(j);
    }
    edges += adj[i].size();
  }
  if (edges == static_cast<size_t>(n)) return row_to_col;  // unique optimum

  std::vector<int> col_to_row(n, -1);
  for (int i = 0; i < n; ++i) col_to_row[row_to_col[i]] = i;
  std::vector<char> row_fixed(n, 0), col_fixed(n, 0), visited(n, 0);

  for (int i = 0; i < n; ++i) {
    for (int j : adj[i]) {
      if (j >= row_to_col[i]) break;  // current column already smallest
      if (col_fixed[j]) continue;
      const int displaced = col_to_row[j];
      const int old = row_to_col[i];
      row_to_col[i] = j;
      col_to_row[j] = i;
      col_to_row[old] = -1;
      row_fixed[i] = 1;
      std::fill(visited.begin(), visited.end(), 0);
      visited[j] = 1;
      if (augment(displaced, adj, row_to_col, col_to_row, row_fixed, col_fixed,
                  visited)) {
        break;  // committed; displaced row rerouted
      }
      row_fixed[i] = 0;  // revert
      row_to_col[i] = old;
      col_to_row[old] = i;
      col_to_row[j] = displaced;
    }
    row_fixed[i] = 1;
    col_fixed[row_to_col[i]] = 1;
  }
  return row_to_col;
}

void validate(const CostMatrix& cost) {
  if (cost.rows() != cost.cols() || cost.rows() < 1)
    throw std::invalid_argument("cost matrix must be square, n >= 1");
  if (!cost.allFinite())
    throw NonFiniteCost("cost matrix contains NaN or infinite entries");
}

}  // namespace

Assignment solve_lap(const CostMatrix& cost) {
  validate(cost);
  const int n = static_cast<int>(cost.rows());

  std::vector<int> p;
  std::vector<double> u, v;
  jv_solve(cost, p, u, v);

  std::vector<int> row_to_col(n);
  for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;

  const double cmax = cost.cwiseAbs().maxCoeff();
  row_to_col = lexicographic_refine(cost, std::move(row_to_col), u, v,
                                    1e-10 * (1.0 + cmax));

  Assignment out;
  out.permutation = std::move(row_to_col);
  out.total_cost = checked_sum(cost, out.permutation);
  return out;
}

Assignment brute_force_lap(const CostMatrix& cost) {
  validate(cost);
  const int n = static_cast<int>(cost.rows());
  if (n > 9) throw TooLarge("brute_force_lap: n > 9");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_cost = checked_sum(cost, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double c = checked_sum(cost, perm);
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  }
  return {std::move(best), best_cost};
}

}  // namespace poseval
