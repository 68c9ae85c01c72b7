#include "xrank/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xrank/error.hpp"

namespace xrank::matching {

WeightedBipartiteGraph::WeightedBipartiteGraph(std::size_t left_size, std::size_t right_size,
                                               std::vector<double> weights)
    : left_(left_size), right_(right_size), weights_(std::move(weights)) {
  if (left_ == 0 || right_ == 0) throw Error(ErrorKind::InvalidArgument, "bipartite sides must be non-empty");
  if (weights_.size() != left_ * right_) {
    throw Error(ErrorKind::InvalidArgument, "weight matrix size does not match left x right");
  }
  if (!std::all_of(weights_.begin(), weights_.end(), [](double w) { return std::isfinite(w); })) {
    throw Error(ErrorKind::InvalidArgument, "weights must be finite");
  }
}

WeightedBipartiteGraph WeightedBipartiteGraph::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t l = rows.size();
  const std::size_t r = l == 0 ? 0 : rows.front().size();
  std::vector<double> flat;
  flat.reserve(l * r);
  for (const auto& row : rows) {
    if (row.size() != r) throw Error(ErrorKind::InvalidArgument, "ragged weight rows");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return WeightedBipartiteGraph(l, r, std::move(flat));
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Square n x n minimum-cost assignment over a virtually padded matrix: rows
// >= L or columns >= R cost 0. `sign` = -1 turns the kernel into maximisation.
class AssignmentSolver {
 public:
  AssignmentSolver(const WeightedBipartiteGraph& g, double sign)
      : g_(g), sign_(sign), n_(std::max(g.left_size(), g.right_size())) {}

  Matching solve() {
    hungarian();
    lexicographic_refine();
    Matching m;
    for (std::size_t i = 0; i < g_.left_size(); ++i) {
      const std::size_t j = row_to_col_[i];
      if (j < g_.right_size()) {
        m.pairs.emplace_back(i, j);
        m.total_weight += g_.weight(i, j);
      }
    }
    return m;
  }

 private:
  double cost(std::size_t i, std::size_t j) const {
    return (i < g_.left_size() && j < g_.right_size()) ? sign_ * g_.weight(i, j) : 0.0;
  }

  // Shortest augmenting path variant with row/column potentials, O(n^3).
  // Indices are 1-based internally; column 0 is the virtual source.
  void hungarian() {
    const double inf = std::numeric_limits<double>::infinity();
    u_.assign(n_ + 1, 0.0);
    v_.assign(n_ + 1, 0.0);
    std::vector<std::size_t> p(n_ + 1, 0), way(n_ + 1, 0);
    std::vector<double> minv(n_ + 1);
    std::vector<char> used(n_ + 1);
    for (std::size_t i = 1; i <= n_; ++i) {
      p[0] = i;
      std::size_t j0 = 0;
      std::fill(minv.begin(), minv.end(), inf);
      std::fill(used.begin(), used.end(), 0);
      do {
        used[j0] = 1;
        const std::size_t i0 = p[j0];
        double delta = inf;
        std::size_t j1 = 0;
        for (std::size_t j = 1; j <= n_; ++j) {
          if (used[j]) continue;
          const double cur = cost(i0 - 1, j - 1) - u_[i0] - v_[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
        for (std::size_t j = 0; j <= n_; ++j) {
          if (used[j]) {
            u_[p[j]] += delta;
            v_[j] -= delta;
          } else {
            minv[j] -= delta;
          }
        }
        j0 = j1;
      } while (p[j0] != 0);
      do {
        const std::size_t j1 = way[j0];
        p[j0] = p[j1];
        j0 = j1;
      } while (j0 != 0);
    }
    row_to_col_.assign(n_, kNone);
    col_to_row_.assign(n_, kNone);
    for (std::size_t j = 1; j <= n_; ++j) {
      row_to_col_[p[j] - 1] = j - 1;
      col_to_row_[j - 1] = p[j] - 1;
    }
    double scale = 1.0;
    for (double w : g_.weights()) scale = std::max(scale, std::abs(w));
    tolerance_ = 1e-9 * scale;
  }

  bool tight(std::size_t i, std::size_t j) const {
    return cost(i, j) - u_[i + 1] - v_[j + 1] <= tolerance_;
  }

  // Every optimal assignment is complementary-slack with the final potentials,
  // so the optima are exactly the perfect matchings of the tight-edge subgraph.
  // Walk left rows in order and pin each to its smallest feasible real column.
  void lexicographic_refine() {
    const std::size_t left = g_.left_size();
    const std::size_t right = g_.right_size();
    std::vector<char> fixed(n_, 0);
    for (std::size_t i = 0; i < left; ++i) {
      for (std::size_t j = 0; j < right; ++j) {
        if (!tight(i, j)) continue;
        if (row_to_col_[i] == j || reroute(i, j, fixed)) break;
      }
      fixed[i] = 1;
    }
  }

  // Try to move row i onto column j while keeping every fixed row in place:
  // search an alternating path from j's current row back to i's current column.
  bool reroute(std::size_t i, std::size_t j, const std::vector<char>& fixed) {
    const std::size_t start_row = col_to_row_[j];
    if (fixed[start_row]) return false;
    const std::size_t target_col = row_to_col_[i];
    std::vector<std::size_t> parent_row(n_, kNone);
    std::vector<char> seen(n_, 0);
    std::vector<std::size_t> queue{start_row};
    seen[start_row] = 1;
    seen[i] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t r = queue[head];
      for (std::size_t c = 0; c < n_; ++c) {
        if (c == row_to_col_[r] || !tight(r, c)) continue;
        if (c == target_col) {
          std::size_t row = r;
          std::size_t col = c;
          while (true) {
            const std::size_t old_col = row_to_col_[row];
            row_to_col_[row] = col;
            col_to_row_[col] = row;
            if (row == start_row) break;
            col = old_col;
            row = parent_row[row];
          }
          row_to_col_[i] = j;
          col_to_row_[j] = i;
          return true;
        }
        const std::size_t next = col_to_row_[c];
        if (seen[next] || fixed[next]) continue;
        seen[next] = 1;
        parent_row[next] = r;
        queue.push_back(next);
      }
    }
    return false;
  }

  const WeightedBipartiteGraph& g_;
  double sign_;
  std::size_t n_;
  std::vector<double> u_, v_;
  std::vector<std::size_t> row_to_col_, col_to_row_;
  double tolerance_ = 0;
};

}  // namespace

Matching max_weight_full_matching(const WeightedBipartiteGraph& g) { return AssignmentSolver(g, -1.0).solve(); }

Matching min_weight_full_matching(const WeightedBipartiteGraph& g) { return AssignmentSolver(g, 1.0).solve(); }

}  // namespace xrank::matching
