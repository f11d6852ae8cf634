#pragma once

#include <cstddef>
#include <vector>

#include "sfmin/common.hpp"

namespace sfmin {

// Leftmost row minima of an implicit totally monotone matrix in
// O(rows + cols) entry evaluations (Aggarwal et al.). The entry accessor must
// be a pure function of (row, col). Monge matrices are totally monotone, so
// any Monge input is admissible.
//
// Ties are broken towards the smallest column index; callers that need column
// minima evaluate a transposed accessor.
template <typename EntryFn>
class SmawkSolver {
 public:
  SmawkSolver(int rows, int cols, EntryFn entry)
      : rows_(rows), cols_(cols), entry_(std::move(entry)) {}

  std::vector<int> run() {
    result_.assign(static_cast<size_t>(rows_ < 0 ? 0 : rows_), 0);
    if (rows_ <= 0 || cols_ <= 0) return std::move(result_);
    std::vector<int> rows(rows_), cols(cols_);
    for (int r = 0; r < rows_; ++r) rows[r] = r;
    for (int c = 0; c < cols_; ++c) cols[c] = c;
    solve(rows, cols);
    return std::move(result_);
  }

 private:
  void solve(const std::vector<int>& rows, const std::vector<int>& cols) {
    if (rows.empty()) return;

    // REDUCE: prune columns that cannot hold a leftmost row minimum, keeping
    // at most |rows| survivors. Strict comparison keeps the earlier column on
    // ties, which preserves leftmost minima.
    std::vector<int> survivors;
    survivors.reserve(rows.size());
    for (int c : cols) {
      while (!survivors.empty()) {
        int r = rows[survivors.size() - 1];
        if (entry_(r, survivors.back()) > entry_(r, c)) {
          survivors.pop_back();
        } else {
          break;
        }
      }
      if (survivors.size() < rows.size()) survivors.push_back(c);
    }

    std::vector<int> odd_rows;
    odd_rows.reserve(rows.size() / 2);
    for (size_t i = 1; i < rows.size(); i += 2) odd_rows.push_back(rows[i]);
    solve(odd_rows, survivors);

    // Interpolate even rows: the answer for rows[i] lies between the answers
    // of its odd neighbours, so one left-to-right sweep over the surviving
    // columns fills them all.
    size_t ci = 0;
    for (size_t i = 0; i < rows.size(); i += 2) {
      int row = rows[i];
      int stop = (i + 1 < rows.size()) ? result_[rows[i + 1]] : survivors.back();
      int best_col = survivors[ci];
      Value best = entry_(row, best_col);
      while (survivors[ci] != stop) {
        ++ci;
        Value v = entry_(row, survivors[ci]);
        if (v < best) {
          best = v;
          best_col = survivors[ci];
        }
      }
      result_[row] = best_col;
    }
  }

  int rows_;
  int cols_;
  EntryFn entry_;
  std::vector<int> result_;
};

// result[r] = smallest c minimizing entry(r, c). Empty matrix gives an empty
// result.
template <typename EntryFn>
std::vector<int> smawk_row_minima(int rows, int cols, EntryFn entry) {
  return SmawkSolver<EntryFn>(rows, cols, std::move(entry)).run();
}

}  // namespace sfmin
