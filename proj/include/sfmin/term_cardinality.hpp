#pragma once

#include <algorithm>
#include <cassert>

#include "sfmin/term_state.hpp"

namespace sfmin {

// f(S) = g(|S|) with concave g. f^Delta = f in every phase. The flow vector z
// is kept alongside its sorted order, grouped into supernodes of equal z, and
// the residual array gbar(k) = g(k) - (sum of k largest z components) is
// maintained incrementally under the three-case rule for a push:
//   z_i <= z_j - 2d : gbar += d on [R(j), L(i)-1]
//   z_i == z_j - d  : unchanged (pure swap)
//   z_i >= z_j      : gbar -= d on [L(i), R(j)-1]
// Arc rule: (i,j) present iff z_i < z_j, or z_i >= z_j and
// min gbar over [L(i), R(j)-1] >= 3*Delta/2. Neighbor discovery walks the
// supernode list so one BFS costs O(m) for this term in total.
class CardinalityTermState final : public TermState {
 public:
  struct Supernode {
    Value z;
    int left;   // first 1-based sorted position
    int right;  // last 1-based sorted position
  };

  explicit CardinalityTermState(const Term& term)
      : TermState(term), m_(term.arity()), z_(m_, 0) {
    member_flags_.init(m_);
    snode_flags_.init(m_);
    rebuild_structures();
    gbar_ = gbar_from_scratch();
  }

  void adjust_flow(const Phase&, std::vector<Value>& deltas) override {
    deltas.insert(deltas.end(), m_, 0);
  }

  void get_neighbors(int member, const Phase& phase, std::vector<int>& out) override {
    assert(!member_flags_.test(member));
    member_flags_.set(member);
    const int u = snode_of_[member];
    if (snode_flags_.test(u)) return;
    snode_flags_.set(u);

    if (interval_meets(snodes_[u].left, snodes_[u].right - 1, phase))
      add_members(u, out);
    if (u > 0) {
      add_members(u - 1, out);
      process_left(u - 1, out);
    }
    if (u + 1 < supernode_count() &&
        interval_meets(snodes_[u].left, snodes_[u + 1].right - 1, phase)) {
      add_members(u + 1, out);
      process_right(u + 1, phase, out);
    }
  }

  void send_flow(int from, int to, const Phase& phase) override {
    const Value d = phase.ceil_delta();
    const Value zi = z_[from];
    const Value zj = z_[to];
    if (zi <= zj - 2 * d) {
      for (int k = right_of(to); k <= left_of(from) - 1; ++k) gbar_[k] += d;
    } else if (zi == zj - d) {
      // swap; gbar unchanged
    } else {
      assert(zi >= zj);
      for (int k = left_of(from); k <= right_of(to) - 1; ++k) gbar_[k] -= d;
    }
    z_[from] += d;
    z_[to] -= d;
    rebuild_structures();
  }

  void reset_reached() override {
    member_flags_.reset();
    snode_flags_.reset();
  }
  bool reached(int member) const override { return member_flags_.test(member); }

  Value flow(int member) const override { return z_[member]; }

  Value residual_value(std::uint64_t subset, const Phase&) const override {
    Value phi = 0;
    for (int t = 0; t < m_; ++t)
      if (subset >> t & 1) phi += z_[t];
    return term_->cardinality().g[std::popcount(subset)] - phi;
  }

  Value alpha_bound() const override { return 3 * (static_cast<Value>(m_) - 1); }

  // Structure inspection (tests compare the maintained gbar against this).
  const std::vector<Value>& gbar() const { return gbar_; }
  std::vector<Value> gbar_from_scratch() const {
    std::vector<Value> sorted = z_;
    std::sort(sorted.begin(), sorted.end(), std::greater<Value>());
    std::vector<Value> out(m_ + 1);
    const auto& g = term_->cardinality().g;
    Value prefix = 0;
    out[0] = g[0];
    for (int k = 1; k <= m_; ++k) {
      prefix += sorted[k - 1];
      out[k] = g[k] - prefix;
    }
    return out;
  }
  int supernode_count() const { return static_cast<int>(snodes_.size()); }
  const Supernode& supernode(int u) const { return snodes_[u]; }
  int supernode_of(int member) const { return snode_of_[member]; }

  // Re-derives order, positions and supernodes from z. O(m log m).
  void rebuild_structures() {
    order_.resize(m_);
    pos_.resize(m_);
    snode_of_.resize(m_);
    for (int t = 0; t < m_; ++t) order_[t] = t;
    std::sort(order_.begin(), order_.end(), [this](int x, int y) {
      if (z_[x] != z_[y]) return z_[x] > z_[y];
      return x < y;
    });
    snodes_.clear();
    for (int p = 0; p < m_; ++p) {
      const int member = order_[p];
      pos_[member] = p + 1;
      if (snodes_.empty() || snodes_.back().z != z_[member])
        snodes_.push_back(Supernode{z_[member], p + 1, p + 1});
      else
        snodes_.back().right = p + 1;
      snode_of_[member] = static_cast<int>(snodes_.size()) - 1;
    }
  }

 private:
  int left_of(int member) const { return snodes_[snode_of_[member]].left; }
  int right_of(int member) const { return snodes_[snode_of_[member]].right; }

  // min gbar over [lo, hi] >= 3*Delta/2, vacuously true when lo > hi.
  bool interval_meets(int lo, int hi, const Phase& phase) const {
    for (int k = lo; k <= hi; ++k)
      if (!phase.meets_three_half_delta(gbar_[k])) return false;
    return true;
  }

  void add_members(int u, std::vector<int>& out) {
    for (int p = snodes_[u].left; p <= snodes_[u].right; ++p) {
      const int member = order_[p - 1];
      if (!member_flags_.test(member)) {
        member_flags_.set(member);
        out.push_back(member);
      }
    }
  }

  void process_left(int u, std::vector<int>& out) {
    while (!snode_flags_.test(u)) {
      snode_flags_.set(u);
      if (u == 0) break;
      add_members(u - 1, out);
      --u;
    }
  }

  void process_right(int u, const Phase& phase, std::vector<int>& out) {
    while (!snode_flags_.test(u)) {
      snode_flags_.set(u);
      if (u + 1 >= supernode_count() ||
          !interval_meets(snodes_[u].left, snodes_[u + 1].right - 1, phase))
        break;
      add_members(u + 1, out);
      ++u;
    }
  }

  int m_;
  std::vector<Value> z_;
  std::vector<Value> gbar_;
  std::vector<int> order_;     // member ids sorted by z descending
  std::vector<int> pos_;       // member -> 1-based sorted position
  std::vector<Supernode> snodes_;
  std::vector<int> snode_of_;
  ReachedFlags member_flags_;
  ReachedFlags snode_flags_;
};

}  // namespace sfmin
