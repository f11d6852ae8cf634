#pragma once

#include <algorithm>
#include <cassert>

#include "sfmin/smawk.hpp"
#include "sfmin/term_state.hpp"

namespace sfmin {

// f(S) = g(|S cap Q'|, |S cap Q''|) run under Iwata rounding:
//   g^Delta(k',k'') = Delta*floor(g/Delta) + Delta*(k'+k'')*(m-k'-k'')
// for integral Delta and g itself in the final phase. Flows split into a
// Q'-side vector y and a Q''-side vector z, each kept sorted with supernodes
// and prefix sums, so the residual
//   gbar(k',k'') = g^Delta(k',k'') - pref_y(k') - pref_z(k'')
// is an O(1) lookup. gbar is a Monge matrix; per BFS we compute row minima
// k''(k') and column minima k'(k'') by SMAWK (leftmost ties) plus the
// boundary arrays
//   b(a)  = largest b with gbar > 0 on [a, m'] x [0, b-1]
//   b'(a) = largest b with gbar > 0 on [0, b-1] x [a, m'']
// via the zero-tracking recursion, which makes every neighbor query a
// supernode walk. Arcs split into four groups: within Q', within Q'',
// Q'->Q'' (targets are the prefix R(j) <= b(L(i))) and Q''->Q'. Each group
// keeps its own supernode flags; member flags are shared.
class BicardinalityTermState final : public TermState {
 public:
  struct Supernode {
    Value flow;
    int left;
    int right;
  };

  explicit BicardinalityTermState(const Term& term) : TermState(term) {
    const auto& d = term.bicardinality();
    sides_[0].flow.assign(d.qprime.size(), 0);
    sides_[1].flow.assign(d.qsecond.size(), 0);
    side_of_.resize(arity());
    side_idx_.resize(arity());
    sides_[0].to_global.resize(d.qprime.size());
    sides_[1].to_global.resize(d.qsecond.size());
    for (int t = 0; t < arity(); ++t) {
      const NodeId v = term.members[t];
      if (std::binary_search(d.qprime.begin(), d.qprime.end(), v)) {
        side_of_[t] = 0;
        side_idx_[t] = static_cast<int>(std::lower_bound(d.qprime.begin(), d.qprime.end(), v) -
                                        d.qprime.begin());
      } else {
        side_of_[t] = 1;
        side_idx_[t] = static_cast<int>(std::lower_bound(d.qsecond.begin(), d.qsecond.end(), v) -
                                        d.qsecond.begin());
      }
      sides_[side_of_[t]].to_global[side_idx_[t]] = t;
    }
    sides_[0].rebuild();
    sides_[1].rebuild();
    member_flags_.init(arity());
    for (int s = 0; s < 2; ++s) {
      within_flags_[s].init(sides_[s].size());
      cross_flags_[s].init(sides_[s].size());
    }
  }

  // g^Delta on the grid; values are multiples of ceil(Delta).
  Value rounded_g(int kp, int ks, const Phase& phase) const {
    const Value raw = term_->bicardinality().at(kp, ks);
    if (phase.is_final()) return raw;
    const Value delta = phase.integral_delta();
    const Value size = kp + ks;
    const Value m = arity();
    return delta * (raw / delta) + delta * size * (m - size);
  }

  Value gbar(int kp, int ks, const Phase& phase) const {
    return rounded_g(kp, ks, phase) - sides_[0].pref[kp] - sides_[1].pref[ks];
  }

  void adjust_flow(const Phase& phase, std::vector<Value>& deltas) override {
    const Value shift = static_cast<Value>(arity()) * phase.ceil_delta();
    std::vector<Value> before(arity());
    for (int t = 0; t < arity(); ++t) before[t] = flow(t);
    for (auto& side : sides_) {
      for (Value& v : side.flow) v -= shift;
      side.rebuild();
    }
    // Greedy saturation, Q' ascending then Q'' ascending.
    for (int s = 0; s < 2; ++s)
      for (int l = 0; l < sides_[s].size(); ++l) {
        const Value sat = saturation(s, l, phase);
        assert(sat >= 0 && sat % phase.ceil_delta() == 0);
        sides_[s].flow[l] += sat;
        sides_[s].rebuild();
      }
    for (int t = 0; t < arity(); ++t) deltas.push_back(flow(t) - before[t]);
    cache_valid_ = false;
  }

  void get_neighbors(int member, const Phase& phase, std::vector<int>& out) override {
    assert(!member_flags_.test(member));
    member_flags_.set(member);
    ensure_cache(phase);
    const int side = side_of_[member];
    within_walk(side, side_idx_[member], phase, out);
    cross_walk(side, side_idx_[member], out);
  }

  void send_flow(int from, int to, const Phase& phase) override {
    const Value d = phase.ceil_delta();
    sides_[side_of_[from]].flow[side_idx_[from]] += d;
    sides_[side_of_[to]].flow[side_idx_[to]] -= d;
    sides_[0].rebuild();
    sides_[1].rebuild();
    cache_valid_ = false;
  }

  void reset_reached() override {
    member_flags_.reset();
    for (int s = 0; s < 2; ++s) {
      within_flags_[s].reset();
      cross_flags_[s].reset();
    }
  }
  bool reached(int member) const override { return member_flags_.test(member); }

  Value flow(int member) const override {
    return sides_[side_of_[member]].flow[side_idx_[member]];
  }

  Value residual_value(std::uint64_t subset, const Phase& phase) const override {
    int kp = 0, ks = 0;
    Value phi = 0;
    for (int t = 0; t < arity(); ++t) {
      if (!(subset >> t & 1)) continue;
      (side_of_[t] == 0 ? kp : ks) += 1;
      phi += flow(t);
    }
    return rounded_g(kp, ks, phase) - phi;
  }

  Value alpha_bound() const override {
    const Value m = arity();
    return 5 * m * m;
  }

  // Per-BFS cache, exposed so tests can compare against naive scans.
  void prepare_bfs(const Phase& phase) {
    const int mp = sides_[0].size();
    const int ms = sides_[1].size();
    row_min_col_ = smawk_row_minima(
        mp + 1, ms + 1, [&](int r, int c) { return gbar(r, c, phase); });
    col_min_row_ = smawk_row_minima(
        ms + 1, mp + 1, [&](int r, int c) { return gbar(c, r, phase); });

#ifndef NDEBUG
    if (mp <= 32 && ms <= 32) {
      for (int kp = 1; kp <= mp; ++kp)
        for (int ks = 1; ks <= ms; ++ks)
          assert(gbar(kp, ks, phase) + gbar(kp - 1, ks - 1, phase) <=
                 gbar(kp - 1, ks, phase) + gbar(kp, ks - 1, phase));
    }
#endif

    b_.assign(mp + 1, 0);
    b_[mp] = row_min_col_[mp];
    for (int a = mp - 1; a >= 1; --a)
      b_[a] = gbar(a, row_min_col_[a], phase) > 0 ? b_[a + 1]
                                                  : std::min(b_[a + 1], row_min_col_[a]);
    bprime_.assign(ms + 1, 0);
    bprime_[ms] = col_min_row_[ms];
    for (int a = ms - 1; a >= 1; --a)
      bprime_[a] = gbar(col_min_row_[a], a, phase) > 0
                       ? bprime_[a + 1]
                       : std::min(bprime_[a + 1], col_min_row_[a]);

    // Rightmost opposite-side supernode reachable from each supernode; the
    // bounds are monotone so a single forward sweep fills both tables.
    for (int s = 0; s < 2; ++s) {
      const auto& bounds = s == 0 ? b_ : bprime_;
      const auto& opposite = sides_[1 - s].snodes;
      auto& ptr = cross_ptr_[s];
      ptr.assign(sides_[s].snodes.size(), -1);
      int v = -1;
      for (size_t u = 0; u < sides_[s].snodes.size(); ++u) {
        const int bound = bounds[sides_[s].snodes[u].left];
        while (v + 1 < static_cast<int>(opposite.size()) &&
               opposite[v + 1].right <= bound)
          ++v;
        ptr[u] = v;
      }
    }
    cache_valid_ = true;
    cache_two_delta_ = phase.two_delta;
  }

  const std::vector<int>& row_min_col() const { return row_min_col_; }
  const std::vector<int>& col_min_row() const { return col_min_row_; }
  const std::vector<int>& cross_bound() const { return b_; }
  const std::vector<int>& cross_bound_reverse() const { return bprime_; }
  int side_of(int member) const { return side_of_[member]; }

 private:
  struct SideState {
    std::vector<Value> flow;
    std::vector<int> order;  // side-local ids sorted by flow descending
    std::vector<int> pos;    // side-local id -> 1-based sorted position
    std::vector<Supernode> snodes;
    std::vector<int> snode_of;
    std::vector<Value> pref;  // pref[k] = sum of k largest flows
    std::vector<int> to_global;

    int size() const { return static_cast<int>(flow.size()); }

    void rebuild() {
      const int sz = size();
      order.resize(sz);
      pos.resize(sz);
      snode_of.resize(sz);
      pref.assign(sz + 1, 0);
      for (int l = 0; l < sz; ++l) order[l] = l;
      std::sort(order.begin(), order.end(), [this](int x, int y) {
        if (flow[x] != flow[y]) return flow[x] > flow[y];
        return x < y;
      });
      snodes.clear();
      for (int p = 0; p < sz; ++p) {
        const int l = order[p];
        pos[l] = p + 1;
        pref[p + 1] = pref[p] + flow[l];
        if (snodes.empty() || snodes.back().flow != flow[l])
          snodes.push_back(Supernode{flow[l], p + 1, p + 1});
        else
          snodes.back().right = p + 1;
        snode_of[l] = static_cast<int>(snodes.size()) - 1;
      }
    }
  };

  void ensure_cache(const Phase& phase) {
    if (!cache_valid_ || cache_two_delta_ != phase.two_delta) prepare_bfs(phase);
  }

  // Row-level (side 0) or column-level (side 1) residual minimum.
  Value level_min(int side, int k, const Phase& phase) const {
    return side == 0 ? gbar(k, row_min_col_[k], phase)
                     : gbar(col_min_row_[k], k, phase);
  }

  bool interval_positive(int side, int lo, int hi, const Phase& phase) const {
    for (int k = lo; k <= hi; ++k)
      if (level_min(side, k, phase) <= 0) return false;
    return true;
  }

  void add_members(int side, int u, std::vector<int>& out) {
    const auto& sn = sides_[side].snodes[u];
    for (int p = sn.left; p <= sn.right; ++p) {
      const int member = sides_[side].to_global[sides_[side].order[p - 1]];
      if (!member_flags_.test(member)) {
        member_flags_.set(member);
        out.push_back(member);
      }
    }
  }

  // The cardinality-style walk on one side, with threshold "level min > 0".
  void within_walk(int side, int local, const Phase& phase, std::vector<int>& out) {
    auto& flags = within_flags_[side];
    const auto& snodes = sides_[side].snodes;
    const int count = static_cast<int>(snodes.size());
    const int u = sides_[side].snode_of[local];
    if (flags.test(u)) return;
    flags.set(u);
    if (interval_positive(side, snodes[u].left, snodes[u].right - 1, phase))
      add_members(side, u, out);
    if (u > 0) {
      add_members(side, u - 1, out);
      int v = u - 1;
      while (!flags.test(v)) {
        flags.set(v);
        if (v == 0) break;
        add_members(side, v - 1, out);
        --v;
      }
    }
    if (u + 1 < count &&
        interval_positive(side, snodes[u].left, snodes[u + 1].right - 1, phase)) {
      add_members(side, u + 1, out);
      int v = u + 1;
      while (!flags.test(v)) {
        flags.set(v);
        if (v + 1 >= count ||
            !interval_positive(side, snodes[v].left, snodes[v + 1].right - 1, phase))
          break;
        add_members(side, v + 1, out);
        ++v;
      }
    }
  }

  // Cross arcs reach the prefix of opposite-side supernodes up to the cached
  // rightmost pointer; the leftward sweep stops at the first flagged one.
  void cross_walk(int side, int local, std::vector<int>& out) {
    const int u = sides_[side].snode_of[local];
    int v = cross_ptr_[side][u];
    if (v < 0) return;
    auto& flags = cross_flags_[1 - side];
    add_members(1 - side, v, out);
    while (!flags.test(v)) {
      flags.set(v);
      if (v == 0) break;
      add_members(1 - side, v - 1, out);
      --v;
    }
  }

  // min over sets containing the given member of g^Delta(S) - phi(S), taken
  // over all shapes; with sorted flows and prefix sums each shape is O(1).
  Value saturation(int side, int local, const Phase& phase) const {
    const auto& own = sides_[side];
    const auto& other = sides_[1 - side];
    const Value v0 = own.flow[local];
    const int p = own.pos[local];
    auto excl_pref = [&](int r) {  // top r own-side flows excluding this member
      return r < p ? own.pref[r] : own.pref[r + 1] - v0;
    };
    Value best = 0;
    bool first = true;
    for (int ko = 1; ko <= own.size(); ++ko)
      for (int kx = 0; kx <= other.size(); ++kx) {
        const Value phi_sum = v0 + excl_pref(ko - 1) + other.pref[kx];
        const int kp = side == 0 ? ko : kx;
        const int ks = side == 0 ? kx : ko;
        const Value res = rounded_g(kp, ks, phase) - phi_sum;
        if (first || res < best) best = res;
        first = false;
      }
    return best;
  }

  SideState sides_[2];
  std::vector<int> side_of_;
  std::vector<int> side_idx_;

  bool cache_valid_ = false;
  Value cache_two_delta_ = 0;
  std::vector<int> row_min_col_;  // k''(k')
  std::vector<int> col_min_row_;  // k'(k'')
  std::vector<int> b_;
  std::vector<int> bprime_;
  std::vector<int> cross_ptr_[2];

  ReachedFlags member_flags_;
  ReachedFlags within_flags_[2];
  ReachedFlags cross_flags_[2];
};

}  // namespace sfmin
