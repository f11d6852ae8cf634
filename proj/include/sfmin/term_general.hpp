#pragma once

#include <cassert>

#include "sfmin/term_state.hpp"

namespace sfmin {

// Arbitrary submodular term given as a full value table, run under Iwata
// rounding. Neighbor discovery uses the minimal zero set of the residual:
// zero sets of a submodular residual are closed under intersection, so the
// minimal one containing i is the AND of every zero set containing i, and its
// other elements are exactly the arc targets of i.
class GeneralTermState final : public TermState {
 public:
  explicit GeneralTermState(const Term& term)
      : TermState(term), m_(term.arity()), phi_(m_, 0) {
    assert(m_ <= kHardGeneralCap);
    flags_.init(m_);
  }

  Value rounded_value(std::uint64_t subset, const Phase& phase) const {
    const Value raw = term_->general().table[subset];
    if (phase.is_final()) return raw;
    const Value delta = phase.integral_delta();
    const Value size = std::popcount(subset);
    return delta * (raw / delta) + delta * size * (m_ - size);
  }

  Value residual_value(std::uint64_t subset, const Phase& phase) const override {
    Value phi = 0;
    for (int t = 0; t < m_; ++t)
      if (subset >> t & 1) phi += phi_[t];
    return rounded_value(subset, phase) - phi;
  }

  // Unique minimal S with i in S and residual(S) == 0; exists because the
  // residual of the full member set is 0 for any base-polyhedron flow.
  std::uint64_t minimal_zero_set(int member, const Phase& phase) const {
    const std::uint64_t full = (std::uint64_t{1} << m_) - 1;
    const std::uint64_t bit = std::uint64_t{1} << member;
    const std::uint64_t rest = full & ~bit;
    std::uint64_t result = full;
    std::uint64_t sub = rest;
    while (true) {
      const std::uint64_t subset = sub | bit;
      const Value res = residual_value(subset, phase);
      assert(res >= 0);
      if (res == 0) result &= subset;
      if (sub == 0) break;
      sub = (sub - 1) & rest;
    }
    assert(residual_value(result, phase) == 0);
    return result;
  }

  void adjust_flow(const Phase& phase, std::vector<Value>& deltas) override {
    const Value d = phase.ceil_delta();
    std::vector<Value> before = phi_;
    for (Value& v : phi_) v -= m_ * d;
    // Greedy saturation in ascending member order: raise each component by
    // the smallest residual over sets containing it.
    for (int t = 0; t < m_; ++t) {
      Value sat = min_residual_containing(t, phase);
      assert(sat >= 0 && sat % d == 0);
      phi_[t] += sat;
    }
#ifndef NDEBUG
    Value moved = 0;
    for (int t = 0; t < m_; ++t)
      moved += phi_[t] > before[t] ? phi_[t] - before[t] : before[t] - phi_[t];
    assert(moved <= 2 * static_cast<Value>(m_) * m_ * d);
    assert(residual_value((std::uint64_t{1} << m_) - 1, phase) == 0);
#endif
    for (int t = 0; t < m_; ++t) deltas.push_back(phi_[t] - before[t]);
  }

  void get_neighbors(int member, const Phase& phase, std::vector<int>& out) override {
    assert(!flags_.test(member));
    flags_.set(member);
    const std::uint64_t zero_set = minimal_zero_set(member, phase);
    for (int t = 0; t < m_; ++t) {
      if (t == member || !(zero_set >> t & 1)) continue;
      if (!flags_.test(t)) {
        flags_.set(t);
        out.push_back(t);
      }
    }
  }

  void send_flow(int from, int to, const Phase& phase) override {
    phi_[from] += phase.ceil_delta();
    phi_[to] -= phase.ceil_delta();
  }

  void reset_reached() override { flags_.reset(); }
  bool reached(int member) const override { return flags_.test(member); }

  Value flow(int member) const override { return phi_[member]; }

  Value alpha_bound() const override {
    const Value m = m_;
    return 5 * m * m;
  }

  // min residual over S with i in S, j outside; the definitional exchange
  // capacity, kept as a testing hook.
  Value exchange_capacity(int i, int j, const Phase& phase) const {
    const std::uint64_t full = (std::uint64_t{1} << m_) - 1;
    const std::uint64_t bit = std::uint64_t{1} << i;
    const std::uint64_t rest = full & ~bit & ~(std::uint64_t{1} << j);
    Value best = residual_value(bit, phase);
    std::uint64_t sub = rest;
    while (sub != 0) {
      best = std::min(best, residual_value(sub | bit, phase));
      sub = (sub - 1) & rest;
    }
    return best;
  }

 private:
  Value min_residual_containing(int member, const Phase& phase) const {
    const std::uint64_t full = (std::uint64_t{1} << m_) - 1;
    const std::uint64_t bit = std::uint64_t{1} << member;
    const std::uint64_t rest = full & ~bit;
    Value best = residual_value(bit, phase);
    std::uint64_t sub = rest;
    while (sub != 0) {
      best = std::min(best, residual_value(sub | bit, phase));
      sub = (sub - 1) & rest;
    }
    return best;
  }

  int m_;
  std::vector<Value> phi_;
  ReachedFlags flags_;
};

}  // namespace sfmin
