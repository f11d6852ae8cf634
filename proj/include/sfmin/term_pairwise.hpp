#pragma once

#include <cassert>

#include "sfmin/term_state.hpp"

namespace sfmin {

// |Q| = 2. One integer carries the whole flow vector: phi = phi_Qi and the
// balance constraint pins phi_Qj = -phi. f^Delta = f in every phase, so
// adjust_flow is the identity and arcs are plain residual thresholds:
//   (i,j) present iff a - phi >= ceil(Delta), (j,i) iff b + phi >= ceil(Delta).
class PairwiseTermState final : public TermState {
 public:
  explicit PairwiseTermState(const Term& term)
      : TermState(term), a_(term.pairwise().a), b_(term.pairwise().b) {
    flags_.init(2);
  }

  void adjust_flow(const Phase&, std::vector<Value>& deltas) override {
    deltas.push_back(0);
    deltas.push_back(0);
  }

  void get_neighbors(int member, const Phase& phase, std::vector<int>& out) override {
    assert(!flags_.test(member));
    flags_.set(member);
    const int other = 1 - member;
    if (flags_.test(other)) return;
    const Value slack = member == 0 ? a_ - phi_ : b_ + phi_;
    if (slack >= phase.ceil_delta()) {
      flags_.set(other);
      out.push_back(other);
    }
  }

  void send_flow(int from, int to, const Phase& phase) override {
    assert(from + to == 1);
    phi_ += from == 0 ? phase.ceil_delta() : -phase.ceil_delta();
    assert(-b_ <= phi_ && phi_ <= a_);
  }

  void reset_reached() override { flags_.reset(); }
  bool reached(int member) const override { return flags_.test(member); }

  Value flow(int member) const override { return member == 0 ? phi_ : -phi_; }

  Value residual_value(std::uint64_t subset, const Phase&) const override {
    switch (subset & 3u) {
      case 1: return a_ - phi_;
      case 2: return b_ + phi_;
      default: return 0;
    }
  }

  Value alpha_bound() const override { return 2; }

 private:
  Value a_;
  Value b_;
  Value phi_ = 0;
  ReachedFlags flags_;
};

}  // namespace sfmin
