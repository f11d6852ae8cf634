#pragma once

#include <cstdint>
#include <vector>

#include "sfmin/instance.hpp"
#include "sfmin/phase.hpp"

namespace sfmin {

// Epoch-stamped boolean flags; reset is O(1) so a BFS never pays for nodes it
// does not touch.
class ReachedFlags {
 public:
  void init(int count) {
    stamp_.assign(count, 0);
    epoch_ = 1;
  }
  void reset() { ++epoch_; }
  bool test(int i) const { return stamp_[i] == epoch_; }
  void set(int i) { stamp_[i] = epoch_; }

 private:
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 1;
};

// The contract every term kind implements so the solver stays term-agnostic.
// A term state owns its flow vector phi_Q, its residual structures, and its
// REACHED flags; one solver run owns it exclusively.
class TermState {
 public:
  explicit TermState(const Term& term) : term_(&term) {}
  virtual ~TermState() = default;
  TermState(const TermState&) = delete;
  TermState& operator=(const TermState&) = delete;

  TermKind kind() const { return term_->kind; }
  const Term& term() const { return *term_; }
  int arity() const { return term_->arity(); }
  const std::vector<NodeId>& member_nodes() const { return term_->members; }

  // Phase-start projection of phi_Q into B(f^Delta). Appends the per-member
  // change (phi - phi_before) to `deltas` so the caller can rebalance node
  // conservation.
  virtual void adjust_flow(const Phase& phase, std::vector<Value>& deltas) = 0;

  // Requires REACHED(i) false. Appends exactly the unreached residual-arc
  // targets of member i for this phase, marking them and i reached. No other
  // mutation.
  virtual void get_neighbors(int member, const Phase& phase, std::vector<int>& out) = 0;

  // Moves ceil(Delta) units from member `from` to member `to` through this
  // term; callers must only use arcs that were present when the current BFS
  // ran.
  virtual void send_flow(int from, int to, const Phase& phase) = 0;

  virtual void reset_reached() = 0;
  virtual bool reached(int member) const = 0;

  // phi_Qi.
  virtual Value flow(int member) const = 0;

  // f^Delta_Q(S) - phi_Q(S) for S given as a bitmask over member positions.
  // Exact; used by tests and audits. Requires arity <= 63.
  virtual Value residual_value(std::uint64_t subset, const Phase& phase) const = 0;

  // The per-phase augmentation budget contributed by this term.
  virtual Value alpha_bound() const = 0;

 protected:
  const Term* term_;
};

}  // namespace sfmin
