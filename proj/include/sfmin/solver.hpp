#pragma once

#include <bit>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfmin/terms.hpp"

namespace sfmin {

struct PhaseStats {
  Value two_delta = 0;
  std::int64_t augmentations = 0;
  std::int64_t bfs_count = 0;
};

struct KindOpCounters {
  std::int64_t adjust_flow = 0;
  std::int64_t get_neighbors = 0;
  std::int64_t send_flow = 0;
};

struct SolveStats {
  std::vector<PhaseStats> phases;
  KindOpCounters ops[4];  // indexed by TermKind
  Value flow_value = 0;
  std::int64_t total_augmentations = 0;
};

struct SolveResult {
  Value minimum = 0;
  std::vector<NodeId> minimizer;
  SolveStats stats;
};

// One hop through a term: flow leaves `from`, crosses the term's copy pair,
// and enters `to`.
struct AugmentHop {
  int term = -1;
  NodeId from = -1;
  NodeId to = -1;
  int from_member = -1;
  int to_member = -1;
};

struct AugmentingPath {
  NodeId entry = -1;  // the s -> entry hop
  std::vector<AugmentHop> hops;
  NodeId exit = -1;  // the exit -> t hop
};

class AuditError : public std::logic_error {
 public:
  explicit AuditError(const std::string& what) : std::logic_error(what) {}
};

// Capacity-scaling augmenting-path driver. One solver owns all mutable state
// for a run; instances themselves are never modified.
class Solver {
 public:
  struct Options {
    // Re-checks capacity, conservation and per-term base-polyhedron
    // feasibility after step S0 and after every augmentation. Slow.
    bool audit = false;
    // Fired for each augmenting path before it is applied.
    std::function<void(const Solver&, const AugmentingPath&, const Phase&)> on_augment;
  };

  explicit Solver(const Instance& inst) : Solver(inst, Options{}) {}

  Solver(const Instance& inst, Options options)
      : inst_(inst), options_(std::move(options)) {
    phi_source_.assign(inst.n, 0);
    phi_sink_.assign(inst.n, 0);
    excess_.assign(inst.n, 0);
    node_terms_.assign(inst.n, {});
    terms_.reserve(inst.terms.size());
    for (size_t q = 0; q < inst.terms.size(); ++q) {
      terms_.push_back(make_term_state(inst.terms[q]));
      const auto& members = inst.terms[q].members;
      for (size_t t = 0; t < members.size(); ++t)
        node_terms_[members[t]].push_back({static_cast<int>(q), static_cast<int>(t)});
    }
    visited_stamp_.assign(inst.n, 0);
    parent_node_.assign(inst.n, -1);
    parent_term_.assign(inst.n, -1);
    parent_from_member_.assign(inst.n, -1);
    parent_to_member_.assign(inst.n, -1);
  }

  SolveResult solve() {
    const Value start = initial_two_delta();
    for (Value two_delta = start;; two_delta /= 2) {
      run_phase(Phase{two_delta});
      if (two_delta == 1) break;
    }

    SolveResult result;
    result.minimizer = extract_cut();
    result.stats = stats_;
    result.stats.flow_value = flow_value();
    result.minimum = result.stats.flow_value + inst_.offset;
    if (result.minimum != evaluate(inst_, result.minimizer))
      throw AuditError("strong duality failed: flow value does not match the extracted cut");
    return result;
  }

  // --- state inspection (audits, hooks, tests) ---
  const Instance& instance() const { return inst_; }
  int term_count() const { return static_cast<int>(terms_.size()); }
  const TermState& term_state(int q) const { return *terms_[q]; }
  Value source_flow(NodeId i) const { return phi_source_[i]; }
  Value sink_flow(NodeId i) const { return phi_sink_[i]; }
  Value flow_value() const {
    Value v = 0;
    for (Value x : phi_source_) v += x;
    return v;
  }

  // Nodes reachable from s in the residual arc set of the final phase.
  std::vector<NodeId> extract_cut() {
    AugmentingPath ignored;
    find_path(Phase{1}, /*stop_at_sink=*/false, ignored);
    std::vector<NodeId> cut;
    for (NodeId i = 0; i < inst_.n; ++i)
      if (visited(i)) cut.push_back(i);
    return cut;
  }

 private:
  struct TermRef {
    int term;
    int member;
  };

  Value initial_two_delta() const {
    Value raw = 0;
    for (Value v : inst_.source_cap) raw = std::max(raw, v);
    for (Value v : inst_.sink_cap) raw = std::max(raw, v);
    for (const Term& t : inst_.terms) raw = std::max(raw, max_abs_term_value(t));
    if (raw == 0) return 1;  // a zero instance needs only the final phase
    return 2 * static_cast<Value>(std::bit_ceil(static_cast<std::uint64_t>(raw)));
  }

  void run_phase(const Phase& phase) {
    PhaseStats phase_stats;
    phase_stats.two_delta = phase.two_delta;

    // S0: project each term flow into B(f^Delta), then restore conservation
    // by sending every node's surplus back to s (deficit: draw from t). Both
    // reverse arcs are uncapacitated during phases.
    for (size_t q = 0; q < terms_.size(); ++q) {
      deltas_.clear();
      terms_[q]->adjust_flow(phase, deltas_);
      ++stats_.ops[static_cast<int>(terms_[q]->kind())].adjust_flow;
      const auto& members = inst_.terms[q].members;
      for (size_t t = 0; t < members.size(); ++t) excess_[members[t]] -= deltas_[t];
    }
    for (NodeId i = 0; i < inst_.n; ++i) {
      if (excess_[i] > 0)
        phi_source_[i] -= excess_[i];
      else if (excess_[i] < 0)
        phi_sink_[i] += excess_[i];
      excess_[i] = 0;
    }
    if (options_.audit) audit_state(phase, "after S0");

    AugmentingPath path;
    while (find_path(phase, /*stop_at_sink=*/true, path)) {
      ++phase_stats.bfs_count;
      ++phase_stats.augmentations;
      ++stats_.total_augmentations;
      if (options_.on_augment) options_.on_augment(*this, path, phase);
      apply(path, phase);
      if (options_.audit) audit_state(phase, "after augmentation");
    }
    ++phase_stats.bfs_count;  // the final BFS that found no path
    stats_.phases.push_back(phase_stats);
  }

  bool visited(NodeId i) const { return visited_stamp_[i] == bfs_epoch_; }

  void visit(NodeId i, NodeId from, int term, int from_member, int to_member) {
    visited_stamp_[i] = bfs_epoch_;
    parent_node_[i] = from;
    parent_term_[i] = term;
    parent_from_member_[i] = from_member;
    parent_to_member_[i] = to_member;
    queue_.push_back(i);
  }

  // Shortest-hop BFS over {s} u V u {t} with term copies expanded through
  // get_neighbors. Shortest BFS paths are minimal: a same-term shortcut arc
  // would give a strictly shorter hop path.
  bool find_path(const Phase& phase, bool stop_at_sink, AugmentingPath& path) {
    ++bfs_epoch_;
    queue_.clear();
    for (auto& term : terms_) term->reset_reached();
    const Value need = phase.ceil_delta();
    for (NodeId i = 0; i < inst_.n; ++i)
      if (inst_.source_cap[i] - phi_source_[i] >= need) visit(i, -1, -1, -1, -1);

    for (size_t head = 0; head < queue_.size(); ++head) {
      const NodeId i = queue_[head];
      if (stop_at_sink && inst_.sink_cap[i] - phi_sink_[i] >= need) {
        reconstruct(i, path);
        return true;
      }
      for (const TermRef& ref : node_terms_[i]) {
        TermState& term = *terms_[ref.term];
        if (term.reached(ref.member)) continue;
        neighbors_.clear();
        term.get_neighbors(ref.member, phase, neighbors_);
        ++stats_.ops[static_cast<int>(term.kind())].get_neighbors;
        for (int member : neighbors_) {
          const NodeId j = term.member_nodes()[member];
          if (!visited(j)) visit(j, i, ref.term, ref.member, member);
        }
      }
    }
    return false;
  }

  void reconstruct(NodeId exit, AugmentingPath& path) const {
    path.hops.clear();
    path.exit = exit;
    NodeId v = exit;
    while (parent_term_[v] != -1) {
      path.hops.push_back(AugmentHop{parent_term_[v], parent_node_[v], v,
                                     parent_from_member_[v], parent_to_member_[v]});
      v = parent_node_[v];
    }
    path.entry = v;
    std::reverse(path.hops.begin(), path.hops.end());
  }

  void apply(const AugmentingPath& path, const Phase& phase) {
    const Value d = phase.ceil_delta();
    phi_source_[path.entry] += d;
    for (const AugmentHop& hop : path.hops) {
      terms_[hop.term]->send_flow(hop.from_member, hop.to_member, phase);
      ++stats_.ops[static_cast<int>(terms_[hop.term]->kind())].send_flow;
    }
    phi_sink_[path.exit] += d;
  }

  // Full feasibility audit: capacity, conservation, multiples of
  // ceil(Delta), and per-term base-polyhedron membership (enumerated when
  // small, closed forms otherwise).
  void audit_state(const Phase& phase, const char* where) const {
    auto fail = [&](const std::string& msg) {
      throw AuditError(std::string("audit ") + where + ": " + msg);
    };
    const Value d = phase.ceil_delta();
    std::vector<Value> term_out(inst_.n, 0);
    for (const auto& term : terms_)
      for (int t = 0; t < term->arity(); ++t)
        term_out[term->member_nodes()[t]] += term->flow(t);
    for (NodeId i = 0; i < inst_.n; ++i) {
      if (phi_source_[i] > inst_.source_cap[i]) fail("source capacity violated");
      if (phi_sink_[i] > inst_.sink_cap[i]) fail("sink capacity violated");
      if (phi_source_[i] % d != 0 || phi_sink_[i] % d != 0)
        fail("flow is not a multiple of ceil(Delta)");
      if (phi_source_[i] - phi_sink_[i] - term_out[i] != 0) fail("conservation violated");
    }
    for (size_t q = 0; q < terms_.size(); ++q) {
      const TermState& term = *terms_[q];
      const int m = term.arity();
      for (int t = 0; t < m; ++t)
        if (term.flow(t) % d != 0) fail("term flow is not a multiple of ceil(Delta)");
      const bool enumerable = term.kind() == TermKind::kGeneral || m <= 12;
      if (enumerable) {
        const std::uint64_t full = (std::uint64_t{1} << m) - 1;
        if (term.residual_value(0, phase) != 0) fail("residual(empty) nonzero");
        if (term.residual_value(full, phase) != 0) fail("residual(Q) nonzero");
        for (std::uint64_t s = 0; s <= full; ++s)
          if (term.residual_value(s, phase) < 0) fail("negative residual");
      } else if (term.kind() == TermKind::kCardinality) {
        const auto& card = static_cast<const CardinalityTermState&>(term);
        const auto scratch = card.gbar_from_scratch();
        if (scratch.back() != 0) fail("cardinality flow does not sum to zero");
        for (Value v : scratch)
          if (v < 0) fail("negative cardinality residual");
      } else if (term.kind() == TermKind::kBicardinality) {
        const auto& bi = static_cast<const BicardinalityTermState&>(term);
        const auto& data = inst_.terms[q].bicardinality();
        const int mp = static_cast<int>(data.qprime.size());
        const int ms = static_cast<int>(data.qsecond.size());
        if (bi.gbar(mp, ms, phase) != 0) fail("bicardinality flow does not sum to zero");
        for (int kp = 0; kp <= mp; ++kp)
          for (int ks = 0; ks <= ms; ++ks)
            if (bi.gbar(kp, ks, phase) < 0) fail("negative bicardinality residual");
      }
    }
  }

  const Instance& inst_;
  Options options_;
  std::vector<std::unique_ptr<TermState>> terms_;
  std::vector<std::vector<TermRef>> node_terms_;
  std::vector<Value> phi_source_;  // phi_si
  std::vector<Value> phi_sink_;    // phi_it
  std::vector<Value> excess_;
  SolveStats stats_;

  // BFS scratch
  std::uint64_t bfs_epoch_ = 0;
  std::vector<std::uint64_t> visited_stamp_;
  std::vector<NodeId> parent_node_;
  std::vector<int> parent_term_;
  std::vector<int> parent_from_member_;
  std::vector<int> parent_to_member_;
  std::vector<NodeId> queue_;
  std::vector<int> neighbors_;
  std::vector<Value> deltas_;
};

inline SolveResult solve(const Instance& inst, Solver::Options options = {}) {
  Solver solver(inst, std::move(options));
  return solver.solve();
}

}  // namespace sfmin
