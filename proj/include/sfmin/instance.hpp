#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "sfmin/common.hpp"

namespace sfmin {

// Default and hard limits on |Q| for terms given as full value tables; the
// table (and every enumeration over it) has 2^|Q| entries.
inline constexpr int kDefaultGeneralCap = 16;
inline constexpr int kHardGeneralCap = 20;

enum class TermKind { kPairwise, kCardinality, kBicardinality, kGeneral };

inline const char* term_kind_name(TermKind k) {
  switch (k) {
    case TermKind::kPairwise: return "pairwise";
    case TermKind::kCardinality: return "cardinality";
    case TermKind::kBicardinality: return "bicardinality";
    case TermKind::kGeneral: return "general";
  }
  return "?";
}

// f({i}) = a, f({j}) = b for members (i, j); f(empty) = f(Q) = 0.
struct PairwiseData {
  Value a = 0;
  Value b = 0;
};

// f(S) = g(|S|); g has m+1 entries and must be concave.
struct CardinalityData {
  std::vector<Value> g;
};

// f(S) = g(|S cap Q'|, |S cap Q''|); g is a (m'+1) x (m''+1) row-major grid
// that must be concave along both axes and satisfy the Monge inequality.
struct BicardinalityData {
  std::vector<NodeId> qprime;
  std::vector<NodeId> qsecond;
  std::vector<Value> g;

  Value at(int kp, int ks) const {
    return g[static_cast<size_t>(kp) * (qsecond.size() + 1) + ks];
  }
  Value& at(int kp, int ks) {
    return g[static_cast<size_t>(kp) * (qsecond.size() + 1) + ks];
  }
};

// Full value table indexed by member bitmask; bit t corresponds to
// members[t] (members sorted ascending, so the lowest node id is bit 0).
struct GeneralData {
  std::vector<Value> table;
};

struct Term {
  TermKind kind = TermKind::kPairwise;
  std::vector<NodeId> members;  // sorted ascending, distinct
  std::variant<PairwiseData, CardinalityData, BicardinalityData, GeneralData> data;

  int arity() const { return static_cast<int>(members.size()); }
  const PairwiseData& pairwise() const { return std::get<PairwiseData>(data); }
  const CardinalityData& cardinality() const { return std::get<CardinalityData>(data); }
  const BicardinalityData& bicardinality() const { return std::get<BicardinalityData>(data); }
  const GeneralData& general() const { return std::get<GeneralData>(data); }
};

namespace detail {

inline Value floor_div(Value a, Value b) {
  assert(b > 0);
  Value q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

inline Value ceil_div(Value a, Value b) {
  assert(b > 0);
  return -floor_div(-a, b);
}

inline bool sorted_distinct(const std::vector<NodeId>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] >= v[i]) return false;
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Term constructors (canonicalize member order, reject duplicates)
// ---------------------------------------------------------------------------

inline Term make_pairwise(NodeId i, NodeId j, Value a, Value b) {
  if (i == j) throw InstanceError("pairwise term with duplicate member");
  Term t;
  t.kind = TermKind::kPairwise;
  if (i < j) {
    t.members = {i, j};
    t.data = PairwiseData{a, b};
  } else {
    t.members = {j, i};
    t.data = PairwiseData{b, a};
  }
  return t;
}

inline Term make_cardinality(std::vector<NodeId> members, std::vector<Value> g) {
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end())
    throw InstanceError("cardinality term with duplicate member");
  if (g.size() != members.size() + 1)
    throw InstanceError("cardinality payload must have |Q|+1 entries");
  Term t;
  t.kind = TermKind::kCardinality;
  t.members = std::move(members);
  t.data = CardinalityData{std::move(g)};
  return t;
}

inline Term make_bicardinality(std::vector<NodeId> qprime, std::vector<NodeId> qsecond,
                               std::vector<Value> grid) {
  std::sort(qprime.begin(), qprime.end());
  std::sort(qsecond.begin(), qsecond.end());
  Term t;
  t.kind = TermKind::kBicardinality;
  t.members.reserve(qprime.size() + qsecond.size());
  std::merge(qprime.begin(), qprime.end(), qsecond.begin(), qsecond.end(),
             std::back_inserter(t.members));
  if (std::adjacent_find(t.members.begin(), t.members.end()) != t.members.end())
    throw InstanceError("bicardinality term with duplicate member");
  if (qprime.empty() || qsecond.empty())
    throw InstanceError("bicardinality term needs non-empty Q' and Q''");
  if (grid.size() != (qprime.size() + 1) * (qsecond.size() + 1))
    throw InstanceError("bicardinality grid has wrong shape");
  t.data = BicardinalityData{std::move(qprime), std::move(qsecond), std::move(grid)};
  return t;
}

// `table` is indexed by bitmask over `members` as given; the constructor
// permutes it into sorted-member order.
inline Term make_general(std::vector<NodeId> members, std::vector<Value> table) {
  const int m = static_cast<int>(members.size());
  if (m > kHardGeneralCap) throw InstanceError("general term exceeds hard size cap");
  if (table.size() != (size_t{1} << m))
    throw InstanceError("general table must have 2^|Q| entries");
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](int x, int y) { return members[x] < members[y]; });
  std::vector<NodeId> sorted(m);
  for (int t = 0; t < m; ++t) sorted[t] = members[perm[t]];
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InstanceError("general term with duplicate member");
  bool identity = true;
  for (int t = 0; t < m; ++t) identity &= perm[t] == t;
  if (!identity) {
    std::vector<Value> remapped(table.size());
    for (std::uint32_t mask = 0; mask < table.size(); ++mask) {
      std::uint32_t old_mask = 0;
      for (int t = 0; t < m; ++t)
        if (mask & (1u << t)) old_mask |= 1u << perm[t];
      remapped[mask] = table[old_mask];
    }
    table = std::move(remapped);
  }
  Term t;
  t.kind = TermKind::kGeneral;
  t.members = std::move(sorted);
  t.data = GeneralData{std::move(table)};
  return t;
}

// ---------------------------------------------------------------------------
// Term evaluation
// ---------------------------------------------------------------------------

// f_Q applied to a subset of Q given as a bitmask over member positions.
inline Value term_value_mask(const Term& term, std::uint64_t mask) {
  switch (term.kind) {
    case TermKind::kPairwise: {
      const auto& d = term.pairwise();
      switch (mask & 3u) {
        case 1: return d.a;
        case 2: return d.b;
        default: return 0;
      }
    }
    case TermKind::kCardinality:
      return term.cardinality().g[std::popcount(mask)];
    case TermKind::kBicardinality: {
      const auto& d = term.bicardinality();
      int kp = 0, ks = 0;
      for (int t = 0; t < term.arity(); ++t) {
        if (!(mask >> t & 1)) continue;
        NodeId v = term.members[t];
        if (std::binary_search(d.qprime.begin(), d.qprime.end(), v))
          ++kp;
        else
          ++ks;
      }
      return d.at(kp, ks);
    }
    case TermKind::kGeneral:
      return term.general().table[mask];
  }
  return 0;
}

// f_Q(S cap Q) where `in_set[v]` says whether node v lies in S.
inline Value term_value(const Term& term, const std::vector<char>& in_set) {
  std::uint64_t mask = 0;
  for (int t = 0; t < term.arity(); ++t)
    if (in_set[term.members[t]]) mask |= std::uint64_t{1} << t;
  return term_value_mask(term, mask);
}

inline Value max_abs_term_value(const Term& term) {
  Value m = 0;
  auto fold = [&m](const std::vector<Value>& vals) {
    for (Value v : vals) m = std::max(m, v < 0 ? -v : v);
  };
  switch (term.kind) {
    case TermKind::kPairwise: {
      const auto& d = term.pairwise();
      m = std::max(d.a < 0 ? -d.a : d.a, d.b < 0 ? -d.b : d.b);
      break;
    }
    case TermKind::kCardinality: fold(term.cardinality().g); break;
    case TermKind::kBicardinality: fold(term.bicardinality().g); break;
    case TermKind::kGeneral: fold(term.general().table); break;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Instance
// ---------------------------------------------------------------------------

struct Instance {
  int n = 0;
  std::vector<Value> source_cap;  // c_si
  std::vector<Value> sink_cap;    // c_it
  std::vector<Term> terms;
  Value offset = 0;
  int general_cap = kDefaultGeneralCap;

  // Cached bound U >= max(1, capacities, |f_Q| values); set by finalize().
  Value value_bound = 1;

  explicit Instance(int nodes = 0)
      : n(nodes), source_cap(nodes, 0), sink_cap(nodes, 0) {}

  // Singleton terms are folded into the unary capacities here; everything
  // else is stored as-is.
  void add_term(Term term) {
    if (term.members.empty()) throw InstanceError("term with no members");
    if (term.arity() == 1) {
      fold_singleton(term);
      return;
    }
    terms.push_back(std::move(term));
  }

  void add_unary(NodeId node, Value delta, bool towards_sink) {
    if (towards_sink)
      sink_cap[node] += delta;
    else
      source_cap[node] += delta;
  }

  // Absorb f({i}) into the unaries: the cost v1 when i is in S and v0 when it
  // is not becomes offset + a one-sided capacity, keeping both caps >= 0.
  void fold_unary_cost(NodeId node, Value cost_out, Value cost_in) {
    offset += cost_out;
    Value d = cost_in - cost_out;
    if (d >= 0)
      sink_cap[node] += d;
    else {
      source_cap[node] += -d;
      offset += d;
    }
  }

  void finalize() {
    Value u = 0;
    for (Value v : source_cap) u = std::max(u, v);
    for (Value v : sink_cap) u = std::max(u, v);
    for (const Term& t : terms) u = std::max(u, max_abs_term_value(t));
    value_bound = std::max<Value>(1, u);
  }

 private:
  void fold_singleton(const Term& term) {
    NodeId node = term.members[0];
    Value v0 = term_value_mask(term, 0);
    Value v1 = term_value_mask(term, 1);
    fold_unary_cost(node, v0, v1);
  }
};

// Exact evaluation of f(S) per the sum decomposition; `in_set` has n entries.
inline Value evaluate(const Instance& inst, const std::vector<char>& in_set) {
  assert(static_cast<int>(in_set.size()) == inst.n);
  Value total = inst.offset;
  for (int i = 0; i < inst.n; ++i)
    total += in_set[i] ? inst.sink_cap[i] : inst.source_cap[i];
  for (const Term& t : inst.terms) total += term_value(t, in_set);
  return total;
}

inline Value evaluate(const Instance& inst, const std::vector<NodeId>& subset) {
  std::vector<char> in_set(inst.n, 0);
  for (NodeId v : subset) {
    if (v < 0 || v >= inst.n) throw InstanceError("node id out of range");
    in_set[v] = 1;
  }
  return evaluate(inst, in_set);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

namespace detail {

// f(S+i) + f(S+j) >= f(S+i+j) + f(S) for all S and i != j outside S.
inline bool table_is_submodular(const std::vector<Value>& table, int m) {
  for (std::uint32_t s = 0; s < (1u << m); ++s) {
    for (int i = 0; i < m; ++i) {
      if (s >> i & 1) continue;
      for (int j = i + 1; j < m; ++j) {
        if (s >> j & 1) continue;
        Value lhs = table[s | (1u << i)] + table[s | (1u << j)];
        Value rhs = table[s | (1u << i) | (1u << j)] + table[s];
        if (lhs < rhs) return false;
      }
    }
  }
  return true;
}

inline void check_term(const Instance& inst, const Term& term, int idx,
                       bool require_normalized, ValidationReport& report) {
  auto fail = [&](const std::string& msg) {
    report.violations.push_back("term " + std::to_string(idx) + " (" +
                                term_kind_name(term.kind) + "): " + msg);
  };
  auto fail_norm = [&](const std::string& msg) {
    if (require_normalized) fail(msg);
  };

  if (term.arity() < 2) {
    fail("has fewer than 2 members");
    return;
  }
  if (!sorted_distinct(term.members)) {
    fail("members must be distinct and sorted ascending");
    return;
  }
  for (NodeId v : term.members)
    if (v < 0 || v >= inst.n) {
      fail("member node id out of range");
      return;
    }

  switch (term.kind) {
    case TermKind::kPairwise: {
      const auto& d = term.pairwise();
      if (d.a + d.b < 0) fail("not submodular: f({i}) + f({j}) < 0");
      if (d.a < 0 || d.b < 0)
        fail_norm("singleton value negative; normalized terms are non-negative");
      break;
    }
    case TermKind::kCardinality: {
      const auto& g = term.cardinality().g;
      const size_t m = term.members.size();
      if (g.size() != m + 1) {
        fail("payload must have |Q|+1 entries");
        break;
      }
      for (size_t k = 2; k <= m; ++k)
        if (g[k] - g[k - 1] > g[k - 1] - g[k - 2]) {
          fail("g is not concave");
          break;
        }
      if (g[0] != 0) fail_norm("g(0) must be 0");
      if (g[m] != 0) fail_norm("g(|Q|) must be 0");
      for (Value v : g)
        if (v < 0) {
          fail_norm("g has a negative value");
          break;
        }
      break;
    }
    case TermKind::kBicardinality: {
      const auto& d = term.bicardinality();
      const int mp = static_cast<int>(d.qprime.size());
      const int ms = static_cast<int>(d.qsecond.size());
      if (mp == 0 || ms == 0) {
        fail("Q' and Q'' must be non-empty");
        break;
      }
      if (d.g.size() != static_cast<size_t>(mp + 1) * (ms + 1)) {
        fail("grid has wrong shape");
        break;
      }
      if (!sorted_distinct(d.qprime) || !sorted_distinct(d.qsecond))
        fail("Q' and Q'' must be sorted and distinct");
      bool concave = true, monge = true, nonneg = true;
      for (int kp = 0; kp <= mp; ++kp)
        for (int ks = 0; ks <= ms; ++ks) {
          if (d.at(kp, ks) < 0) nonneg = false;
          if (kp >= 2 &&
              d.at(kp, ks) - d.at(kp - 1, ks) > d.at(kp - 1, ks) - d.at(kp - 2, ks))
            concave = false;
          if (ks >= 2 &&
              d.at(kp, ks) - d.at(kp, ks - 1) > d.at(kp, ks - 1) - d.at(kp, ks - 2))
            concave = false;
          if (kp >= 1 && ks >= 1 &&
              d.at(kp, ks) + d.at(kp - 1, ks - 1) > d.at(kp - 1, ks) + d.at(kp, ks - 1))
            monge = false;
        }
      if (!concave) fail("grid is not concave along both axes");
      if (!monge) fail("grid violates the Monge inequality");
      if (!nonneg) fail_norm("grid has a negative value");
      if (d.at(0, 0) != 0) fail_norm("g(0,0) must be 0");
      if (d.at(mp, ms) != 0) fail_norm("g(m',m'') must be 0");
      break;
    }
    case TermKind::kGeneral: {
      const auto& table = term.general().table;
      const int m = term.arity();
      if (m > inst.general_cap || m > kHardGeneralCap) {
        fail("exceeds general-term size cap");
        break;
      }
      if (table.size() != (size_t{1} << m)) {
        fail("table must have 2^|Q| entries");
        break;
      }
      if (table.front() != 0) fail_norm("f(empty set) must be 0");
      if (table.back() != 0) fail_norm("f(Q) must be 0");
      for (Value v : table)
        if (v < 0) {
          fail_norm("table has a negative value");
          break;
        }
      if (m <= 12) {
        if (!table_is_submodular(table, m)) fail("not submodular");
      } else {
        report.warnings.push_back(
            "term " + std::to_string(idx) +
            " (general): too large for exhaustive submodularity check; trusted");
      }
      break;
    }
  }
}

}  // namespace detail

// Full validation checks every structural invariant plus the normalization
// condition on each term; `require_normalized = false` relaxes only the
// latter, which is what `normalize` needs to load its input.
inline ValidationReport validate(const Instance& inst, bool require_normalized = true) {
  ValidationReport report;
  if (inst.n < 0) report.violations.push_back("negative node count");
  if (inst.source_cap.size() != static_cast<size_t>(inst.n) ||
      inst.sink_cap.size() != static_cast<size_t>(inst.n)) {
    report.violations.push_back("unary capacity vectors must have n entries");
    return report;
  }
  for (int i = 0; i < inst.n; ++i) {
    if (inst.source_cap[i] < 0)
      report.violations.push_back("c_s" + std::to_string(i) + " is negative");
    if (inst.sink_cap[i] < 0)
      report.violations.push_back("c_" + std::to_string(i) + "t is negative");
  }

  // Overflow guard: all intermediates must stay well inside signed 64-bit,
  // so value magnitudes themselves get an early hard bound.
  Value u = 1;
  for (Value v : inst.source_cap) u = std::max(u, v < 0 ? -v : v);
  for (Value v : inst.sink_cap) u = std::max(u, v < 0 ? -v : v);
  for (const Term& t : inst.terms) u = std::max(u, max_abs_term_value(t));
  Value off = inst.offset < 0 ? -inst.offset : inst.offset;
  if (u > kValueBound / 8 || off > kValueBound / 8) {
    report.violations.push_back("value magnitudes exceed the arithmetic safety bound");
    return report;
  }

  for (size_t idx = 0; idx < inst.terms.size(); ++idx)
    detail::check_term(inst, inst.terms[idx], static_cast<int>(idx),
                       require_normalized, report);

  Value max_arity = 0;
  bool sum_overflow = false;
  Value sum_max = 0;
  Value sum_sq = 0;
  for (const Term& t : inst.terms) {
    max_arity = std::max<Value>(max_arity, t.arity());
    sum_sq += static_cast<Value>(t.arity()) * t.arity();
    Value mv = max_abs_term_value(t);
    if (sum_max > kValueBound - mv)
      sum_overflow = true;
    else
      sum_max += mv;
  }
  auto product_exceeds = [&](Value a, Value b) {
    return a != 0 && b != 0 && a > kValueBound / b;
  };
  if (product_exceeds(static_cast<Value>(inst.n), u))
    report.violations.push_back("n * U exceeds the arithmetic safety bound");
  if (sum_overflow)
    report.violations.push_back("sum of term magnitudes exceeds the arithmetic safety bound");
  if (product_exceeds(2 * u, max_arity * max_arity))
    report.violations.push_back("2U * max|Q|^2 exceeds the arithmetic safety bound");
  if (product_exceeds(4 * u, sum_sq))
    report.violations.push_back("4U * sum of |Q|^2 exceeds the arithmetic safety bound");

  return report;
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

struct UnaryDeltas {
  std::vector<std::pair<NodeId, Value>> add_source;  // c_si += v
  std::vector<std::pair<NodeId, Value>> add_sink;    // c_it += v
  Value add_offset = 0;

  void apply(Instance& inst) const {
    for (auto [node, v] : add_source) inst.source_cap[node] += v;
    for (auto [node, v] : add_sink) inst.sink_cap[node] += v;
    inst.offset += add_offset;
  }

  // slope * [node in S] == slope + (-slope) * [node not in S]
  void add_member_slope(NodeId node, Value slope) {
    if (slope >= 0) {
      if (slope != 0) add_sink.emplace_back(node, slope);
    } else {
      add_source.emplace_back(node, -slope);
      add_offset += slope;
    }
  }
};

struct NormalizedTerm {
  Term term;
  UnaryDeltas deltas;
};

// Shift by f(empty), peel off the Edmonds greedy base vector, and return the
// residual table, which is normalized whenever the input is submodular.
inline NormalizedTerm normalize_general(std::vector<NodeId> members,
                                        std::vector<Value> table) {
  Term raw = make_general(std::move(members), std::move(table));
  const int m = raw.arity();
  const auto& tab = raw.general().table;
  if (m <= kDefaultGeneralCap && !detail::table_is_submodular(tab, m))
    throw NormalizeError("general table is not submodular");

  const bool already = tab.front() == 0 && tab.back() == 0 &&
                       std::all_of(tab.begin(), tab.end(), [](Value v) { return v >= 0; });
  if (already) {
    NormalizedTerm out;
    out.term = std::move(raw);
    return out;
  }

  const Value f_empty = tab[0];
  std::vector<Value> base(m);
  std::uint32_t prefix = 0;
  Value prev = 0;
  for (int t = 0; t < m; ++t) {
    prefix |= 1u << t;
    Value cur = tab[prefix] - f_empty;
    base[t] = cur - prev;
    prev = cur;
  }

  NormalizedTerm out;
  std::vector<Value> norm(tab.size());
  for (std::uint32_t mask = 0; mask < tab.size(); ++mask) {
    Value phi = 0;
    for (int t = 0; t < m; ++t)
      if (mask >> t & 1) phi += base[t];
    norm[mask] = tab[mask] - f_empty - phi;
    if (norm[mask] < 0)
      throw NormalizeError("general table is not submodular (greedy base vector escapes it)");
  }
  out.deltas.add_offset = f_empty;
  for (int t = 0; t < m; ++t) out.deltas.add_member_slope(raw.members[t], base[t]);
  out.term = make_general(raw.members, std::move(norm));
  return out;
}

// Constant-slope normalization: subtract g(0) + s*k with the integer slope
// s = (g(m) - g(0)) / m. Structure-preserving, but only defined when the
// slope is integral.
inline NormalizedTerm normalize_cardinality(std::vector<NodeId> members,
                                            std::vector<Value> g) {
  Term raw = make_cardinality(std::move(members), std::move(g));
  const auto& gv = raw.cardinality().g;
  const int m = raw.arity();
  for (int k = 2; k <= m; ++k)
    if (gv[k] - gv[k - 1] > gv[k - 1] - gv[k - 2])
      throw NormalizeError("cardinality payload is not concave");
  const Value rise = gv[m] - gv[0];
  if (rise % m != 0)
    throw NormalizeError(
        "cardinality slope (g(m)-g(0))/m is not an integer; represent the term "
        "as a general table instead (possible when |Q| is within the size cap)");
  const Value slope = rise / m;

  NormalizedTerm out;
  std::vector<Value> norm(gv.size());
  for (int k = 0; k <= m; ++k) norm[k] = gv[k] - gv[0] - slope * k;
  out.deltas.add_offset = gv[0];
  for (NodeId v : raw.members) out.deltas.add_member_slope(v, slope);
  out.term = make_cardinality(raw.members, std::move(norm));
  assert(out.term.cardinality().g.front() == 0 && out.term.cardinality().g.back() == 0);
  return out;
}

// Pairwise terms normalize through the 2-member Edmonds route and stay
// pairwise: the residual table has zero boundary values by construction.
inline NormalizedTerm normalize_pairwise(NodeId i, NodeId j, Value a, Value b) {
  Term raw = make_pairwise(i, j, a, b);
  const auto& d = raw.pairwise();
  NormalizedTerm general = normalize_general(
      raw.members, std::vector<Value>{0, d.a, d.b, 0});
  const auto& table = general.term.general().table;
  NormalizedTerm out;
  out.term = make_pairwise(raw.members[0], raw.members[1], table[1], table[2]);
  out.deltas = std::move(general.deltas);
  return out;
}

// Two-slope normalization: find integers (a, b) with a*m' + b*m'' spanning the
// corner-to-corner rise such that g - g(0,0) - a*k' - b*k'' is non-negative.
inline NormalizedTerm normalize_bicardinality(std::vector<NodeId> qprime,
                                              std::vector<NodeId> qsecond,
                                              std::vector<Value> grid) {
  Term raw = make_bicardinality(std::move(qprime), std::move(qsecond), std::move(grid));
  const auto& d = raw.bicardinality();
  const Value mp = static_cast<Value>(d.qprime.size());
  const Value ms = static_cast<Value>(d.qsecond.size());

  for (int kp = 0; kp <= mp; ++kp)
    for (int ks = 0; ks <= ms; ++ks) {
      if (kp >= 2 &&
          d.at(kp, ks) - d.at(kp - 1, ks) > d.at(kp - 1, ks) - d.at(kp - 2, ks))
        throw NormalizeError("bicardinality grid is not concave along k'");
      if (ks >= 2 &&
          d.at(kp, ks) - d.at(kp, ks - 1) > d.at(kp, ks - 1) - d.at(kp, ks - 2))
        throw NormalizeError("bicardinality grid is not concave along k''");
      if (kp >= 1 && ks >= 1 &&
          d.at(kp, ks) + d.at(kp - 1, ks - 1) > d.at(kp - 1, ks) + d.at(kp, ks - 1))
        throw NormalizeError("bicardinality grid violates the Monge inequality");
    }

  const bool already =
      d.at(0, 0) == 0 && d.at(static_cast<int>(mp), static_cast<int>(ms)) == 0 &&
      std::all_of(d.g.begin(), d.g.end(), [](Value v) { return v >= 0; });
  if (already) {
    NormalizedTerm out;
    out.term = std::move(raw);
    return out;
  }

  const Value corner = d.at(0, 0);
  const Value rise = d.at(static_cast<int>(mp), static_cast<int>(ms)) - corner;
  const Value a_max = detail::floor_div(d.at(static_cast<int>(mp), 0) - corner, mp);
  const Value b_max = detail::floor_div(d.at(0, static_cast<int>(ms)) - corner, ms);
  const Value a_min = detail::ceil_div(rise - b_max * ms, mp);

  for (Value a = a_min; a <= a_max; ++a) {
    if ((rise - a * mp) % ms != 0) continue;
    const Value b = (rise - a * mp) / ms;
    std::vector<Value> norm(d.g.size());
    bool feasible = true;
    for (Value kp = 0; kp <= mp && feasible; ++kp)
      for (Value ks = 0; ks <= ms; ++ks) {
        Value v = d.at(static_cast<int>(kp), static_cast<int>(ks)) - corner - a * kp - b * ks;
        if (v < 0) {
          feasible = false;
          break;
        }
        norm[static_cast<size_t>(kp) * (ms + 1) + ks] = v;
      }
    if (!feasible) continue;

    NormalizedTerm out;
    out.deltas.add_offset = corner;
    for (NodeId v : d.qprime) out.deltas.add_member_slope(v, a);
    for (NodeId v : d.qsecond) out.deltas.add_member_slope(v, b);
    out.term = make_bicardinality(d.qprime, d.qsecond, std::move(norm));
    return out;
  }
  throw NormalizeError(
      "no integer slope pair normalizes this bicardinality grid; represent the "
      "term as a general table instead (possible when |Q| is within the size cap)");
}

}  // namespace sfmin
