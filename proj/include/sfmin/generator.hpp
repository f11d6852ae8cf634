#pragma once

#include <cstdint>

#include "sfmin/instance.hpp"

namespace sfmin {

// Hand-rolled PRNG so generated instances are byte-identical across standard
// libraries and platforms for a fixed seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  Value range(Value lo, Value hi) {
    return lo + static_cast<Value>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

struct GeneratorConfig {
  int nodes = 8;
  Value max_value = 50;
  int max_arity = 6;
  std::uint64_t seed = 0;

  struct TermRequest {
    TermKind kind;
    int count = 1;
    int arity = 0;  // 0 = random in [2, max_arity]
  };
  std::vector<TermRequest> requests;
  int mixed_terms = 0;  // extra terms of random kind
  bool random_offset = false;
};

namespace detail {

inline std::vector<NodeId> pick_distinct(SplitMix64& rng, int n, int count) {
  std::vector<NodeId> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

// Integer tent min(k*(m-p), p*(m-k)): concave, zero at both ends, peak
// p*(m-p). Non-negative integer combinations of tents stay normalized.
inline Value tent(int k, int p, int m) {
  return std::min<Value>(static_cast<Value>(k) * (m - p),
                         static_cast<Value>(p) * (m - k));
}

inline std::vector<Value> random_concave(SplitMix64& rng, int m, Value budget) {
  std::vector<Value> g(m + 1, 0);
  const int tents = 1 + static_cast<int>(rng.below(3));
  for (int r = 0; r < tents; ++r) {
    const int p = 1 + static_cast<int>(rng.below(m - 1));
    const Value peak = static_cast<Value>(p) * (m - p);
    const Value w = rng.range(0, std::max<Value>(0, budget / (tents * peak)));
    for (int k = 0; k <= m; ++k) g[k] += w * tent(k, p, m);
  }
  return g;
}

inline Term random_cardinality(SplitMix64& rng, const std::vector<NodeId>& members,
                               Value budget) {
  return make_cardinality(members, random_concave(rng, static_cast<int>(members.size()), budget));
}

// Sum of a normalized concave spine in k'+k'', optional per-axis tents, and
// the two product couplings k'(m''-k'') and k''(m'-k'). Every component is
// non-negative with zero corners, concave along both axes, and Monge, so the
// sum is a valid normalized grid.
inline Term random_bicardinality(SplitMix64& rng, const std::vector<NodeId>& members,
                                 Value budget) {
  const int a = static_cast<int>(members.size());
  const int mp = 1 + static_cast<int>(rng.below(a - 1));
  const int ms = a - mp;
  std::vector<NodeId> qp(members.begin(), members.begin() + mp);
  std::vector<NodeId> qs(members.begin() + mp, members.end());

  const Value part = std::max<Value>(1, budget / 5);
  std::vector<Value> grid(static_cast<size_t>(mp + 1) * (ms + 1), 0);
  auto at = [&](int kp, int ks) -> Value& {
    return grid[static_cast<size_t>(kp) * (ms + 1) + ks];
  };

  const std::vector<Value> spine = random_concave(rng, mp + ms, part);
  const Value lambda = rng.range(0, part / (static_cast<Value>(mp) * ms));
  const Value mu = rng.range(0, part / (static_cast<Value>(mp) * ms));
  std::vector<Value> utent(mp + 1, 0), vtent(ms + 1, 0);
  if (mp >= 2) utent = random_concave(rng, mp, part);
  if (ms >= 2) vtent = random_concave(rng, ms, part);

  for (int kp = 0; kp <= mp; ++kp)
    for (int ks = 0; ks <= ms; ++ks)
      at(kp, ks) = spine[kp + ks] + lambda * kp * (ms - ks) + mu * ks * (mp - kp) +
                   utent[kp] + vtent[ks];
  return make_bicardinality(std::move(qp), std::move(qs), std::move(grid));
}

// Budget-additive pieces min(theta, w(S)) are monotone submodular; the
// Edmonds normalization then yields a normalized table without inflating the
// value range.
inline NormalizedTerm random_general(SplitMix64& rng, const std::vector<NodeId>& members,
                                     Value budget) {
  const int m = static_cast<int>(members.size());
  const int pieces = 1 + static_cast<int>(rng.below(2));
  std::vector<Value> table(size_t{1} << m, 0);
  for (int r = 0; r < pieces; ++r) {
    const Value theta = rng.range(0, std::max<Value>(0, budget / pieces));
    std::vector<Value> w(m);
    for (int t = 0; t < m; ++t) w[t] = rng.range(0, std::max<Value>(1, theta));
    for (std::uint32_t mask = 0; mask < table.size(); ++mask) {
      Value load = 0;
      for (int t = 0; t < m; ++t)
        if (mask >> t & 1) load += w[t];
      table[mask] += std::min(theta, load);
    }
  }
  return normalize_general(members, std::move(table));
}

}  // namespace detail

// Deterministic random instance; always emits normalized terms and validates
// clean by construction.
inline Instance generate_instance(const GeneratorConfig& cfg) {
  SplitMix64 rng(cfg.seed * 0x100000001b3ull + 0xcbf29ce484222325ull);
  Instance inst(cfg.nodes);
  for (int i = 0; i < cfg.nodes; ++i) {
    inst.source_cap[i] = rng.range(0, cfg.max_value);
    inst.sink_cap[i] = rng.range(0, cfg.max_value);
  }
  if (cfg.random_offset) inst.offset = rng.range(-cfg.max_value, cfg.max_value);

  auto emit = [&](TermKind kind, int arity) {
    if (cfg.nodes < 2) return;
    const int max_a = std::min(cfg.max_arity, cfg.nodes);
    int a = arity > 0 ? std::min(arity, cfg.nodes)
                      : 2 + static_cast<int>(rng.below(std::max(1, max_a - 1)));
    if (kind == TermKind::kPairwise) a = 2;
    if (kind == TermKind::kGeneral) a = std::min(a, inst.general_cap);
    const std::vector<NodeId> members = detail::pick_distinct(rng, cfg.nodes, a);
    switch (kind) {
      case TermKind::kPairwise: {
        inst.add_term(make_pairwise(members[0], members[1], rng.range(0, cfg.max_value),
                                    rng.range(0, cfg.max_value)));
        break;
      }
      case TermKind::kCardinality:
        inst.add_term(detail::random_cardinality(rng, members, cfg.max_value));
        break;
      case TermKind::kBicardinality:
        inst.add_term(detail::random_bicardinality(rng, members, cfg.max_value));
        break;
      case TermKind::kGeneral: {
        NormalizedTerm norm = detail::random_general(rng, members, cfg.max_value);
        norm.deltas.apply(inst);
        inst.add_term(std::move(norm.term));
        break;
      }
    }
  };

  for (const auto& req : cfg.requests)
    for (int c = 0; c < req.count; ++c) emit(req.kind, req.arity);
  static constexpr TermKind kKinds[4] = {TermKind::kPairwise, TermKind::kCardinality,
                                         TermKind::kBicardinality, TermKind::kGeneral};
  for (int c = 0; c < cfg.mixed_terms; ++c) emit(kKinds[rng.below(4)], 0);

  inst.finalize();
  return inst;
}

}  // namespace sfmin
