#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "sfmin/instance.hpp"
#include "sfmin/solver.hpp"

namespace sfmin {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kInstanceFormatVersion = 1;

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) known |= item.key() == key;
    if (!known) throw ParseError("unknown field \"" + item.key() + "\" in " + where);
  }
}

inline Value parse_value(const json& j, const std::string& where) {
  if (!j.is_number_integer())
    throw ParseError(where + " must be an integer");
  return j.get<Value>();
}

inline std::vector<Value> parse_value_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + " must be an array");
  std::vector<Value> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(parse_value(e, where + " entry"));
  return out;
}

inline std::vector<NodeId> parse_node_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + " must be an array");
  std::vector<NodeId> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    Value v = parse_value(e, where + " entry");
    out.push_back(static_cast<NodeId>(v));
  }
  return out;
}

inline Term parse_term(const json& j, int idx) {
  const std::string where = "terms[" + std::to_string(idx) + "]";
  if (!j.is_object()) throw ParseError(where + " must be an object");
  if (!j.contains("type")) throw ParseError(where + " is missing \"type\"");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "pairwise") {
      reject_unknown_keys(j, {"type", "members", "a", "b"}, where);
      auto members = parse_node_array(j.at("members"), where + ".members");
      if (members.size() != 2) throw ParseError(where + " needs exactly 2 members");
      return make_pairwise(members[0], members[1],
                           parse_value(j.at("a"), where + ".a"),
                           parse_value(j.at("b"), where + ".b"));
    }
    if (type == "cardinality") {
      reject_unknown_keys(j, {"type", "members", "g"}, where);
      return make_cardinality(parse_node_array(j.at("members"), where + ".members"),
                              parse_value_array(j.at("g"), where + ".g"));
    }
    if (type == "bicardinality") {
      reject_unknown_keys(j, {"type", "qprime", "qsecond", "g"}, where);
      auto qp = parse_node_array(j.at("qprime"), where + ".qprime");
      auto qs = parse_node_array(j.at("qsecond"), where + ".qsecond");
      const auto& rows = j.at("g");
      if (!rows.is_array() || rows.size() != qp.size() + 1)
        throw ParseError(where + ".g must have |Q'|+1 rows");
      std::vector<Value> grid;
      grid.reserve((qp.size() + 1) * (qs.size() + 1));
      for (const auto& row : rows) {
        auto vals = parse_value_array(row, where + ".g row");
        if (vals.size() != qs.size() + 1)
          throw ParseError(where + ".g rows must have |Q''|+1 entries");
        grid.insert(grid.end(), vals.begin(), vals.end());
      }
      return make_bicardinality(std::move(qp), std::move(qs), std::move(grid));
    }
    if (type == "general") {
      reject_unknown_keys(j, {"type", "members", "table"}, where);
      return make_general(parse_node_array(j.at("members"), where + ".members"),
                          parse_value_array(j.at("table"), where + ".table"));
    }
  } catch (const InstanceError& e) {
    throw ParseError(where + ": " + e.what());
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": unknown term type \"" + type + "\"");
}

}  // namespace detail

inline Instance instance_from_json(const nlohmann::json& j, int general_cap = kDefaultGeneralCap) {
  using detail::parse_value;
  if (!j.is_object()) throw ParseError("instance file must be a JSON object");
  detail::reject_unknown_keys(j, {"version", "nodes", "unary", "terms", "offset"},
                              "instance");
  if (!j.contains("version") || !j.at("version").is_number_integer() ||
      j.at("version").get<int>() != kInstanceFormatVersion)
    throw ParseError("missing or unsupported \"version\" (expected 1)");
  if (!j.contains("nodes")) throw ParseError("missing \"nodes\"");
  const Value n = parse_value(j.at("nodes"), "nodes");
  if (n < 0 || n > (Value{1} << 31)) throw ParseError("\"nodes\" out of range");

  Instance inst(static_cast<int>(n));
  inst.general_cap = general_cap;
  if (!j.contains("unary")) throw ParseError("missing \"unary\"");
  const auto& unary = j.at("unary");
  if (!unary.is_array() || unary.size() != static_cast<size_t>(n))
    throw ParseError("\"unary\" must be an array of n [c_si, c_it] pairs");
  for (int i = 0; i < n; ++i) {
    const auto& pair = unary.at(i);
    if (!pair.is_array() || pair.size() != 2)
      throw ParseError("\"unary\" entries must be [c_si, c_it] pairs");
    inst.source_cap[i] = parse_value(pair.at(0), "unary c_si");
    inst.sink_cap[i] = parse_value(pair.at(1), "unary c_it");
  }
  // parse the offset before terms: singleton folding adds to it
  if (j.contains("offset")) inst.offset = parse_value(j.at("offset"), "offset");
  if (j.contains("terms")) {
    const auto& terms = j.at("terms");
    if (!terms.is_array()) throw ParseError("\"terms\" must be an array");
    int idx = 0;
    for (const auto& t : terms) {
      Term term = detail::parse_term(t, idx++);
      for (NodeId v : term.members)
        if (v < 0 || v >= inst.n)
          throw ParseError("terms[" + std::to_string(idx - 1) + "]: member out of range");
      inst.add_term(std::move(term));
    }
  }
  inst.finalize();
  return inst;
}

inline nlohmann::ordered_json instance_to_json(const Instance& inst) {
  nlohmann::ordered_json j;
  j["version"] = kInstanceFormatVersion;
  j["nodes"] = inst.n;
  auto unary = nlohmann::ordered_json::array();
  for (int i = 0; i < inst.n; ++i)
    unary.push_back({inst.source_cap[i], inst.sink_cap[i]});
  j["unary"] = std::move(unary);
  auto terms = nlohmann::ordered_json::array();
  for (const Term& t : inst.terms) {
    nlohmann::ordered_json o;
    o["type"] = term_kind_name(t.kind);
    switch (t.kind) {
      case TermKind::kPairwise:
        o["members"] = t.members;
        o["a"] = t.pairwise().a;
        o["b"] = t.pairwise().b;
        break;
      case TermKind::kCardinality:
        o["members"] = t.members;
        o["g"] = t.cardinality().g;
        break;
      case TermKind::kBicardinality: {
        const auto& d = t.bicardinality();
        o["qprime"] = d.qprime;
        o["qsecond"] = d.qsecond;
        auto rows = nlohmann::ordered_json::array();
        for (size_t kp = 0; kp <= d.qprime.size(); ++kp) {
          auto row = nlohmann::ordered_json::array();
          for (size_t ks = 0; ks <= d.qsecond.size(); ++ks)
            row.push_back(d.at(static_cast<int>(kp), static_cast<int>(ks)));
          rows.push_back(std::move(row));
        }
        o["g"] = std::move(rows);
        break;
      }
      case TermKind::kGeneral:
        o["members"] = t.members;
        o["table"] = t.general().table;
        break;
    }
    terms.push_back(std::move(o));
  }
  j["terms"] = std::move(terms);
  j["offset"] = inst.offset;
  return j;
}

inline Instance load_instance_file(const std::string& path, int general_cap = kDefaultGeneralCap) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open \"" + path + "\" for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("JSON parse failure: ") + e.what());
  }
  return instance_from_json(j, general_cap);
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  out << content;
  if (!out) throw IoError("failed writing \"" + path + "\"");
}

inline std::string dump_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

inline nlohmann::ordered_json result_to_json(const SolveResult& result, const Instance& inst,
                                             double wall_ms = -1.0) {
  nlohmann::ordered_json j;
  j["minimum"] = result.minimum;
  j["minimizer"] = result.minimizer;
  j["flow_value"] = result.stats.flow_value;
  j["offset"] = inst.offset;
  auto phases = nlohmann::ordered_json::array();
  for (const PhaseStats& p : result.stats.phases) {
    nlohmann::ordered_json o;
    o["twoDelta"] = p.two_delta;
    o["augmentations"] = p.augmentations;
    o["bfs_count"] = p.bfs_count;
    phases.push_back(std::move(o));
  }
  j["phases"] = std::move(phases);
  nlohmann::ordered_json ops;
  for (int k = 0; k < 4; ++k) {
    nlohmann::ordered_json o;
    o["adjust_flow"] = result.stats.ops[k].adjust_flow;
    o["get_neighbors"] = result.stats.ops[k].get_neighbors;
    o["send_flow"] = result.stats.ops[k].send_flow;
    ops[term_kind_name(static_cast<TermKind>(k))] = std::move(o);
  }
  j["term_ops"] = std::move(ops);
  if (wall_ms >= 0) j["wall_time_ms"] = wall_ms;
  return j;
}

inline std::string result_to_text(const SolveResult& result, const Instance& inst,
                                  double wall_ms) {
  std::string out;
  out += "minimum: " + std::to_string(result.minimum) + "\n";
  out += "minimizer:";
  for (NodeId v : result.minimizer) out += " " + std::to_string(v);
  out += "\n";
  out += "flow value: " + std::to_string(result.stats.flow_value) + "\n";
  out += "offset: " + std::to_string(inst.offset) + "\n";
  out += "phases: " + std::to_string(result.stats.phases.size()) + "\n";
  out += "augmentations: " + std::to_string(result.stats.total_augmentations) + "\n";
  if (wall_ms >= 0) out += "wall time: " + std::to_string(wall_ms) + " ms\n";
  return out;
}

}  // namespace sfmin
