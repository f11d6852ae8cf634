// Command-line front end: validate, normalize, solve, brute-force check and
// generate instances in the JSON format described in the README.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sfmin/sfmin.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;

struct CommonArgs {
  std::string input;
  std::string output;
  int general_cap = sfmin::kDefaultGeneralCap;
};

void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    sfmin::write_text_file(path, content);
}

int print_violations(const sfmin::ValidationReport& report) {
  for (const auto& v : report.violations) std::cerr << "violation: " << v << "\n";
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  return report.ok() ? kExitOk : kExitInvalid;
}

sfmin::Instance load_checked(const CommonArgs& args, bool require_normalized) {
  sfmin::Instance inst = sfmin::load_instance_file(args.input, args.general_cap);
  sfmin::ValidationReport report = sfmin::validate(inst, require_normalized);
  if (!report.ok()) {
    print_violations(report);
    throw sfmin::ParseError("instance failed validation");
  }
  return inst;
}

int run_solve(const CommonArgs& args, const std::string& format, bool audit, bool stats) {
  sfmin::Instance inst = load_checked(args, /*require_normalized=*/true);
  sfmin::Solver::Options options;
  options.audit = audit;
  const auto start = std::chrono::steady_clock::now();
  sfmin::SolveResult result = sfmin::solve(inst, options);
  const auto end = std::chrono::steady_clock::now();
  const double wall_ms = std::chrono::duration<double, std::milli>(end - start).count();

  if (format == "text") {
    emit(args.output, sfmin::result_to_text(result, inst, wall_ms));
  } else {
    // wall time is reported only on request so that identical inputs give
    // byte-identical output
    emit(args.output, sfmin::dump_json(sfmin::result_to_json(result, inst,
                                                             stats ? wall_ms : -1.0)));
  }
  return kExitOk;
}

int run_validate(const CommonArgs& args) {
  sfmin::Instance inst = sfmin::load_instance_file(args.input, args.general_cap);
  sfmin::ValidationReport report = sfmin::validate(inst);
  if (report.ok()) std::cout << "valid\n";
  return print_violations(report);
}

bool term_is_normalized(const sfmin::Term& term) {
  using sfmin::TermKind;
  switch (term.kind) {
    case TermKind::kPairwise: {
      const auto& d = term.pairwise();
      return d.a >= 0 && d.b >= 0;
    }
    case TermKind::kCardinality: {
      const auto& g = term.cardinality().g;
      if (g.front() != 0 || g.back() != 0) return false;
      for (sfmin::Value v : g)
        if (v < 0) return false;
      return true;
    }
    case TermKind::kBicardinality: {
      const auto& d = term.bicardinality();
      if (d.at(0, 0) != 0 ||
          d.at(static_cast<int>(d.qprime.size()), static_cast<int>(d.qsecond.size())) != 0)
        return false;
      for (sfmin::Value v : d.g)
        if (v < 0) return false;
      return true;
    }
    case TermKind::kGeneral: {
      const auto& t = term.general().table;
      if (t.front() != 0 || t.back() != 0) return false;
      for (sfmin::Value v : t)
        if (v < 0) return false;
      return true;
    }
  }
  return false;
}

int run_normalize(const CommonArgs& args) {
  sfmin::Instance inst = load_checked(args, /*require_normalized=*/false);
  sfmin::Instance out(inst.n);
  out.general_cap = inst.general_cap;
  out.source_cap = inst.source_cap;
  out.sink_cap = inst.sink_cap;
  out.offset = inst.offset;
  for (const sfmin::Term& term : inst.terms) {
    if (term_is_normalized(term)) {
      out.add_term(term);
      continue;
    }
    sfmin::NormalizedTerm norm;
    switch (term.kind) {
      case sfmin::TermKind::kPairwise:
        norm = sfmin::normalize_pairwise(term.members[0], term.members[1],
                                         term.pairwise().a, term.pairwise().b);
        break;
      case sfmin::TermKind::kCardinality:
        norm = sfmin::normalize_cardinality(term.members, term.cardinality().g);
        break;
      case sfmin::TermKind::kBicardinality:
        norm = sfmin::normalize_bicardinality(term.bicardinality().qprime,
                                              term.bicardinality().qsecond,
                                              term.bicardinality().g);
        break;
      case sfmin::TermKind::kGeneral:
        norm = sfmin::normalize_general(term.members, term.general().table);
        break;
    }
    norm.deltas.apply(out);
    out.add_term(std::move(norm.term));
  }
  out.finalize();
  sfmin::ValidationReport report = sfmin::validate(out);
  if (!report.ok()) {
    print_violations(report);
    return kExitInvalid;
  }
  emit(args.output, sfmin::dump_json(sfmin::instance_to_json(out)));
  return kExitOk;
}

int run_oracle(const CommonArgs& args) {
  sfmin::Instance inst = load_checked(args, /*require_normalized=*/true);
  if (inst.n > 20) {
    std::cerr << "violation: brute-force check supports at most 20 nodes\n";
    return kExitInvalid;
  }
  sfmin::OracleReport report = sfmin::brute_min(inst);
  std::vector<sfmin::NodeId> best;
  bool first = true;
  for (std::uint64_t mask : report.minimizers) {
    std::vector<sfmin::NodeId> nodes = sfmin::mask_to_nodes(mask);
    if (first || nodes < best) {
      best = std::move(nodes);
      first = false;
    }
  }
  std::string text = "minimum: " + std::to_string(report.minimum) + "\nminimizer:";
  for (sfmin::NodeId v : best) text += " " + std::to_string(v);
  text += "\nminimizer count: " + std::to_string(report.minimizers.size()) + "\n";
  emit(args.output, text);
  return kExitOk;
}

sfmin::GeneratorConfig parse_term_spec(const std::string& spec, sfmin::GeneratorConfig cfg) {
  size_t pos = 0;
  while (pos < spec.size()) {
    size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const std::string item = spec.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    size_t c1 = item.find(':');
    if (c1 == std::string::npos) throw sfmin::ParseError("--terms entries look like kind:count[:arity]");
    const std::string kind = item.substr(0, c1);
    size_t c2 = item.find(':', c1 + 1);
    const int count = std::stoi(item.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1));
    const int arity = c2 == std::string::npos ? 0 : std::stoi(item.substr(c2 + 1));
    if (kind == "mixed") {
      cfg.mixed_terms += count;
    } else if (kind == "pairwise") {
      cfg.requests.push_back({sfmin::TermKind::kPairwise, count, arity});
    } else if (kind == "cardinality") {
      cfg.requests.push_back({sfmin::TermKind::kCardinality, count, arity});
    } else if (kind == "bicardinality") {
      cfg.requests.push_back({sfmin::TermKind::kBicardinality, count, arity});
    } else if (kind == "general") {
      cfg.requests.push_back({sfmin::TermKind::kGeneral, count, arity});
    } else {
      throw sfmin::ParseError("unknown term kind \"" + kind + "\" in --terms");
    }
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact minimizer for sums of submodular set functions"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string format = "json";
  bool audit = false;
  bool stats = false;

  auto* solve_cmd = app.add_subcommand("solve", "minimize an instance");
  solve_cmd->add_option("--input", args.input, "instance JSON")->required();
  solve_cmd->add_option("--output", args.output, "result path (default: stdout)");
  solve_cmd->add_option("--format", format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));
  solve_cmd->add_flag("--audit", audit, "re-check feasibility after every augmentation (slow)");
  solve_cmd->add_flag("--stats", stats, "include wall time in the output");
  solve_cmd->add_option("--general-cap", args.general_cap, "max |Q| for general terms")
      ->check(CLI::Range(2, sfmin::kHardGeneralCap));

  auto* validate_cmd = app.add_subcommand("validate", "check instance invariants");
  validate_cmd->add_option("--input", args.input, "instance JSON")->required();
  validate_cmd->add_option("--general-cap", args.general_cap, "max |Q| for general terms")
      ->check(CLI::Range(2, sfmin::kHardGeneralCap));

  auto* normalize_cmd = app.add_subcommand("normalize", "rewrite terms into normalized form");
  normalize_cmd->add_option("--input", args.input, "instance JSON")->required();
  normalize_cmd->add_option("--output", args.output, "output path")->required();
  normalize_cmd->add_option("--general-cap", args.general_cap, "max |Q| for general terms")
      ->check(CLI::Range(2, sfmin::kHardGeneralCap));

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force minimum (n <= 20)");
  oracle_cmd->add_option("--input", args.input, "instance JSON")->required();
  oracle_cmd->add_option("--output", args.output, "output path (default: stdout)");

  sfmin::GeneratorConfig cfg;
  std::string term_spec = "mixed:4";
  auto* generate_cmd = app.add_subcommand("generate", "emit a random valid instance");
  generate_cmd->add_option("--nodes", cfg.nodes, "node count")->required();
  generate_cmd->add_option("--terms", term_spec, "kind:count[:arity],... (kinds: pairwise, cardinality, bicardinality, general, mixed)");
  generate_cmd->add_option("--max-value", cfg.max_value, "value scale");
  generate_cmd->add_option("--seed", cfg.seed, "random seed");
  generate_cmd->add_option("--max-arity", cfg.max_arity, "max |Q| for random-arity terms");
  generate_cmd->add_option("--output", args.output, "output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(args, format, audit, stats);
    if (validate_cmd->parsed()) return run_validate(args);
    if (normalize_cmd->parsed()) return run_normalize(args);
    if (oracle_cmd->parsed()) return run_oracle(args);
    if (generate_cmd->parsed()) {
      cfg = parse_term_spec(term_spec, cfg);
      sfmin::Instance inst = sfmin::generate_instance(cfg);
      emit(args.output, sfmin::dump_json(sfmin::instance_to_json(inst)));
      return kExitOk;
    }
  } catch (const sfmin::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const sfmin::ParseError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const sfmin::NormalizeError& e) {
    std::cerr << "normalization failed: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const sfmin::InstanceError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitIo;
}
