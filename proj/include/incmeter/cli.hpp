#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "incmeter/asp.hpp"
#include "incmeter/measure.hpp"
#include "incmeter/model.hpp"
#include "incmeter/parse.hpp"
#include "incmeter/repairs.hpp"
#include "incmeter/serialize.hpp"
#include "incmeter/violations.hpp"

#include "json.hpp"

namespace incmeter {

// Exit codes are a stable contract: 0 consistent/success, 1 inconsistent
// (check only), 2 input error, 3 solver unavailable or failed.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitInconsistent = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitSolverUnavailable = 3;

struct CliOptions {
  std::string instance_path;
  std::string constraints_path;
  RepairSemantics semantics = RepairSemantics::Cardinality;
  NormalizerKind normalizer = NormalizerKind::Full;
  int witnesses = 4;
  int cap = kDefaultRepairCap;
  std::string out_path;     // emit-asp program file
  bool solve = false;
  std::string solver_cmd;   // already resolved from flag or environment
  std::string format = "json";
};

namespace detail {

inline std::optional<RepairSemantics> semantics_from(const std::string& s) {
  if (s == "s") return RepairSemantics::Subset;
  if (s == "c") return RepairSemantics::Cardinality;
  if (s == "c-endo") return RepairSemantics::CardinalityEndogenous;
  return std::nullopt;
}

inline std::optional<NormalizerKind> normalizer_from(const std::string& s) {
  if (s == "full") return NormalizerKind::Full;
  if (s == "endo") return NormalizerKind::Endogenous;
  return std::nullopt;
}

struct LoadedInput {
  DatabaseInstance instance;
  ConstraintSet constraints;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline LoadedInput load(const CliOptions& options, std::ostream& err) {
  std::vector<Diagnostic> warnings;
  DatabaseInstance instance =
      parse_instance(read_file(options.instance_path), options.instance_path, &warnings);
  for (const Diagnostic& w : warnings)
    err << w.span.to_string() << ": warning: " << w.message << "\n";
  ConstraintSet constraints = parse_constraints(read_file(options.constraints_path),
                                                instance.schema(), options.constraints_path);
  return {std::move(instance), std::move(constraints)};
}

inline std::string tuple_list(const DatabaseInstance& instance, const std::vector<int>& tids) {
  std::string out;
  for (int tid : tids) out += (out.empty() ? "" : ", ") + render_tuple(instance.tuple(tid));
  return out;
}

}  // namespace detail

inline int cmd_check(const CliOptions& options, std::ostream& out, std::ostream& err) {
  try {
    detail::LoadedInput input = detail::load(options, err);
    ConflictHypergraph graph = find_conflicts(input.instance, input.constraints);
    bool consistent = graph.edges.empty();
    if (options.format == "text") {
      if (consistent) {
        out << "consistent\n";
      } else {
        out << "inconsistent (" << graph.edges.size() << " violations)\n";
        for (const ConflictEdge& edge : graph.edges) {
          out << "  " << edge.witness.constraint << ": {";
          for (std::size_t i = 0; i < edge.tids.size(); ++i)
            out << (i ? "," : "") << edge.tids[i];
          out << "} " << detail::tuple_list(input.instance, edge.tids) << "\n";
        }
      }
    } else {
      nlohmann::ordered_json j;
      j["consistent"] = consistent;
      j["violations"] = graph.edges.size();
      nlohmann::ordered_json edges = nlohmann::ordered_json::array();
      for (const ConflictEdge& edge : graph.edges)
        edges.push_back({{"constraint", edge.witness.constraint}, {"tids", edge.tids}});
      j["edges"] = std::move(edges);
      out << j.dump(2) << "\n";
    }
    return consistent ? kExitSuccess : kExitInconsistent;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

inline int cmd_measure(const CliOptions& options, std::ostream& out, std::ostream& err) {
  try {
    detail::LoadedInput input = detail::load(options, err);
    MeasureRequest request;
    request.semantics = options.semantics;
    request.normalizer = options.normalizer;
    request.enumeration_cap = options.cap;
    request.witness_cap = options.witnesses;
    InconsistencyReport report = inc_deg_g3(input.instance, input.constraints, request);
    if (options.format == "text") {
      out << "semantics: " << to_string(report.semantics) << "\n";
      out << "measure: " << report.measure.num() << "/" << report.measure.den() << " ("
          << report.decimal << ")\n";
      out << "irreparable: " << (report.irreparable ? "yes" : "no") << "\n";
      out << "normalizer: " << report.normalizer << " (" << to_string(report.normalizer_kind)
          << ")\n";
      out << "min deletions: " << report.min_deletions << "\n";
      for (const Repair& r : report.witnesses)
        out << "witness: delete {" << detail::tuple_list(input.instance, r.deleted) << "}\n";
    } else {
      out << serialize_report(report) << "\n";
    }
    return kExitSuccess;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

inline int cmd_repairs(const CliOptions& options, std::ostream& out, std::ostream& err) {
  try {
    detail::LoadedInput input = detail::load(options, err);
    RepairEnumeration found;
    switch (options.semantics) {
      case RepairSemantics::Subset:
        found = enumerate_s_repairs(input.instance, input.constraints, options.cap);
        break;
      case RepairSemantics::Cardinality:
        found = c_repairs(input.instance, input.constraints, options.cap);
        break;
      case RepairSemantics::CardinalityEndogenous:
        found = c_repairs_endogenous(input.instance, input.constraints, options.cap);
        break;
    }
    if (options.format == "text") {
      out << found.repairs.size() << " repair(s)"
          << (found.truncated ? " (truncated)" : "") << "\n";
      for (const Repair& r : found.repairs)
        out << "  keep {" << detail::tuple_list(input.instance, r.kept) << "} delete {"
            << detail::tuple_list(input.instance, r.deleted) << "}\n";
    } else {
      nlohmann::ordered_json j;
      j["semantics"] = to_string(options.semantics);
      j["count"] = found.repairs.size();
      j["truncated"] = found.truncated;
      nlohmann::ordered_json repairs = nlohmann::ordered_json::array();
      for (const Repair& r : found.repairs) {
        nlohmann::ordered_json item;
        item["kept"] = r.kept;
        item["deleted"] = r.deleted;
        nlohmann::ordered_json kept_tuples = nlohmann::ordered_json::array();
        for (int tid : r.kept) kept_tuples.push_back(render_tuple(input.instance.tuple(tid)));
        nlohmann::ordered_json deleted_tuples = nlohmann::ordered_json::array();
        for (int tid : r.deleted)
          deleted_tuples.push_back(render_tuple(input.instance.tuple(tid)));
        item["kept_tuples"] = std::move(kept_tuples);
        item["deleted_tuples"] = std::move(deleted_tuples);
        repairs.push_back(std::move(item));
      }
      j["repairs"] = std::move(repairs);
      out << j.dump(2) << "\n";
    }
    return kExitSuccess;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

inline int cmd_emit_asp(const CliOptions& options, std::ostream& out, std::ostream& err) {
  try {
    detail::LoadedInput input = detail::load(options, err);
    AspProgram program = emit_repair_program(input.instance, input.constraints);
    {
      std::ofstream file(options.out_path, std::ios::binary);
      if (!file) throw Error("cannot write " + options.out_path);
      file << program.to_text();
    }

    nlohmann::ordered_json j;
    j["out"] = options.out_path;
    int exit_code = kExitSuccess;
    if (options.solve && options.solver_cmd.empty()) {
      err << "error: no solver command configured (--solver-cmd or INCMETER_SOLVER_CMD)\n";
      exit_code = kExitSolverUnavailable;
    } else if (options.solve) {
      ConflictHypergraph graph = find_conflicts(input.instance, input.constraints);
      std::optional<int> internal =
          min_hitting_set_size(graph, input.instance.endogenous_tids());
      SolverResult result = run_external_solver(program, options.solver_cmd);
      switch (result.status) {
        case SolverStatus::Ok:
          j["external_numdel"] = result.optimum_numdel;
          j["internal_min_deletions"] = internal ? nlohmann::ordered_json(*internal)
                                                 : nlohmann::ordered_json(nullptr);
          j["agree"] = internal && result.optimum_numdel == *internal;
          break;
        case SolverStatus::Unsat:
          j["external_numdel"] = nullptr;
          j["internal_min_deletions"] = internal ? nlohmann::ordered_json(*internal)
                                                 : nlohmann::ordered_json(nullptr);
          j["agree"] = !internal;
          break;
        case SolverStatus::Unavailable:
          err << "error: solver unavailable: " << options.solver_cmd << "\n";
          exit_code = kExitSolverUnavailable;
          break;
        case SolverStatus::Error:
          err << "error: solver failed; captured output:\n" << result.output << "\n";
          exit_code = kExitSolverUnavailable;
          break;
      }
    }
    if (options.format == "text") {
      out << "wrote " << options.out_path << "\n";
      if (options.solve && j.contains("agree"))
        out << "external numdel: " << j["external_numdel"].dump()
            << ", internal: " << j["internal_min_deletions"].dump()
            << ", agree: " << (j["agree"].get<bool>() ? "yes" : "no") << "\n";
    } else {
      out << j.dump(2) << "\n";
    }
    return exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace incmeter
