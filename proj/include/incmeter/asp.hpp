#pragma once

#include <sys/wait.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "incmeter/model.hpp"

namespace incmeter {

// Disjunctive repair program with stay/delete annotation constants s/d,
// deletion collection and counting, and weak constraints selecting the
// minimum-deletion models. `rules` carries its own section comments so
// the rendered text is fully determined by the fields.
struct AspProgram {
  std::vector<std::string> facts;
  std::vector<std::string> rules;
  std::vector<std::string> weak_constraints;
  std::string query;

  std::string to_text() const {
    std::string out = "% facts\n";
    for (const std::string& line : facts) out += line + "\n";
    out += "\n";
    for (const std::string& line : rules) out += line + "\n";
    out += "\n% weak constraints: minimize deletions\n";
    for (const std::string& line : weak_constraints) out += line + "\n";
    out += "\n% query: " + query + " (brave)\n";
    return out;
  }
};

namespace detail {

// Source predicates lowercased; suffix collisions resolved with _2, _3,
// …; each name also claims its primed companion (`_x`) and the reserved
// names del/numdel.
inline std::map<std::string, std::string> mangle_predicates(const Schema& schema) {
  std::set<std::string> used = {"del", "numdel"};
  std::map<std::string, std::string> out;
  for (const auto& [name, arity] : schema.predicates()) {
    std::string base;
    for (char c : name) base += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (base.empty() || base[0] == '_') base = "p" + base;
    std::string candidate = base;
    int suffix = 2;
    while (used.count(candidate) || used.count(candidate + "_x"))
      candidate = base + "_" + std::to_string(suffix++);
    used.insert(candidate);
    used.insert(candidate + "_x");
    out[name] = candidate;
  }
  return out;
}

inline std::string asp_constant(const std::string& text) {
  bool bare_ident = !text.empty() && std::islower(static_cast<unsigned char>(text[0]));
  if (bare_ident)
    for (char c : text)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') bare_ident = false;
  bool bare_number = !text.empty();
  for (std::size_t i = 0; i < text.size() && bare_number; ++i) {
    if (i == 0 && text[i] == '-' && text.size() > 1) continue;
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) bare_number = false;
  }
  if (bare_ident || bare_number) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string asp_variable(const std::string& name) {
  std::string out = name;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

inline std::string asp_term(const Term& term) {
  return term.kind == Term::Kind::Variable ? asp_variable(term.text) : asp_constant(term.text);
}

// Tid variables are `T1`…`Tm`; the prefix doubles while any constraint
// variable would render to the same name.
inline std::string tid_prefix(const ConstraintSet& constraints) {
  std::set<std::string> rendered;
  for (const DenialConstraint& dc : constraints.dcs)
    for (const std::string& var : dc.atom_variables()) rendered.insert(asp_variable(var));
  std::string prefix = "T";
  for (;;) {
    bool clash = false;
    for (const std::string& name : rendered) {
      if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) continue;
      bool digits = true;
      for (std::size_t i = prefix.size(); i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
      if (digits) {
        clash = true;
        break;
      }
    }
    if (!clash) return prefix;
    prefix += "T";
  }
}

inline std::string generic_args(int arity) {
  std::string out = "T";
  for (int i = 1; i <= arity; ++i) out += ",X" + std::to_string(i);
  return out;
}

}  // namespace detail

inline AspProgram emit_repair_program(const DatabaseInstance& instance,
                                      const ConstraintSet& constraints) {
  const Schema& schema = instance.schema();
  std::map<std::string, std::string> name = detail::mangle_predicates(schema);
  const std::string tid = detail::tid_prefix(constraints);

  AspProgram program;
  for (const Tuple& t : instance.tuples()) {
    std::string line = name[t.predicate] + "(" + std::to_string(t.tid);
    for (const std::string& arg : t.args) line += "," + detail::asp_constant(arg);
    program.facts.push_back(line + ").");
  }

  program.rules.push_back("% repair rules");
  for (const DenialConstraint& dc : constraints.dcs) {
    std::string heads;
    std::string body;
    for (std::size_t i = 0; i < dc.atoms.size(); ++i) {
      const ConstraintAtom& atom = dc.atoms[i];
      std::string args = tid + std::to_string(i + 1);
      for (const Term& term : atom.terms) args += "," + detail::asp_term(term);
      heads += (i ? " | " : "") + name[atom.predicate] + "_x(" + args + ",d)";
      body += (i ? ", " : "") + name[atom.predicate] + "(" + args + ")";
    }
    for (const auto& [lhs, rhs] : dc.disequalities)
      body += ", " + detail::asp_term(lhs) + " != " + detail::asp_term(rhs);
    program.rules.push_back(heads + " :- " + body + ".");
  }

  program.rules.push_back("");
  program.rules.push_back("% persistence");
  for (const auto& [pred, arity] : schema.predicates()) {
    std::string args = detail::generic_args(arity);
    program.rules.push_back(name[pred] + "_x(" + args + ",s) :- " + name[pred] + "(" + args +
                            "), not " + name[pred] + "_x(" + args + ",d).");
  }

  program.rules.push_back("");
  program.rules.push_back("% deletion collection");
  for (const auto& [pred, arity] : schema.predicates()) {
    std::string args = detail::generic_args(arity);
    program.rules.push_back("del(T) :- " + name[pred] + "_x(" + args + ",d).");
  }

  program.rules.push_back("");
  program.rules.push_back("% deletion count");
  program.rules.push_back("numdel(N) :- N = #count{T : del(T)}.");

  std::vector<int> exo;
  for (int t : instance.all_tids())
    if (instance.is_exogenous(t)) exo.push_back(t);
  if (!exo.empty()) {
    program.rules.push_back("");
    program.rules.push_back("% exogenous protection");
    for (int t : exo) {
      const Tuple& tuple = instance.tuple(t);
      std::string args = std::to_string(t);
      for (int i = 1; i <= static_cast<int>(tuple.args.size()); ++i)
        args += ",X" + std::to_string(i);
      program.rules.push_back(":- " + name[tuple.predicate] + "_x(" + args + ",d).");
    }
  }

  for (const auto& [pred, arity] : schema.predicates()) {
    std::string args = detail::generic_args(arity);
    program.weak_constraints.push_back(":~ " + name[pred] + "(" + args + "), " + name[pred] +
                                       "_x(" + args + ",d). [1@1, T]");
  }

  program.query = "numdel(X)?";
  return program;
}

enum class SolverStatus { Ok, Unsat, Unavailable, Error };

struct SolverResult {
  SolverStatus status = SolverStatus::Error;
  int optimum_numdel = -1;                        // valid when status == Ok
  std::vector<std::vector<int>> optimal_deleted;  // deleted-tid sets of optimal models
  std::string output;                             // captured solver output
};

namespace detail {

struct SolverModel {
  std::vector<int> deleted;
  std::optional<long> numdel;
  std::vector<long> optimization;  // empty when the model line had none
};

struct ParsedSolverOutput {
  std::vector<SolverModel> models;
  bool unsat = false;
  bool optimum_found = false;
};

inline void parse_atom_line(const std::string& line, SolverModel& model) {
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t begin = i;
    int depth = 0;
    while (i < line.size() &&
           (depth > 0 || !std::isspace(static_cast<unsigned char>(line[i])))) {
      if (line[i] == '(') ++depth;
      if (line[i] == ')') --depth;
      ++i;
    }
    std::string token = line.substr(begin, i - begin);
    if (token.rfind("del(", 0) == 0)
      model.deleted.push_back(static_cast<int>(std::strtol(token.c_str() + 4, nullptr, 10)));
    else if (token.rfind("numdel(", 0) == 0)
      model.numdel = std::strtol(token.c_str() + 7, nullptr, 10);
  }
  std::sort(model.deleted.begin(), model.deleted.end());
}

// Accepts the common answer-set output shape: "Answer: k" followed by an
// atom line, optional "Optimization: v…" lines, UNSATISFIABLE / OPTIMUM
// FOUND markers.
inline ParsedSolverOutput parse_solver_output(const std::string& text) {
  ParsedSolverOutput out;
  bool expect_atoms = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (expect_atoms) {
      SolverModel model;
      parse_atom_line(line, model);
      out.models.push_back(std::move(model));
      expect_atoms = false;
    } else if (line.rfind("Answer", 0) == 0) {
      expect_atoms = true;
    } else if (line.rfind("Optimization", 0) == 0 && !out.models.empty()) {
      std::vector<long> values;
      const char* p = line.c_str() + 12;
      while (*p) {
        if (std::isdigit(static_cast<unsigned char>(*p)) || *p == '-') {
          char* after = nullptr;
          values.push_back(std::strtol(p, &after, 10));
          p = after;
        } else {
          ++p;
        }
      }
      out.models.back().optimization = values;
    } else if (line.find("UNSATISFIABLE") != std::string::npos) {
      out.unsat = true;
    } else if (line.find("OPTIMUM FOUND") != std::string::npos) {
      out.optimum_found = true;
    }
    if (end == text.size()) break;
  }
  return out;
}

}  // namespace detail

// Runs `command_template` ({file} replaced by the program's temp path;
// appended when absent) and extracts the optimum numdel plus the
// deleted-tid sets of the optimal models.
inline SolverResult run_external_solver(const AspProgram& program,
                                        const std::string& command_template) {
  SolverResult result;
  char path[] = "/tmp/incmeter_XXXXXX.lp";
  int fd = mkstemps(path, 3);
  if (fd < 0) {
    result.output = "cannot create temp file";
    return result;
  }
  {
    FILE* f = fdopen(fd, "w");
    std::string text = program.to_text();
    fwrite(text.data(), 1, text.size(), f);
    fclose(f);
  }

  std::string cmd = command_template;
  bool substituted = false;
  for (std::size_t at = cmd.find("{file}"); at != std::string::npos; at = cmd.find("{file}")) {
    cmd.replace(at, 6, path);
    substituted = true;
  }
  if (!substituted) cmd += std::string(" ") + path;
  cmd += " 2>&1";

  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    std::remove(path);
    result.status = SolverStatus::Unavailable;
    result.output = "cannot start: " + cmd;
    return result;
  }
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.output.append(buffer, got);
  int raw = pclose(pipe);
  std::remove(path);
  int exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  if (exit_code == 127 || exit_code == 126) {
    result.status = SolverStatus::Unavailable;
    return result;
  }

  detail::ParsedSolverOutput parsed = detail::parse_solver_output(result.output);
  if (parsed.models.empty()) {
    if (parsed.unsat) {
      result.status = SolverStatus::Unsat;
      return result;
    }
    // fallback: last numdel(N) anywhere in the output
    std::size_t at = result.output.rfind("numdel(");
    if (at != std::string::npos) {
      result.status = SolverStatus::Ok;
      result.optimum_numdel =
          static_cast<int>(std::strtol(result.output.c_str() + at + 7, nullptr, 10));
      return result;
    }
    result.status = SolverStatus::Error;
    return result;
  }

  std::optional<std::vector<long>> best;
  for (const detail::SolverModel& model : parsed.models)
    if (!model.optimization.empty() && (!best || model.optimization < *best))
      best = model.optimization;
  std::optional<long> numdel;
  for (const detail::SolverModel& model : parsed.models) {
    if (best && model.optimization != *best) continue;
    result.optimal_deleted.push_back(model.deleted);
    if (model.numdel) numdel = model.numdel;
  }
  if (!numdel) {
    result.status = SolverStatus::Error;
    return result;
  }
  result.status = SolverStatus::Ok;
  result.optimum_numdel = static_cast<int>(*numdel);
  return result;
}

}  // namespace incmeter
