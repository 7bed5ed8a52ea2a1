#include "probterm/report.hpp"

#include <sstream>
#include <stdexcept>

namespace probterm {

std::string rule_label(Rule r) { return to_string(r) + "-Rule"; }

std::string witness_summary(const Verdict& v) {
  if (!v.witness) return "";
  const Witness& w = *v.witness;
  std::string out = rule_label(w.rule);
  auto epsilon = [&w]() {
    if (w.epsilon_value) return to_string(*w.epsilon_value);
    return w.epsilon ? to_string(*w.epsilon) : std::string("?");
  };
  auto bound = [&w]() {
    if (w.difference_value) return to_string(*w.difference_value);
    return w.difference_bound ? to_string(*w.difference_bound) : std::string("?");
  };
  switch (w.rule) {
    case Rule::rsm: out += ", eps=" + epsilon(); break;
    case Rule::sm:
      out += ", p=" + to_string(w.probability.value_or(0)) + ", d=" + to_string(w.decrease.value_or(0));
      break;
    case Rule::repulsing_ast: out += ", eps=" + epsilon() + ", c=" + bound(); break;
    case Rule::repulsing_past: out += ", c=" + bound(); break;
  }
  return out;
}

namespace {

nlohmann::ordered_json witness_json(const Witness& w, const ValidatedProgram& p) {
  nlohmann::ordered_json j;
  j["rule"] = rule_label(w.rule);
  j["martingale_expression"] = p.render(w.martingale_expression);
  j["bound_used"] = to_string(w.bound_used);
  if (w.epsilon) j["epsilon"] = to_string(*w.epsilon);
  if (w.epsilon_value) j["epsilon_value"] = to_string(*w.epsilon_value);
  if (w.decrease_branch) j["decrease_branch"] = p.render(*w.decrease_branch);
  if (w.branch_bound) j["branch_bound"] = to_string(*w.branch_bound);
  if (w.probability) j["probability"] = to_string(*w.probability);
  if (w.decrease) j["decrease"] = to_string(*w.decrease);
  if (w.difference_bound) j["difference_bound"] = to_string(*w.difference_bound);
  if (w.difference_value) j["difference_value"] = to_string(*w.difference_value);
  return j;
}

std::string guard_text(const ValidatedProgram& p) {
  const Program& s = p.source();
  return to_string(s.guard_left, s.variables) + (s.relation == Relation::greater ? " > " : " < ") +
         to_string(s.guard_right, s.variables);
}

}  // namespace

nlohmann::ordered_json to_json(const Report& report, bool witness) {
  nlohmann::ordered_json j;
  j["schema_version"] = report_schema_version;
  j["program"] = report.program_path;
  j["mode"] = report.relaxed ? "relaxed" : "no-relaxation";
  j["validation"] = {{"ok", report.valid}, {"error", report.valid ? nlohmann::ordered_json() : nlohmann::ordered_json(report.error)}};
  if (report.program) {
    j["variables"] = report.program->variables();
    j["guard"] = guard_text(*report.program);
    j["guard_polynomial"] = report.program->render(report.program->guard());
  }
  auto verdicts = nlohmann::ordered_json::array();
  for (const auto& v : report.verdicts) {
    nlohmann::ordered_json jv;
    jv["goal"] = to_string(v.goal);
    jv["result"] = v.certified ? "Certified" : "Unknown";
    auto ruled = nlohmann::ordered_json::array();
    for (Rule r : v.ruled_out) ruled.push_back(rule_label(r));
    jv["ruled_out"] = ruled;
    jv["diagnostics"] = v.diagnostics;
    if (v.witness) {
      jv["summary"] = witness_summary(v);
      if (witness && report.program) jv["witness"] = witness_json(*v.witness, *report.program);
    }
    verdicts.push_back(jv);
  }
  j["verdicts"] = verdicts;
  if (report.simulation) {
    const auto& s = *report.simulation;
    j["simulation"] = {{"runs", s.runs},
                       {"max_steps", s.max_steps},
                       {"seed", s.seed},
                       {"terminated", s.terminated},
                       {"diverged", s.diverged},
                       {"termination_fraction", to_string(s.termination_fraction)},
                       {"mean_steps_among_terminated", s.mean_steps_among_terminated}};
  }
  j["timing_ms"] = report.timing_ms;
  return j;
}

std::string to_text(const Report& report, bool witness) {
  std::ostringstream out;
  out << "program: " << report.program_path << "\n";
  if (!report.valid) {
    out << "error: " << report.error << "\n";
    return out.str();
  }
  const ValidatedProgram& p = *report.program;
  out << "guard: " << guard_text(p) << "\n";
  if (!report.relaxed) out << "mode: no relaxation\n";
  for (const auto& v : report.verdicts) {
    std::string goal = to_string(v.goal);
    goal.resize(8, ' ');
    out << goal << (v.certified ? "✓ Certified" : "? Unknown");
    if (v.certified) out << " (" << witness_summary(v) << ")";
    out << "\n";
    for (const auto& d : v.diagnostics) out << "    " << d << "\n";
    if (witness && v.witness) {
      const Witness& w = *v.witness;
      out << "    martingale expression: " << p.render(w.martingale_expression) << "\n";
      out << "    bound used: " << to_string(w.bound_used) << "\n";
      if (w.decrease_branch) out << "    decreasing branch: " << p.render(*w.decrease_branch) << "\n";
      if (w.branch_bound) out << "    branch bound: " << to_string(*w.branch_bound) << "\n";
      if (w.difference_bound) out << "    difference bound: " << to_string(*w.difference_bound) << "\n";
    }
  }
  if (report.simulation) {
    const auto& s = *report.simulation;
    out << "simulation: " << s.runs << " runs, " << s.max_steps << " steps, seed " << s.seed << "\n";
    out << "    terminated: " << s.terminated << " (fraction " << to_string(s.termination_fraction) << ")";
    if (s.diverged) out << ", diverged: " << s.diverged;
    out << "\n    mean steps among terminated: " << s.mean_steps_among_terminated << "\n";
  }
  return out.str();
}

std::string to_string(Table t) {
  switch (t) {
    case Table::past: return "PAST";
    case Table::ast: return "AST";
    case Table::non_ast: return "NonAST";
  }
  return "?";
}

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  std::optional<Table> table;
  std::size_t number = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  auto fail = [&number](const std::string& message) {
    throw std::runtime_error("manifest line " + std::to_string(number) + ": " + message);
  };
  auto trim = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    return s;
  };
  auto verdict = [&fail](std::string s) {
    if (s.size() < 2 || s.front() != '"' || s.back() != '"') fail("expected a quoted verdict");
    s = s.substr(1, s.size() - 2);
    if (s != "certified" && s != "unknown" && s != "out-of-scope") fail("unknown verdict '" + s + "'");
    return s;
  };
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']' && line.find('"') == std::string::npos) {
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "past")
        table = Table::past;
      else if (name == "ast")
        table = Table::ast;
      else if (name == "nast")
        table = Table::non_ast;
      else
        fail("unknown section [" + name + "]");
      continue;
    }
    if (!table) fail("entry outside a section");
    auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'name = verdict'");
    ManifestEntry e{*table, trim(line.substr(0, eq)), "", ""};
    std::string value = trim(line.substr(eq + 1));
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']') fail("unterminated list");
      std::string inner = value.substr(1, value.size() - 2);
      auto comma = inner.find(',');
      if (comma == std::string::npos) fail("expected two verdicts");
      e.relaxed = verdict(trim(inner.substr(0, comma)));
      e.light = verdict(trim(inner.substr(comma + 1)));
    } else {
      e.relaxed = e.light = verdict(value);
    }
    entries.push_back(e);
  }
  return entries;
}

}  // namespace probterm
