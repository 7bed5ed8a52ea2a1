#pragma once

#include "probterm/rules.hpp"
#include "probterm/simulator.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace probterm {

inline constexpr int report_schema_version = 1;

struct Report {
  std::string program_path;
  bool relaxed = true;
  bool valid = false;
  std::string error;
  std::optional<ValidatedProgram> program;
  std::vector<Verdict> verdicts;
  std::optional<SimulationStats> simulation;
  std::map<std::string, double> timing_ms;
};

nlohmann::ordered_json to_json(const Report& report, bool witness);
std::string to_text(const Report& report, bool witness);
std::string rule_label(Rule r);
// Short witness summary such as "SM-Rule, p=1/2, d=1".
std::string witness_summary(const Verdict& v);

enum class Table { past, ast, non_ast };

std::string to_string(Table t);

struct ManifestEntry {
  Table table = Table::past;
  std::string program;
  std::string relaxed;  // certified | unknown | out-of-scope
  std::string light;
};

// Sections [past], [ast] and [nast] holding `name = "verdict"` or
// `name = ["verdict", "verdict without relaxation"]`.
std::vector<ManifestEntry> parse_manifest(std::string_view text);

}  // namespace probterm
