#include "probterm/cli.hpp"

#include "probterm/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace probterm {

namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct AnalyzeSettings {
  std::set<Goal> goals = all_goals;
  bool relaxed = true;
  std::size_t branch_cap = default_branch_cap;
  double timeout_s = 50;
};

// Kind of failure, if any: 0 ok, 1 out of scope, 2 parse error.
Report analyze_file(const fs::path& path, const AnalyzeSettings& settings, int& failure) {
  Report report;
  report.program_path = path.string();
  report.relaxed = settings.relaxed;
  failure = 0;
  auto start = Clock::now();
  Program program;
  try {
    program = parse_program(read_file(path));
    report.timing_ms["parse"] = elapsed_ms(start);
    start = Clock::now();
    report.program = validate(program);
    report.timing_ms["validate"] = elapsed_ms(start);
  } catch (const NotProbSolvable& e) {
    report.error = e.what();
    failure = 1;
    return report;
  } catch (const std::exception& e) {
    report.error = e.what();
    failure = 2;
    return report;
  }
  report.valid = true;
  start = Clock::now();
  AnalysisOptions options;
  options.relaxed = settings.relaxed;
  options.branch_cap = settings.branch_cap;
  options.deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(settings.timeout_s));
  report.verdicts = TerminationAnalysis(*report.program, options).analyze(settings.goals);
  report.timing_ms["analysis"] = elapsed_ms(start);
  return report;
}

std::string outcome_for(const Report& report, Table table, int failure) {
  if (failure) return "out-of-scope";
  Goal goal = table == Table::past ? Goal::past : table == Table::ast ? Goal::ast : Goal::non_ast;
  for (const auto& v : report.verdicts)
    if (v.goal == goal) return v.certified ? "certified" : "unknown";
  return "unknown";
}

std::string mark(const std::string& outcome) {
  if (outcome == "certified") return "✓";
  if (outcome == "unknown") return "✗";
  return "out-of-scope";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certify or refute termination of Prob-solvable loops"};
  app.require_subcommand(1);

  AnalyzeSettings settings;
  std::string file, goal = "all", csv;
  bool json = false, witness = false, no_relaxation = false;
  std::vector<std::string> simulate;

  auto* analyze = app.add_subcommand("analyze", "Analyze one .prob file");
  analyze->add_option("file", file, "program file")->required();
  analyze->add_option("--goal", goal, "past|ast|nast|npast|all")
      ->check(CLI::IsMember({"past", "ast", "nast", "npast", "all"}));
  analyze->add_flag("--json", json, "emit a JSON report");
  analyze->add_flag("--witness", witness, "include full witnesses");
  analyze->add_option("--branch-cap", settings.branch_cap, "maximum number of branches per expression");
  analyze->add_option("--simulate", simulate, "RUNS STEPS SEED")->expected(3);
  analyze->add_flag("--no-relaxation", no_relaxation, "demand every condition from the first iteration");
  analyze->add_option("--timeout", settings.timeout_s, "seconds per program");
  analyze->add_option("--csv", csv, "write per-step simulation statistics to this file");

  std::string dir, expected;
  auto* bench = app.add_subcommand("bench", "Run a corpus against an expected-results manifest");
  bench->add_option("dir", dir, "corpus directory")->required();
  bench->add_option("--expected", expected, "manifest (default: <dir>/expected.toml)");
  bench->add_flag("--no-relaxation", no_relaxation, "demand every condition from the first iteration");
  bench->add_flag("--json", json, "emit JSON records");
  bench->add_option("--timeout", settings.timeout_s, "seconds per program");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  settings.relaxed = !no_relaxation;

  if (analyze->parsed()) {
    if (goal == "past") settings.goals = {Goal::past};
    if (goal == "ast") settings.goals = {Goal::ast};
    if (goal == "nast") settings.goals = {Goal::non_ast};
    if (goal == "npast") settings.goals = {Goal::non_past};
    int failure = 0;
    Report report = analyze_file(file, settings, failure);
    if (report.valid && !simulate.empty()) {
      SimulationOptions so;
      try {
        so.runs = std::stoull(simulate[0]);
        so.max_steps = std::stoull(simulate[1]);
        so.seed = std::stoull(simulate[2]);
      } catch (const std::exception&) {
        err << "--simulate expects three non-negative integers\n";
        return 64;
      }
      const auto& p = *report.program;
      std::vector<std::string> labels{"guard"};
      so.tracked.push_back(p.guard());
      for (std::size_t j = 0; j < p.variable_count(); ++j) {
        so.tracked.push_back(Polynomial::variable(j));
        labels.push_back(p.variables()[j]);
      }
      if (csv.empty()) so.record_steps = 0;
      auto start = Clock::now();
      report.simulation = probterm::simulate(p, so);
      report.timing_ms["simulation"] = elapsed_ms(start);
      if (!csv.empty()) {
        std::ofstream f(csv);
        if (!f) {
          err << "cannot write " << csv << "\n";
          return 64;
        }
        f << to_csv(*report.simulation, labels);
      }
    }
    if (json)
      out << to_json(report, witness).dump(2) << "\n";
    else
      out << to_text(report, witness);
    if (!report.valid) {
      if (!json) err << report.error << "\n";
      return 2;
    }
    return 0;
  }

  fs::path root(dir);
  fs::path manifest_path = expected.empty() ? root / "expected.toml" : fs::path(expected);
  std::vector<ManifestEntry> manifest;
  if (fs::exists(manifest_path)) {
    try {
      manifest = parse_manifest(read_file(manifest_path));
    } catch (const std::exception& e) {
      err << e.what() << "\n";
      return 2;
    }
  } else if (!expected.empty()) {
    err << "cannot read " << expected << "\n";
    return 2;
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.path().extension() == ".prob") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::map<std::string, std::pair<Report, int>> results;
  for (const auto& f : files) {
    int failure = 0;
    Report r = analyze_file(f, settings, failure);
    results.emplace(f.stem().string(), std::make_pair(std::move(r), failure));
  }

  bool mismatch = false;
  auto records = nlohmann::ordered_json::array();
  std::set<std::string> listed;
  for (Table table : {Table::past, Table::ast, Table::non_ast}) {
    std::vector<const ManifestEntry*> rows;
    for (const auto& e : manifest)
      if (e.table == table) rows.push_back(&e);
    if (rows.empty()) continue;
    std::size_t certified = 0;
    if (!json) out << to_string(table) << " (" << rows.size() << " programs)\n";
    for (const auto* e : rows) {
      listed.insert(e->program);
      const std::string& want = settings.relaxed ? e->relaxed : e->light;
      std::string got = "missing";
      auto it = results.find(e->program);
      if (it != results.end()) got = outcome_for(it->second.first, table, it->second.second);
      certified += got == "certified";
      bool ok = got == want;
      mismatch |= !ok;
      if (json) {
        records.push_back({{"table", to_string(table)}, {"program", e->program}, {"result", got}, {"expected", want},
                           {"match", ok}});
      } else {
        std::string name = e->program;
        name.resize(std::max<std::size_t>(name.size(), 40), ' ');
        out << "  " << name << (got == "missing" ? "missing" : mark(got));
        if (!ok) out << "   MISMATCH (expected " << want << ")";
        out << "\n";
      }
    }
    if (!json) out << "  Total ✓ " << certified << "/" << rows.size() << "\n";
  }
  for (const auto& [name, result] : results) {
    if (listed.count(name)) continue;
    if (json) {
      records.push_back({{"table", nullptr}, {"program", name}, {"report", to_json(result.first, false)}});
    } else {
      out << "unlisted: " << name;
      for (const auto& v : result.first.verdicts)
        if (v.certified) out << " " << to_string(v.goal) << "✓";
      if (result.second) out << " out-of-scope";
      out << "\n";
    }
  }
  if (json) out << records.dump(2) << "\n";
  return mismatch ? 1 : 0;
}

}  // namespace probterm
