// schrolab: command-line front end for the Schrödinger harmonic-analysis lab.
//
//   schrolab <rho|weights|bmo|orlicz|riesz|morrey|verify> [--config f] [--seed s]
//            [--grid d,n,L] [--suite name] [--out report.jsonl]
//   schrolab report <report.jsonl>
//
// Records go to --out as JSON lines (stdout when omitted); the summary table
// goes to <out>.summary.txt, or to stderr when writing to stdout.

#include <schrolab/commands.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace schrolab;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> grid;
  std::string out;
  std::string suite = "all";
};

int run(const std::string& command, const Common& c) {
  Config cfg = c.config.empty() ? Config{} : Config::load(c.config);
  const auto e = Experiment::from_config(std::move(cfg), c.grid, c.seed);
  const auto records = run_command(command, e, c.suite);
  Json header = e.describe();
  header["command"] = command;
  if (command == "verify") header["suite"] = c.suite;

  if (c.out.empty()) {
    Json h;
    h["record"] = "header";
    for (const auto& [k, v] : header.items()) h[k] = v;
    h["count"] = records.size();
    std::cout << h.dump() << '\n';
    for (const auto& r : records) std::cout << r.dump() << '\n';
    std::cerr << render_summary(records);
  } else {
    emit_report(header, records, c.out, c.out + ".summary.txt");
    std::cout << render_summary(records);
  }
  for (const auto& r : records)
    if (r.contains("pass") && !r["pass"].get<bool>()) return 2;
  return 0;
}

int report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read report: " + path);
  std::vector<Json> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& err) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + err.what());
    }
    if (j.value("record", "") != "header") records.push_back(std::move(j));
  }
  std::cout << render_summary(records);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schrödinger-operator harmonic analysis lab"};
  app.require_subcommand(1);
  Common common;
  std::string report_path;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"rho", "critical radius field and its comparability"},
      {"weights", "A_p characteristics and weight lemmas"},
      {"bmo", "localized BMO and oscillation estimates"},
      {"orlicz", "Young functions, Luxemburg norms, Hölder check"},
      {"riesz", "operator build, spectral bound, kernel decay"},
      {"morrey", "Morrey-type norms of the test suite"},
      {"verify", "run a named verification suite"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", common.config, "TOML-style config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "seed for test-function suites");
    sub->add_option("--grid", common.grid, "grid override d,n,L");
    sub->add_option("--out", common.out, "JSON-lines output path");
    if (name == "verify")
      sub->add_option("--suite", common.suite, "lebesgue|morrey|weak_morrey|commutator|endpoint|lemmas|all");
  }
  auto* rep = app.add_subcommand("report", "summarize an existing JSON-lines report");
  rep->add_option("path", report_path, "report file")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (rep->parsed()) return report(report_path);
    for (const auto* sub : app.get_subcommands()) return run(sub->get_name(), common);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
