#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spp/errors.hpp"
#include "spp/scenario.hpp"
#include "spp/simkit.hpp"

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t jobs = 1;
};

fs::path output_dir(const Overrides& o) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv("SPP_OUT_DIR"); env && *env) return env;
  return "spp_out";
}

spp::Scenario load(const fs::path& path, const Overrides& o) {
  auto scn = spp::load_scenario(path, o.seed);
  if (o.tol) scn.run.tol = *o.tol;
  if (o.max_iter) scn.run.max_iter = *o.max_iter;
  return scn;
}

int cmd_run(const std::string& config, const Overrides& o) {
  const auto scn = load(config, o);
  const auto result = spp::run_scenario(scn, output_dir(o));
  std::cout << result.report;
  for (const auto& p : result.artifacts) std::cout << "wrote " << p.string() << '\n';
  return result.exit_code;
}

int cmd_batch(const std::string& dir, const Overrides& o) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cfg") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  int exit_code = 0;
  std::vector<spp::BatchScenario> batch;
  for (const auto& f : files) {
    try {
      auto part = spp::to_batch(load(f, o));
      batch.insert(batch.end(), part.begin(), part.end());
    } catch (const spp::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      exit_code = 1;
    }
  }

  const auto summaries = spp::run_batch(batch, o.jobs);
  const fs::path out = output_dir(o);
  fs::create_directories(out);
  const fs::path table = out / "batch_summary.csv";
  std::ofstream csv(table);
  if (!csv) throw spp::Error("cannot write " + table.string());
  csv << "name,status,iterations,final_state,error\n";

  bool diverged = false;
  for (const auto& s : summaries) {
    std::string state;
    char buf[40];
    for (Eigen::Index i = 0; i < s.final_state.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17e", s.final_state(i));
      state += (i ? " " : "") + std::string(buf);
    }
    const std::string status = s.status ? spp::to_string(*s.status) : "Error";
    csv << s.name << ',' << status << ',' << s.iterations << ',' << state << ",\"" << s.error << "\"\n";

    std::cout << s.name << ": " << status;
    if (s.status) std::cout << " after " << s.iterations << " steps";
    for (const auto& [id, margin] : s.condition_margins) {
      std::cout << ", " << id << ' ' << (s.condition_holds.at(id) ? "holds" : "fails") << " (margin "
                << margin << ')';
    }
    if (!s.ok()) std::cout << " (" << s.error << ')';
    std::cout << '\n';

    if (!s.status || *s.status == spp::RunStatus::MaxIter) exit_code = 1;
    diverged = diverged || (s.status && *s.status == spp::RunStatus::Diverged);
  }
  std::cout << "wrote " << table.string() << '\n';
  if (exit_code == 0 && diverged) exit_code = 2;
  return exit_code;
}

int cmd_report(const std::string& config, const Overrides& o) {
  std::cout << spp::scenario_report(load(config, o));
  return 0;
}

int cmd_oracle(const std::string& config, const Overrides& o) {
  std::cout << spp::oracle_report(load(config, o));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perceived social power in Friedkin-Johnsen networks"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  double tol = 0.0;
  std::size_t max_iter = 0;
  std::uint64_t seed = 0;
  auto* tol_opt = app.add_option("--tol", tol, "Convergence tolerance (inf-norm increment)");
  auto* iter_opt = app.add_option("--max-iter", max_iter, "Iteration cap");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for random initial vectors and sampling");
  app.add_option("--out", o.out, "Output directory (default $SPP_OUT_DIR, else ./spp_out)");
  app.add_option("--jobs", o.jobs, "Worker threads for batch")->check(CLI::PositiveNumber);

  std::string target;
  auto* run = app.add_subcommand("run", "Run a scenario and write its artifacts");
  run->add_option("config", target, "Scenario file")->required()->check(CLI::ExistingFile);
  auto* batch = app.add_subcommand("batch", "Run every .cfg scenario in a directory");
  batch->add_option("dir", target, "Scenario directory")->required()->check(CLI::ExistingDirectory);
  auto* report = app.add_subcommand("report", "Print conditions, boxes and equilibrium evidence");
  report->add_option("config", target, "Scenario file")->required()->check(CLI::ExistingFile);
  auto* oracle = app.add_subcommand("oracle", "Direct social power solve for the scenario's gamma");
  oracle->add_option("config", target, "Scenario file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  if (*tol_opt) o.tol = tol;
  if (*iter_opt) o.max_iter = max_iter;
  if (*seed_opt) o.seed = seed;

  try {
    if (*run) return cmd_run(target, o);
    if (*batch) return cmd_batch(target, o);
    if (*report) return cmd_report(target, o);
    if (*oracle) return cmd_oracle(target, o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
