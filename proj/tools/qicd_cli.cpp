#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "qicd/csv.hpp"
#include "qicd/error.hpp"
#include "qicd/figures.hpp"
#include "qicd/scenario.hpp"
#include "qicd/sweep.hpp"
#include "qicd/verify.hpp"
#include "qicd/version.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitVerify = 3;

struct Globals {
  std::string scenario_file;
  std::vector<std::string> sets;
  std::string out;
  std::uint64_t seed = 20240601;
  int threads = 1;
};

qicd::ScenarioParams base_params(const Globals& g) {
  qicd::ScenarioParams p;
  if (!g.scenario_file.empty()) p = qicd::load_scenario_file(g.scenario_file).params();
  for (const auto& s : g.sets) qicd::apply_override(p, s);
  qicd::validate(p);
  return p;
}

// Figures take overrides as key=value strings: the scenario file contributes
// every key that differs from the defaults, followed by the --set list.
std::vector<std::string> figure_overrides(const Globals& g) {
  std::vector<std::string> out;
  if (!g.scenario_file.empty()) {
    const auto p = qicd::load_scenario_file(g.scenario_file).params();
    const qicd::ScenarioParams defaults;
    for (const auto& key : qicd::parameter_keys()) {
      const double v = qicd::get_parameter(p, key);
      if (v != qicd::get_parameter(defaults, key)) out.push_back(std::string(key) + "=" + qicd::format_number(v));
    }
  }
  out.insert(out.end(), g.sets.begin(), g.sets.end());
  return out;
}

void emit(const qicd::CsvTable& table, const std::string& path) {
  if (path.empty() || path == "-") {
    table.write(std::cout);
  } else {
    qicd::write_csv_file(table, path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Microwave quantum illumination with correlation-to-displacement receivers"};
  app.set_version_flag("--version", std::string(qicd::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--scenario", g.scenario_file, "Scenario file (key = value lines)")->check(CLI::ExistingFile);
  app.add_option("--set", g.sets, "Parameter override key=value (repeatable)");
  app.add_option("--out", g.out, "Output file, or directory for `figure`");
  app.add_option("--seed", g.seed, "Root random seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* table1 = app.add_subcommand("table1", "Thermal occupations at 5 GHz");

  int figure_id = 0;
  auto* figure = app.add_subcommand("figure", "Data behind one figure, one CSV per curve or panel");
  figure->add_option("id", figure_id, "Figure number (2-9)")->required()->check(CLI::Range(2, 9));

  std::string level = "fast";
  auto* verify = app.add_subcommand("verify", "Run the oracle cross-checks");
  verify->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

  std::vector<std::string> params;
  std::vector<std::string> outputs;
  auto* sweep = app.add_subcommand("sweep", "Grid sweep over scenario parameters");
  sweep->add_option("--param", params, "name=grid, grid is log:a:b:n, lin:a:b:n or list:v1,v2,...")->required();
  sweep->add_option("--outputs", outputs, "Comma-separated output quantities")->delimiter(',')->required();

  auto* show = app.add_subcommand("scenario", "Print the resolved scenario");
  auto* list = app.add_subcommand("outputs", "List sweep output names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*table1) {
      auto t = qicd::table1();
      emit(t, g.out);
    } else if (*figure) {
      const std::filesystem::path dir = g.out.empty() ? "." : g.out;
      std::filesystem::create_directories(dir);
      for (auto& f : qicd::make_figure(figure_id, figure_overrides(g), g.threads)) {
        qicd::write_csv_file(f.table, (dir / f.name).string());
        std::cout << (dir / f.name).string() << "\n";
      }
    } else if (*verify) {
      const auto lv = level == "full" ? qicd::VerifyLevel::Full : qicd::VerifyLevel::Fast;
      const auto results = qicd::run_verification(lv, g.seed, g.threads);
      int failed = 0;
      for (const auto& r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << qicd::format_number(r.measured)
                  << " (tol " << qicd::format_number(r.tolerance) << ")";
        if (!r.detail.empty()) std::cout << " [" << r.detail << "]";
        std::cout << "\n";
        failed += r.passed ? 0 : 1;
      }
      std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
      return failed == 0 ? 0 : kExitVerify;
    } else if (*sweep) {
      qicd::SweepSpec spec;
      spec.base = base_params(g);
      for (const auto& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw qicd::ValidationError("--param expects name=grid, got '" + p + "'");
        spec.axes.push_back({p.substr(0, eq), qicd::parse_grid(std::string_view(p).substr(eq + 1))});
      }
      spec.outputs = outputs;
      spec.output_path = g.out;
      auto t = qicd::run_sweep(spec, g.threads);
      t.add_meta("seed", std::to_string(g.seed));
      emit(t, g.out);
    } else if (*show) {
      std::cout << qicd::format_scenario(base_params(g));
    } else if (*list) {
      for (const auto& n : qicd::sweep_output_names()) std::cout << n << "\n";
    }
  } catch (const qicd::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const qicd::PhysicalityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return 0;
}
