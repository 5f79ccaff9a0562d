#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "demos.hpp"
#include "report.hpp"

using namespace gptcast;

namespace {

struct Flags {
  std::optional<std::string> composite;
  std::optional<std::string> report;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> size;
  std::optional<std::string> family;
  std::optional<std::string> tolerance;
  std::size_t jobs = 1;
  bool timings = false;
};

void add_run_flags(CLI::App& app, Flags& f) {
  app.add_option("--composite", f.composite, "min, max or custom:<path>");
  app.add_option("--report", f.report, "write the JSON report here");
  app.add_option("--seed", f.seed, "seed for randomized checks and sweeps");
  app.add_option("--tolerance", f.tolerance, "Cesaro cross-check tolerance, a rational such as 1/1000000000");
  app.add_flag("--timings", f.timings, "include wall-clock seconds in the report");
}

void apply(const Flags& f, Scenario& s) {
  if (f.composite) {
    if (*f.composite == "min" || *f.composite == "max") {
      s.composite = *f.composite == "min" ? gpt::TensorVariant::min : gpt::TensorVariant::max;
      s.joint = {};
    } else if (f.composite->rfind("custom:", 0) == 0) {
      load_composite_file(f.composite->substr(7), s);
    } else {
      throw InputError(0, "--composite", "expected min, max or custom:<path>");
    }
  }
  if (f.seed) s.seed = *f.seed;
  if (f.trials) s.trials = *f.trials;
  if (f.size) s.size = *f.size;
  if (f.family) {
    s.space = parse_space_spec(*f.family);
    if (s.space.family == "custom") throw InputError(0, "--family", "sweep a custom space through a scenario file");
  }
}

RunOptions options(const Flags& f) {
  RunOptions o;
  o.timings = f.timings;
  o.jobs = f.jobs;
  if (f.tolerance) {
    gpt::Scalar t;
    try {
      t = gpt::parse_scalar(*f.tolerance);
    } catch (const gpt::ParseError& e) {
      throw InputError(0, "--tolerance", e.what());
    }
    if (sgn(t) <= 0) throw InputError(0, "--tolerance", "must be positive");
    o.tolerance = t.get_d();
  }
  return o;
}

int execute(Scenario s, const Flags& f) {
  apply(f, s);
  const RunResult r = run_scenario(s, options(f));
  std::cout << r.summary;
  if (f.report) {
    std::ofstream out(*f.report, std::ios::binary);
    if (!out) throw InputError(0, "--report", "cannot write '" + *f.report + "'");
    out << dump(r.report);
  }
  return 0;
}

int verify(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw InputError(0, "report", e.what());
  }
  const gpt::Validation v = verify_report_json(j);
  if (v.ok()) {
    std::cout << "verified: " << j.value("task", "?") << " verdict " << j.value("verdict", "?")
              << " re-checked by exact substitution\n";
    return 0;
  }
  for (const auto& bad : v.violations) std::cout << "violation: " << bad.message << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact distinguishing, cloning and broadcasting decisions for polytopic state spaces"};
  app.require_subcommand(0, 1);
  std::optional<std::string> verify_path;
  app.add_option("--verify", verify_path, "re-check the witness or certificate in a JSON report");

  Flags run_flags, sweep_flags, demo_flags;
  std::string scenario_path, demo_name, verify_arg;
  std::optional<std::string> sweep_path;
  bool list = false;

  auto* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  add_run_flags(*run, run_flags);
  run->add_option("--trials", run_flags.trials, "trial count when the task is sweep");
  run->add_option("--jobs", run_flags.jobs, "sweep worker threads");

  auto* sweep = app.add_subcommand("sweep", "randomized cross-check sweep");
  sweep->add_option("scenario", sweep_path, "optional scenario file giving the space");
  add_run_flags(*sweep, sweep_flags);
  sweep->add_option("--family", sweep_flags.family, "square, classical:N or polygon:N");
  sweep->add_option("--size", sweep_flags.size, "states per trial, 0 for 1 to 3");
  sweep->add_option("--trials", sweep_flags.trials, "number of trials");
  sweep->add_option("--jobs", sweep_flags.jobs, "worker threads");

  auto* demo = app.add_subcommand("demo", "run a builtin demo");
  demo->add_option("name", demo_name, "demo name");
  demo->add_flag("--list", list, "list the demos");
  add_run_flags(*demo, demo_flags);

  auto* ver = app.add_subcommand("verify", "re-check a JSON report");
  ver->add_option("report", verify_arg, "report path")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (verify_path) return verify(*verify_path);
    if (*ver) return verify(verify_arg);
    if (*run) return execute(load_scenario(scenario_path), run_flags);
    if (*sweep) {
      Scenario s;
      if (sweep_path) {
        s = load_scenario(*sweep_path);
      } else {
        s.trials = 100;
      }
      s.task = "sweep";
      return execute(std::move(s), sweep_flags);
    }
    if (*demo) {
      if (list || demo_name.empty()) {
        for (const auto& d : demos()) std::cout << d.name << "  " << d.description << "\n";
        return 0;
      }
      const Demo* d = find_demo(demo_name);
      if (!d) throw InputError(0, "demo", "unknown demo '" + demo_name + "' (see demo --list)");
      return execute(parse_scenario(d->scenario), demo_flags);
    }
    std::cout << app.help();
    return 0;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    std::cerr << "input error: malformed report: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
