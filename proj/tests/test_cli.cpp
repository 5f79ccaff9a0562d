#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "demos.hpp"
#include "report.hpp"
#include "sweep.hpp"

using namespace gptcast;

namespace {

template <class F>
InputError input_error(F&& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e;
  }
  FAIL("no InputError");
  return InputError(0, "", "");
}

RunResult run_demo(const char* name) {
  const Demo* d = find_demo(name);
  REQUIRE(d != nullptr);
  return run_scenario(parse_scenario(d->scenario), RunOptions{});
}

}  // namespace

TEST_CASE("scenario diagnostics name the line and field") {
  auto e = input_error([] { parse_scenario("space: square\nstate: 1/0 0 1\n"); });
  CHECK(e.line() == 2);
  CHECK(e.field() == "state");
  CHECK(std::string(e.what()).find("zero denominator") != std::string::npos);

  e = input_error([] { parse_scenario("# header\nspace: square\n\nstate: 0.5 0 1\n"); });
  CHECK(e.line() == 4);
  e = input_error([] { parse_scenario("space: square\ncolour: red\n"); });
  CHECK(e.field() == "colour");
  e = input_error([] { parse_scenario("space: square\nspace: square\n"); });
  CHECK(e.line() == 2);
  e = input_error([] { parse_scenario("space: hexagon\n"); });
  CHECK(e.field() == "space");
  e = input_error([] { parse_scenario("space: custom\nvertex: 1 0\n"); });
  CHECK(e.field() == "unit");
  e = input_error([] { parse_scenario("space: square\nunit: 0 0 1\n"); });
  CHECK(e.field() == "space");
  e = input_error([] { parse_scenario("space: square\njoint-inequality: 1 <= 1\n"); });
  CHECK(e.field() == "composite");
  e = input_error([] { parse_scenario("space: square\ntask: teleport\n"); });
  CHECK(e.field() == "task");
  e = input_error([] { parse_scenario("space: square\nseed: -4\n"); });
  CHECK(e.field() == "seed");
}

TEST_CASE("state and space resolution errors") {
  const Scenario far = parse_scenario("space: square\nstate: 2 0 1\n");
  auto e = input_error([&] { build_states(far, build_space(far)); });
  CHECK(e.line() == 2);
  const Scenario off = parse_scenario("space: square\nstate: vertex 4\n");
  e = input_error([&] { build_states(off, build_space(off)); });
  CHECK(std::string(e.what()).find("out of range") != std::string::npos);
  const Scenario unnormalized = parse_scenario("space: square\nstate: 0 0 2\n");
  e = input_error([&] { build_states(unnormalized, build_space(unnormalized)); });
  CHECK(std::string(e.what()).find("u(x) = 2") != std::string::npos);
  // unit is 2 on the second vertex
  const Scenario bad_unit = parse_scenario("space: custom\nunit: 0 1\nvertex: 1 1\nvertex: 0 2\n");
  e = input_error([&] { build_space(bad_unit); });
  CHECK(e.field() == "space");
  const Scenario open = parse_scenario("space: custom\nunit: 0 1\ninequality: 1 0 <= 1\nequality: 0 1 = 1\n");
  CHECK_THROWS_AS(build_space(open), InputError);
}

TEST_CASE("canonical text is a fixed point of parse and format") {
  const std::string text =
      "# a square written as inequalities\n"
      "name: boxed\n"
      "space: custom\n"
      "unit: 0 0 2/2\n"
      "inequality: 1 0 0 <= 1\ninequality: -1 0 0 <= 1\ninequality: 0 1 0 <= 1\ninequality: 0 -1 0 <= 1\n"
      "equality: 0 0 1 = 1\n"
      "state: 2/4 -1/2 1\nstate: centroid\nstate: vertex 0\n"
      "task: analyze\nseed: 9\n";
  const std::string once = format_scenario(parse_scenario(text));
  CHECK(once == format_scenario(parse_scenario(once)));
  CHECK(once.find("state: 1/2 -1/2 1") != std::string::npos);
  CHECK(once.find("unit: 0 0 1") != std::string::npos);
  CHECK(once.find('#') == std::string::npos);
}

TEST_CASE("classical-broadcast demo prints a witness channel") {
  const RunResult r = run_demo("classical-broadcast");
  CHECK(r.report["verdict"] == "yes");
  CHECK(r.report["witness"]["channel"]["rows"] == 4);
  CHECK(r.summary.find("channel (4x2)") != std::string::npos);
  CHECK(verify_report_json(r.report).ok());
}

TEST_CASE("gbit-three-vertices demo refuses with a certificate") {
  const RunResult r = run_demo("gbit-three-vertices");
  CHECK(r.report["verdict"] == "no");
  CHECK(r.report["witness"].is_null());
  CHECK(!r.report["certificate"]["support"].empty());
  CHECK(verify_report_json(r.report).ok());
  CHECK(r.summary.find("infeasibility certificate") != std::string::npos);
}

TEST_CASE("verify catches tampered witnesses and certificates") {
  Json yes = run_demo("gbit-distinguishable-pair").report;
  REQUIRE(verify_report_json(yes).ok());
  yes["witness"]["channel"]["matrix"][0][2] = "7/3";
  CHECK(!verify_report_json(yes).ok());

  Json no = run_demo("gbit-three-vertices").report;
  no["certificate"]["support"][0]["multiplier"] = "5";
  CHECK(!verify_report_json(no).ok());

  Json moved = run_demo("gbit-failing-triple").report;
  moved["states"][0][0] = "1";
  CHECK(!verify_report_json(moved).ok());

  Json wrong_verdict = run_demo("gbit-failing-triple").report;
  wrong_verdict["verdict"] = "yes";
  CHECK_THROWS_AS(verify_report_json(wrong_verdict), InputError);
}

TEST_CASE("custom composite from a file matches the max composite") {
  const auto sq = gpt::make_square_gbit();
  const gpt::HRep h = gpt::max_tensor_constraints(*sq, *sq);
  const std::string path = "test_cli_joint.txt";
  {
    std::ofstream out(path);
    auto row = [&](const gpt::Vec& a) {
      for (const auto& x : a) out << gpt::to_string(x) << " ";
    };
    for (const auto& r : h.inequalities) {
      out << "joint-inequality: ";
      row(r.normal);
      out << "<= " << gpt::to_string(r.offset) << "\n";
    }
    for (const auto& r : h.equalities) {
      out << "joint-equality: ";
      row(r.normal);
      out << "= " << gpt::to_string(r.offset) << "\n";
    }
  }
  Scenario s = parse_scenario(find_demo("gbit-three-vertices")->scenario);
  load_composite_file(path, s);
  std::remove(path.c_str());
  CHECK(s.composite == gpt::TensorVariant::custom);
  const RunResult r = run_scenario(s, RunOptions{});
  CHECK(r.report["verdict"] == "no");
  CHECK(r.report["composite"] == "custom");
  // the joint rows travel inside the report, so verify needs no side file
  CHECK(verify_report_json(r.report).ok());
}

TEST_CASE("sweeps") {
  Scenario s;
  s.task = "sweep";
  s.trials = 0;
  RunResult empty = run_scenario(s, RunOptions{});
  CHECK(empty.report["results"].empty());
  CHECK(empty.report["summary"]["min_vs_max"]["trials"] == 0);
  CHECK_THROWS_AS(verify_report_json(empty.report), InputError);

  s.trials = 6;
  s.size = 0;
  s.seed = 4;
  const RunResult r = run_scenario(s, RunOptions{});
  CHECK(r.report["summary"]["clone_vs_distinguish"]["agree"] == 6);
  CHECK(r.report["summary"]["broadcast_vs_simplex_cover"]["agree"] == 6);
  CHECK(r.report["summary"]["min_vs_max"]["agree"] == 6);
  CHECK(r.report["disagreements"].empty());
  for (std::size_t i = 0; i < 6; ++i) CHECK(r.report["results"][i]["trial"] == i);

  // a trial replayed on its own reaches the same verdict
  const TrialResult t = run_trial(build_space(s), s.seed, 2, 0, 1e-9);
  const RunResult replay = run_scenario(replay_scenario(s, t), RunOptions{});
  CHECK((replay.report["verdict"] == "yes") == t.broadcastable_max);
  CHECK(verify_report_json(replay.report).ok());
}

TEST_CASE("timings are opt-in") {
  RunOptions o;
  CHECK(!run_demo("classical-broadcast").report.contains("timings"));
  o.timings = true;
  const RunResult r = run_scenario(parse_scenario(find_demo("classical-broadcast")->scenario), o);
  CHECK(r.report.contains("timings"));
}
