#include "report.hpp"

#include <sstream>

#include "sweep.hpp"

namespace gptcast {

namespace {

constexpr const char* kFormat = "gptcast-report-1";
constexpr std::size_t kShownSupport = 20;

gpt::Task parse_task(const std::string& t) {
  if (t == "distinguish") return gpt::Task::distinguish;
  if (t == "clone") return gpt::Task::clone;
  if (t == "broadcast") return gpt::Task::broadcast;
  if (t == "analyze") return gpt::Task::analyze;
  throw InputError(0, "task", "no single-instance task '" + t + "'");
}

gpt::Scalar from_json_scalar(const Json& j) {
  if (!j.is_string()) throw InputError(0, "report", "expected a rational string, got " + j.dump());
  try {
    return gpt::parse_scalar(j.get<std::string>());
  } catch (const gpt::ParseError& e) {
    throw InputError(0, "report", e.what());
  }
}

gpt::Vec from_json_vec(const Json& j) {
  if (!j.is_array()) throw InputError(0, "report", "expected an array of rationals");
  gpt::Vec out;
  for (const auto& x : j) out.push_back(from_json_scalar(x));
  return out;
}

std::vector<gpt::Vec> from_json_rows(const Json& j) {
  if (!j.is_array()) throw InputError(0, "report", "expected an array of rows");
  std::vector<gpt::Vec> out;
  for (const auto& r : j) out.push_back(from_json_vec(r));
  return out;
}

gpt::Matrix from_json_matrix(const Json& j, std::size_t rows, std::size_t cols) {
  const auto r = from_json_rows(j);
  if (r.size() != rows) throw InputError(0, "report", "matrix has the wrong number of rows");
  for (const auto& x : r) {
    if (x.size() != cols) throw InputError(0, "report", "matrix has the wrong number of columns");
  }
  return gpt::Matrix::from_rows(r, cols);
}

Json measurement_json(const gpt::Measurement& m) {
  return Json{{"labels", m.labels}, {"effects", to_json(m.effects)}};
}

gpt::Measurement measurement_from(const Json& j) {
  gpt::Measurement m;
  m.effects = from_json_rows(j.at("effects"));
  m.labels = j.at("labels").get<std::vector<std::string>>();
  return m;
}

Json channel_json(const gpt::AffineChannel& c) {
  return Json{{"rows", c.matrix.rows()}, {"cols", c.matrix.cols()}, {"matrix", to_json(c.matrix)}};
}

Json cover_json(const gpt::SimplexCover& c) {
  Json j;
  j["generators"] = to_json(c.generators);
  j["generators_distinguishable"] = c.generators_distinguishable;
  j["fixed_set_is_simplex"] = c.fixed_set_is_simplex;
  j["measurement"] = measurement_json(c.measurement);
  j["weights"] = to_json(c.weights);
  j["symmetrized"] = to_json(c.symmetrized.matrix);
  j["compression"] = to_json(c.compression);
  return j;
}

// Rows of the system with a nonzero multiplier, with their labels.
Json certificate_json(const gpt::FarkasCertificate& cert, const gpt::LpSystem& sys) {
  Json support = Json::array();
  auto add = [&](const char* kind, const std::vector<gpt::LpRow>& rows, const gpt::Vec& mult) {
    for (std::size_t i = 0; i < mult.size(); ++i) {
      if (mult[i] == 0) continue;
      support.push_back(Json{{"kind", kind}, {"index", i}, {"label", rows[i].label}, {"multiplier", gpt::to_string(mult[i])}});
    }
  };
  add("inequality", sys.inequalities(), cert.inequality_multipliers);
  add("equality", sys.equalities(), cert.equality_multipliers);
  return Json{{"variables", sys.variables()},
              {"inequalities", sys.inequalities().size()},
              {"equalities", sys.equalities().size()},
              {"support", std::move(support)}};
}

gpt::FarkasCertificate certificate_from(const Json& j, const gpt::LpSystem& sys) {
  if (j.at("variables").get<std::size_t>() != sys.variables() ||
      j.at("inequalities").get<std::size_t>() != sys.inequalities().size() ||
      j.at("equalities").get<std::size_t>() != sys.equalities().size()) {
    throw InputError(0, "certificate", "row counts do not match the rebuilt system");
  }
  gpt::FarkasCertificate cert{gpt::zeros(sys.inequalities().size()), gpt::zeros(sys.equalities().size())};
  for (const auto& entry : j.at("support")) {
    const auto kind = entry.at("kind").get<std::string>();
    const auto i = entry.at("index").get<std::size_t>();
    gpt::Vec& target = kind == "equality" ? cert.equality_multipliers : cert.inequality_multipliers;
    if (i >= target.size()) throw InputError(0, "certificate", "row index out of range");
    target[i] = from_json_scalar(entry.at("multiplier"));
  }
  return cert;
}

std::string row_text(const gpt::Vec& v) {
  std::string out;
  for (const auto& x : v) out += (out.empty() ? "" : "  ") + gpt::to_string(x);
  return out;
}

void print_matrix(std::ostringstream& out, const gpt::Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) out << "    " << row_text(m.row(i)) << "\n";
}

std::string summary(const Scenario& s, const gpt::StateSet& ss, const gpt::DecisionReport& r, const RunOptions& o) {
  std::ostringstream out;
  if (!s.name.empty()) out << "scenario: " << s.name << "\n";
  out << "space: " << ss.space->name() << " (dim " << ss.space->dim() << ", " << ss.space->vertices().size()
      << " vertices)\n";
  if (s.task != "distinguish") out << "composite: " << gpt::to_string(s.composite) << "\n";
  out << "task: " << s.task << "\n";
  out << "states: " << ss.states.size() << "\n";
  for (std::size_t i = 0; i < ss.states.size(); ++i) out << "  [" << i << "] " << row_text(ss.states[i]) << "\n";
  out << "verdict: " << (r.verdict ? "yes" : "no") << "\n";
  if (r.measurement) {
    out << "measurement:\n";
    for (std::size_t j = 0; j < r.measurement->effects.size(); ++j) {
      out << "  " << r.measurement->labels[j] << ": " << row_text(r.measurement->effects[j]) << "\n";
    }
  }
  if (r.channel) {
    out << "channel (" << r.channel->matrix.rows() << "x" << r.channel->matrix.cols() << "):\n";
    print_matrix(out, r.channel->matrix);
  }
  if (r.cover) {
    const auto& c = *r.cover;
    out << "simplex cover: " << c.generators.size() << " generators, simplex "
        << (c.fixed_set_is_simplex ? "yes" : "no") << ", distinguishable " << (c.generators_distinguishable ? "yes" : "no")
        << "\n";
    for (std::size_t k = 0; k < c.generators.size(); ++k) out << "  g" << k << ": " << row_text(c.generators[k]) << "\n";
    for (std::size_t i = 0; i < c.weights.size(); ++i) out << "  weights of [" << i << "]: " << row_text(c.weights[i]) << "\n";
  }
  if (r.certificate && r.system) {
    std::vector<std::string> lines;
    auto add = [&](const std::vector<gpt::LpRow>& rows, const gpt::Vec& mult) {
      for (std::size_t i = 0; i < mult.size(); ++i) {
        if (mult[i] != 0) lines.push_back(gpt::to_string(mult[i]) + " x " + rows[i].label);
      }
    };
    add(r.system->inequalities(), r.certificate->inequality_multipliers);
    add(r.system->equalities(), r.certificate->equality_multipliers);
    out << "infeasibility certificate: " << lines.size() << " rows with nonzero multipliers\n";
    for (std::size_t i = 0; i < lines.size() && i < kShownSupport; ++i) out << "  " << lines[i] << "\n";
    if (lines.size() > kShownSupport) out << "  ... " << lines.size() - kShownSupport << " more in the JSON report\n";
  }
  if (!r.cross_checks.empty()) {
    out << "cross-checks:\n";
    for (const auto& c : r.cross_checks) {
      out << "  " << (c.passed ? "ok  " : "FAIL") << " " << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")")
          << "\n";
    }
  }
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  if (o.timings) out << "seconds: " << r.seconds << "\n";
  return out.str();
}

}  // namespace

Json to_json(const gpt::Vec& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(gpt::to_string(x));
  return out;
}

Json to_json(const std::vector<gpt::Vec>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) out.push_back(to_json(r));
  return out;
}

Json to_json(const gpt::Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

RunResult run_scenario(const Scenario& s, const RunOptions& options) {
  if (s.task == "sweep") return run_sweep(s, options);
  const auto space = build_space(s);
  const gpt::StateSet ss = build_states(s, space);
  const gpt::Task task = parse_task(s.task);
  gpt::CompositePtr joint;
  if (task != gpt::Task::distinguish) joint = build_composite(s, space);

  gpt::DecisionReport r;
  switch (task) {
    case gpt::Task::distinguish: r = gpt::jointly_distinguishable(ss); break;
    case gpt::Task::clone: r = gpt::cloner_exists(ss, joint); break;
    case gpt::Task::broadcast: r = gpt::broadcaster_exists(ss, joint); break;
    default: {
      gpt::AnalyzeOptions a;
      a.seed = s.seed;
      a.cesaro_tolerance = options.tolerance;
      r = gpt::analyze(ss, joint, a);
    }
  }

  Json j;
  j["format"] = kFormat;
  j["scenario"] = format_scenario(s);
  j["task"] = s.task;
  j["space"] = Json{{"name", space->name()},
                    {"dim", space->dim()},
                    {"unit", to_json(space->unit())},
                    {"vertices", to_json(space->vertices())}};
  j["composite"] = joint ? Json(gpt::to_string(s.composite)) : Json(nullptr);
  j["states"] = to_json(ss.states);
  j["verdict"] = r.verdict ? "yes" : "no";
  Json witness = nullptr;
  if (r.verdict) {
    witness = Json::object();
    if (r.measurement) witness["measurement"] = measurement_json(*r.measurement);
    if (r.channel) witness["channel"] = channel_json(*r.channel);
    if (r.cover) witness["cover"] = cover_json(*r.cover);
  }
  j["witness"] = std::move(witness);
  j["certificate"] = r.certificate && r.system ? certificate_json(*r.certificate, *r.system) : Json(nullptr);
  Json checks = Json::array();
  bool all = true;
  for (const auto& c : r.cross_checks) {
    checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    all = all && c.passed;
  }
  j["cross_checks"] = std::move(checks);
  j["all_checks_passed"] = all;
  j["warnings"] = r.warnings;
  if (options.timings) j["timings"] = Json{{"seconds", r.seconds}};
  return {std::move(j), summary(s, ss, r, options)};
}

gpt::Validation verify_report_json(const Json& report) {
  if (!report.is_object() || report.value("format", "") != kFormat) {
    if (report.is_object() && report.value("format", "") == "gptcast-sweep-1") {
      throw InputError(0, "format", "sweep reports hold no witnesses; replay the dumped scenarios instead");
    }
    throw InputError(0, "format", std::string("not a ") + kFormat + " report");
  }
  const Scenario s = parse_scenario(report.at("scenario").get<std::string>());
  const auto space = build_space(s);
  const gpt::StateSet ss = build_states(s, space);
  gpt::Validation v;
  if (from_json_rows(report.at("states")) != ss.states) {
    v.violations.push_back({"recorded states differ from the scenario's states", {}, {}});
  }

  gpt::DecisionReport r;
  r.task = parse_task(s.task);
  const std::string verdict = report.at("verdict").get<std::string>();
  if (verdict != "yes" && verdict != "no") throw InputError(0, "verdict", "expected yes or no");
  r.verdict = verdict == "yes";
  gpt::CompositePtr joint;
  if (r.task != gpt::Task::distinguish) joint = build_composite(s, space);

  if (r.verdict) {
    const Json& w = report.at("witness");
    if (!w.is_object()) throw InputError(0, "witness", "yes verdict without a witness");
    if (w.contains("measurement")) r.measurement = measurement_from(w.at("measurement"));
    if (w.contains("channel")) {
      r.channel = gpt::AffineChannel{from_json_matrix(w.at("channel").at("matrix"), joint ? joint->dim() : 0, space->dim()),
                                     space, joint};
    }
    if (w.contains("cover")) {
      const Json& c = w.at("cover");
      gpt::SimplexCover cover;
      cover.generators = from_json_rows(c.at("generators"));
      cover.generators_distinguishable = c.at("generators_distinguishable").get<bool>();
      cover.fixed_set_is_simplex = c.at("fixed_set_is_simplex").get<bool>();
      cover.measurement = measurement_from(c.at("measurement"));
      cover.weights = from_json_rows(c.at("weights"));
      r.cover = std::move(cover);
    }
  } else {
    std::shared_ptr<gpt::LpSystem> sys;
    if (r.task == gpt::Task::distinguish) {
      sys = std::make_shared<gpt::LpSystem>(gpt::distinguish_system(*space, ss.states));
    } else {
      const auto goal = r.task == gpt::Task::clone ? gpt::ChannelGoal::clone : gpt::ChannelGoal::broadcast;
      sys = std::make_shared<gpt::LpSystem>(gpt::channel_system(ss, *joint, goal));
    }
    const Json& c = report.at("certificate");
    if (!c.is_object()) throw InputError(0, "certificate", "no verdict without a certificate");
    r.certificate = certificate_from(c, *sys);
    r.system = sys;
  }
  for (auto& bad : gpt::verify_report(r, ss).violations) v.violations.push_back(std::move(bad));
  return v;
}

}  // namespace gptcast
