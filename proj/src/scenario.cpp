#include "spp/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "spp/errors.hpp"
#include "spp/fj_core.hpp"
#include "spp/random_network.hpp"
#include "spp/simkit.hpp"

namespace spp {

namespace {

struct ModeName {
  ScenarioMode mode;
  const char* name;
};

constexpr ModeName kModes[] = {
    {ScenarioMode::SocialPower, "social_power"},
    {ScenarioMode::PerceptionNoRA, "perception_no_ra"},
    {ScenarioMode::PerceptionRA, "perception_ra"},
    {ScenarioMode::PerceptionRASingle, "perception_ra_single"},
    {ScenarioMode::PowerEvolution, "power_evolution"},
    {ScenarioMode::PowerEvolutionSingle, "power_evolution_single"},
    {ScenarioMode::PageRankRA, "pagerank_ra"},
    {ScenarioMode::FJOpinions, "fj_opinions"},
    {ScenarioMode::DistributedNoRA, "distributed_no_ra"},
    {ScenarioMode::DistributedRA, "distributed_ra"},
};

bool needs_gamma(ScenarioMode m) {
  return m == ScenarioMode::SocialPower || m == ScenarioMode::PerceptionNoRA ||
         m == ScenarioMode::FJOpinions || m == ScenarioMode::DistributedNoRA;
}

bool uses_gamma_oracle(ScenarioMode m) {
  return m == ScenarioMode::PerceptionNoRA || m == ScenarioMode::DistributedNoRA ||
         m == ScenarioMode::SocialPower;
}

std::string num(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string vec(const Vector& v, int digits = 12) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += num(v(i), digits);
  }
  return s + ")";
}

// --- YAML helpers -----------------------------------------------------------

[[noreturn]] void parse_fail(const std::filesystem::path& src, const YAML::Node& node,
                             const std::string& what) {
  std::string where = src.empty() ? std::string("<text>") : src.string();
  const auto mark = node.Mark();
  if (mark.line >= 0) where += ":" + std::to_string(mark.line + 1);
  throw ParseError(where + ": " + what);
}

Vector to_vector(const YAML::Node& node, const std::filesystem::path& src, const std::string& key) {
  if (!node.IsSequence()) parse_fail(src, node, key + " must be a list of numbers");
  Vector v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    try {
      v(static_cast<Eigen::Index>(i)) = node[i].as<double>();
    } catch (const YAML::Exception&) {
      parse_fail(src, node[i], key + "[" + std::to_string(i + 1) + "] is not a number");
    }
  }
  return v;
}

Matrix to_matrix(const YAML::Node& node, const std::filesystem::path& src) {
  if (!node.IsSequence() || node.size() == 0) parse_fail(src, node, "C must be a list of rows");
  const auto rows = static_cast<Eigen::Index>(node.size());
  Matrix C;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Vector row = to_vector(node[static_cast<std::size_t>(i)], src, "C row " + std::to_string(i + 1));
    if (i == 0) C.resize(rows, row.size());
    if (row.size() != C.cols()) {
      throw ValidationError("dimension: row " + std::to_string(i + 1) + " of C has " +
                            std::to_string(row.size()) + " entries, expected " +
                            std::to_string(C.cols()));
    }
    C.row(i) = row.transpose();
  }
  return C;
}

template <typename T>
T scalar(const YAML::Node& parent, const char* key, T fallback, const std::filesystem::path& src) {
  const YAML::Node node = parent[key];
  if (!node) return fallback;
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    parse_fail(src, node, std::string("bad value for ") + key);
  }
}

bool is_matrix(const YAML::Node& node) {
  return node.IsSequence() && node.size() > 0 && node[0].IsSequence();
}

Box named_box(const InfluenceNetwork& net, const std::string& name) {
  if (name == "H") return build_invariant_set_H(net);
  if (name == "M") return build_invariant_set_M(net);
  if (name == "star") return star_invariant_box(net);
  if (name == "star_partial") return partial_center_star_boxes(net).invariant;
  if (name == "star_partial_start") return partial_center_star_boxes(net).start_region;
  throw ValidationError("unknown box '" + name + "'");
}

void check_length(const Vector& v, std::size_t n, const std::string& what) {
  if (static_cast<std::size_t>(v.size()) != n) {
    throw ValidationError("dimension: " + what + " has " + std::to_string(v.size()) +
                          " entries, expected " + std::to_string(n));
  }
}

}  // namespace

std::string to_string(ScenarioMode mode) {
  for (const auto& m : kModes) {
    if (m.mode == mode) return m.name;
  }
  return "?";
}

std::optional<ScenarioMode> parse_mode(const std::string& name) {
  for (const auto& m : kModes) {
    if (name == m.name) return m.mode;
  }
  return std::nullopt;
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& source,
                        std::optional<std::uint64_t> seed_override) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError((source.empty() ? std::string("<text>") : source.string()) + ":" +
                     std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) parse_fail(source, root, "top level must be a mapping");

  for (const char* key : {"C", "a", "mode"}) {
    if (!root[key]) parse_fail(source, root, std::string("missing required key '") + key + "'");
  }
  const auto mode_name = scalar<std::string>(root, "mode", "", source);
  const auto mode = parse_mode(mode_name);
  if (!mode) parse_fail(source, root["mode"], "unknown mode '" + mode_name + "'");

  Matrix C = to_matrix(root["C"], source);
  Vector a = to_vector(root["a"], source, "a");
  if (root["n"]) {
    const auto n = scalar<std::size_t>(root, "n", 0, source);
    if (n != static_cast<std::size_t>(C.rows())) {
      throw ValidationError("dimension: n = " + std::to_string(n) + " but C has " +
                            std::to_string(C.rows()) + " rows");
    }
  }
  NetworkOptions net_options;
  net_options.renormalize_rows = scalar<bool>(root, "renormalize_rows", false, source);

  Scenario scn(InfluenceNetwork::create(std::move(C), std::move(a), net_options));
  const std::size_t n = scn.net.size();
  scn.name = scalar<std::string>(root, "name",
                                 source.empty() ? std::string("scenario") : source.stem().string(),
                                 source);
  scn.mode = *mode;
  scn.source = source;
  scn.seed = seed_override ? *seed_override : scalar<std::uint64_t>(root, "seed", 0, source);

  if (root["gamma"]) {
    scn.gamma = to_vector(root["gamma"], source, "gamma");
    check_length(*scn.gamma, n, "gamma");
    for (Eigen::Index i = 0; i < scn.gamma->size(); ++i) {
      const double g = (*scn.gamma)(i);
      if (!(g >= 0.0 && g <= 1.0)) {
        throw ValidationError("gamma_range: gamma_" + std::to_string(i + 1) + " = " + num(g) +
                              " is outside [0, 1]");
      }
    }
  }
  if (needs_gamma(scn.mode) && !scn.gamma) {
    throw ValidationError("mode_fields: mode " + mode_name + " needs gamma");
  }
  if (scn.mode == ScenarioMode::PageRankRA && !scn.net.homogeneous()) {
    throw ValidationError("homogeneous: mode pagerank_ra needs all a_i equal");
  }

  scn.run.tol = scalar<double>(root, "tol", scn.run.tol, source);
  scn.run.max_iter = scalar<std::size_t>(root, "max_iter", scn.run.max_iter, source);
  if (const auto solver = root["solver"]) {
    scn.run.divergence_bound = scalar<double>(solver, "divergence_bound", scn.run.divergence_bound, source);
    scn.run.dense_steps = scalar<std::size_t>(solver, "dense_steps", scn.run.dense_steps, source);
    scn.run.sparse_stride = scalar<std::size_t>(solver, "sparse_stride", scn.run.sparse_stride, source);
  }
  if (!(scn.run.tol > 0.0)) throw ValidationError("solver: tol must be positive");
  if (scn.run.max_iter < 1) throw ValidationError("solver: max_iter must be at least 1");

  // Initial vectors.
  if (root["p0"] && root["p0_spec"]) parse_fail(source, root, "give either p0 or p0_spec");
  if (const auto p0 = root["p0"]) {
    if (is_matrix(p0)) {
      for (std::size_t k = 0; k < p0.size(); ++k) {
        scn.initial.push_back(to_vector(p0[k], source, "p0[" + std::to_string(k + 1) + "]"));
      }
    } else {
      scn.initial.push_back(to_vector(p0, source, "p0"));
    }
  } else if (const auto spec = root["p0_spec"]) {
    const auto kind = scalar<std::string>(spec, "kind", "", source);
    const auto count = scalar<std::size_t>(spec, "count", 1, source);
    Rng rng(scalar<std::uint64_t>(spec, "seed", scn.seed, source));
    if (kind == "simplex_random") {
      for (std::size_t k = 0; k < count; ++k) scn.initial.push_back(random_simplex_point(n, rng));
    } else if (kind == "uniform_in_box") {
      Box box;
      if (spec["box"]) {
        box = named_box(scn.net, scalar<std::string>(spec, "box", "", source));
      } else {
        if (!spec["lower"] || !spec["upper"]) parse_fail(source, spec, "uniform_in_box needs lower and upper or box");
        box = Box(to_vector(spec["lower"], source, "lower"), to_vector(spec["upper"], source, "upper"));
      }
      check_length(box.lower, n, "p0_spec box");
      for (std::size_t k = 0; k < count; ++k) scn.initial.push_back(random_in_box(box.lower, box.upper, rng));
    } else {
      parse_fail(source, spec, "unknown p0_spec kind '" + kind + "'");
    }
  } else {
    scn.initial.push_back(Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)));
  }
  for (std::size_t k = 0; k < scn.initial.size(); ++k) {
    check_length(scn.initial[k], n, "initial vector " + std::to_string(k + 1));
  }

  if (const auto out = root["outputs"]) {
    auto& req = scn.outputs;
    req.trajectory_csv = scalar<bool>(out, "trajectory_csv", false, source);
    req.equilibrium_report = scalar<bool>(out, "equilibrium_report", false, source);
    req.monotonicity_report = scalar<bool>(out, "monotonicity_report", false, source);
    if (const auto conds = out["condition_report"]) {
      if (!conds.IsSequence()) parse_fail(source, conds, "condition_report must be a list of ids");
      for (const auto& c : conds) {
        const auto id = parse_condition_id(c.as<std::string>());
        if (!id) parse_fail(source, c, "unknown condition '" + c.as<std::string>() + "'");
        req.conditions.push_back(*id);
      }
    }
    if (const auto inv = out["invariant_test"]) {
      InvariantRequest r;
      r.box = scalar<std::string>(inv, "box", r.box, source);
      r.samples = scalar<std::size_t>(inv, "samples", r.samples, source);
      r.upper_scale = scalar<double>(inv, "upper_scale", r.upper_scale, source);
      if (r.box == "explicit") {
        r.lower = to_vector(inv["lower"], source, "lower");
        r.upper = to_vector(inv["upper"], source, "upper");
        check_length(r.lower, n, "invariant_test lower");
        check_length(r.upper, n, "invariant_test upper");
      }
      req.invariant_test = r;
    }
  }
  return scn;
}

Scenario load_scenario(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path, seed_override);
}

std::vector<BatchScenario> to_batch(const Scenario& scn) {
  std::optional<Dynamics> d;
  switch (scn.mode) {
    case ScenarioMode::PerceptionNoRA: d = Dynamics::PerceptionNoRA; break;
    case ScenarioMode::PerceptionRA: d = Dynamics::PerceptionRA; break;
    case ScenarioMode::PerceptionRASingle: d = Dynamics::PerceptionRASingle; break;
    case ScenarioMode::PowerEvolution: d = Dynamics::PowerEvolution; break;
    case ScenarioMode::PowerEvolutionSingle: d = Dynamics::PowerEvolutionSingle; break;
    case ScenarioMode::PageRankRA: d = Dynamics::PageRankRA; break;
    case ScenarioMode::DistributedNoRA: d = Dynamics::DistributedNoRA; break;
    case ScenarioMode::DistributedRA: d = Dynamics::DistributedRA; break;
    case ScenarioMode::SocialPower:
    case ScenarioMode::FJOpinions: break;
  }
  std::vector<BatchScenario> out;
  if (!d) return out;
  for (std::size_t k = 0; k < scn.initial.size(); ++k) {
    BatchScenario b;
    b.name = scn.initial.size() == 1 ? scn.name : scn.name + "#" + std::to_string(k + 1);
    b.C = scn.net.interaction();
    b.a = scn.net.susceptibility();
    b.gamma = scn.gamma;
    b.dynamics = *d;
    b.p0 = scn.initial[k];
    b.options = scn.run;
    for (auto id : scn.outputs.conditions) {
      if (id != ConditionId::Dominance) b.conditions.push_back(id);
    }
    out.push_back(std::move(b));
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::string& prefix) {
  const auto n = traj.states.empty() ? 0 : traj.states.front().size();
  os << "step";
  for (Eigen::Index i = 0; i < n; ++i) os << ',' << prefix << '_' << (i + 1);
  os << '\n';
  char buf[40];
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    os << traj.steps[k];
    for (Eigen::Index i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.17e", traj.states[k](i));
      os << ',' << buf;
    }
    os << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

Trajectory run_one(const Scenario& scn, const Vector& x0) {
  const auto& net = scn.net;
  switch (scn.mode) {
    case ScenarioMode::PerceptionNoRA:
      return run_dynamics(net, Dynamics::PerceptionNoRA, scn.gamma, x0, scn.run);
    case ScenarioMode::PerceptionRA:
      return run_dynamics(net, Dynamics::PerceptionRA, scn.gamma, x0, scn.run);
    case ScenarioMode::PerceptionRASingle:
      return run_dynamics(net, Dynamics::PerceptionRASingle, scn.gamma, x0, scn.run);
    case ScenarioMode::PowerEvolution:
      return run_dynamics(net, Dynamics::PowerEvolution, scn.gamma, x0, scn.run);
    case ScenarioMode::PowerEvolutionSingle:
      return run_dynamics(net, Dynamics::PowerEvolutionSingle, scn.gamma, x0, scn.run);
    case ScenarioMode::PageRankRA:
      return run_dynamics(net, Dynamics::PageRankRA, scn.gamma, x0, scn.run);
    case ScenarioMode::DistributedNoRA:
      return run_dynamics(net, Dynamics::DistributedNoRA, scn.gamma, x0, scn.run);
    case ScenarioMode::DistributedRA:
      return run_dynamics(net, Dynamics::DistributedRA, scn.gamma, x0, scn.run);
    case ScenarioMode::FJOpinions: {
      const Vector y0 = x0;
      const Vector gamma = *scn.gamma;
      return run_to_convergence(
          [&net, gamma, y0](const Vector& y) {
            return step_fj_opinions(net, gamma, OpinionState{y, y0, 0, 0}).y;
          },
          x0, scn.run, Timescale::Step);
    }
    case ScenarioMode::SocialPower:
      break;
  }
  throw std::logic_error("mode has no trajectory");
}

std::string condition_text(const Scenario& scn) {
  std::ostringstream os;
  const auto& net = scn.net;
  for (const auto id : scn.outputs.conditions) {
    if (id == ConditionId::Dominance) {
      EquilibriumOptions eo;
      eo.seed = scn.seed;
      const auto eq = solve_equilibrium(net, eo);
      for (double sigma : {0.5, 0.6, 0.75}) {
        for (std::size_t i = 0; i < net.size(); ++i) {
          const auto d = check_dominance_necessary(net, eq.p_star, i, sigma);
          os << "condition Dominance(node=" << i + 1 << ", sigma=" << sigma
             << "): " << (d.condition.holds ? "holds" : "fails")
             << " margin=" << num(d.condition.margin)
             << " dominant=" << (d.dominant ? "yes" : "no")
             << " consistent=" << (d.consistent ? "yes" : "no") << '\n';
        }
      }
      continue;
    }
    try {
      const auto rep = check_condition(net, id);
      os << "condition " << to_string(id) << ": " << (rep.holds ? "holds" : "fails")
         << " margin=" << num(rep.margin) << (rep.strict ? " (strict)" : "") << '\n';
      for (const auto& m : rep.per_node) {
        os << "  node " << m.node + 1 << ": lhs=" << num(m.lhs) << " rhs=" << num(m.rhs)
           << " margin=" << num(m.margin) << '\n';
      }
      for (const auto& note : rep.notes) os << "  note: " << note << '\n';
    } catch (const WrongTopology& e) {
      os << "condition " << to_string(id) << ": not applicable (" << e.what() << ")\n";
    }
  }
  return os.str();
}

std::string equilibrium_text(const Scenario& scn, const std::vector<TrajectoryOutcome>& outcomes) {
  std::ostringstream os;
  const auto& net = scn.net;
  Vector target;
  if (uses_gamma_oracle(scn.mode)) {
    target = compute_social_power(net, *scn.gamma);
    os << "social_power (direct solve): " << vec(target, 17) << '\n';
  } else if (scn.mode == ScenarioMode::FJOpinions) {
    target = fj_final_opinions(net, *scn.gamma, scn.initial.front());
    os << "final_opinions (direct solve, first y0): " << vec(target, 17) << '\n';
  } else {
    EquilibriumOptions eo;
    eo.seed = scn.seed;
    eo.tol = scn.run.tol;
    eo.max_iter = scn.run.max_iter;
    try {
      const auto eq = solve_equilibrium(net, eo);
      target = eq.p_star;
      os << "p_star: " << vec(eq.p_star, 17) << '\n'
         << "residual: " << num(eq.residual) << '\n'
         << "perception_residual: " << num(eq.perception_residual) << '\n'
         << "iterations: " << eq.iterations << '\n'
         << "starts_converged: " << eq.starts_converged << "/" << eq.starts_total << '\n'
         << "starts_agreeing: " << eq.starts_agreeing << "/" << eq.starts_total << '\n'
         << "max_pairwise_gap: " << num(eq.max_pairwise_gap) << '\n'
         << "in_simplex: " << (eq.in_simplex ? "yes" : "no") << '\n'
         << "interior: " << (eq.interior ? "yes" : "no") << '\n'
         << "uniqueness_evidence: " << (eq.unique_evidence() ? "all starts agree" : "starts disagree")
         << '\n';
    } catch (const NoConvergence& e) {
      os << "p_star: none (" << e.what() << ")\n";
    }
    const auto topo = classify_topology(net);
    if (topo.is_star()) {
      try {
        const Vector closed = star_equilibrium_closed_form(net);
        os << "star_closed_form: " << vec(closed, 17) << '\n';
        if (target.size()) os << "star_closed_form_gap: " << num((closed - target).lpNorm<Eigen::Infinity>()) << '\n';
      } catch (const Error& e) {
        os << "star_closed_form: not available (" << e.what() << ")\n";
      }
    }
  }
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    os << "trajectory " << k + 1 << ": " << to_string(outcomes[k].status) << " after "
       << outcomes[k].iterations << " steps";
    if (target.size() && outcomes[k].final_state.allFinite()) {
      os << ", gap to reference " << num((outcomes[k].final_state - target).lpNorm<Eigen::Infinity>());
    }
    os << '\n';
  }
  return os.str();
}

std::string invariance_text(const Scenario& scn) {
  const auto& req = *scn.outputs.invariant_test;
  Box box = req.box == "explicit" ? Box(req.lower, req.upper) : named_box(scn.net, req.box);
  if (req.upper_scale != 1.0) box = box.scaled_upper(req.upper_scale);
  const auto rep = one_step_invariance_test(scn.net, box, req.samples, scn.seed);
  std::ostringstream os;
  os << "box: " << req.box << (req.upper_scale != 1.0 ? " (upper x" + num(req.upper_scale) + ")" : "")
     << '\n'
     << "lower: " << vec(box.lower) << '\n'
     << "upper: " << vec(box.upper) << '\n'
     << "samples: " << rep.samples << '\n'
     << "exits: " << rep.exits << '\n';
  for (const auto& e : rep.first_exits) {
    os << "  exit at coordinate " << e.coordinate + 1 << " by " << num(e.magnitude) << " from "
       << vec(e.point) << '\n';
  }
  return os.str();
}

std::string monotonicity_text(const Scenario& scn) {
  std::ostringstream os;
  for (std::size_t k = 0; k < scn.initial.size(); ++k) {
    const auto rep = monotonicity_test_star(scn.net, scn.initial[k], scn.run);
    os << "trajectory " << k + 1 << ": leaves "
       << (rep.leaves_monotone ? "strictly monotone" : "not monotone");
    if (rep.first_violation_step) {
      os << " (first violation at step " << *rep.first_violation_step << ", node "
         << *rep.violating_node + 1 << ")";
    }
    os << "; center " << to_string(rep.center_direction);
    if (rep.center_monotone_from) os << " from step " << *rep.center_monotone_from;
    os << '\n';
  }
  return os.str();
}

std::filesystem::path write_text(const std::filesystem::path& dir, const std::string& file,
                                 const std::string& text) {
  const auto path = dir / file;
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
  return path;
}

std::string header(const Scenario& scn) {
  std::ostringstream os;
  os << "scenario: " << scn.name << '\n'
     << "mode: " << to_string(scn.mode) << '\n'
     << "n: " << scn.net.size() << '\n'
     << "topology: " << to_string(classify_topology(scn.net).kind) << '\n';
  return os.str();
}

}  // namespace

ScenarioResult run_scenario(const Scenario& scn, const std::filesystem::path& out_dir) {
  ScenarioResult result;
  const auto& req = scn.outputs;
  const bool writes = req.trajectory_csv || req.equilibrium_report || !req.conditions.empty() ||
                      req.invariant_test || req.monotonicity_report ||
                      scn.mode == ScenarioMode::SocialPower;
  if (writes) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());
  }

  std::ostringstream report;
  report << header(scn);

  if (scn.mode == ScenarioMode::SocialPower) {
    const std::string text = oracle_report(scn);
    result.artifacts.push_back(write_text(out_dir, scn.name + "_social_power.txt", text));
    report << text;
  } else {
    for (std::size_t k = 0; k < scn.initial.size(); ++k) {
      const auto traj = run_one(scn, scn.initial[k]);
      result.trajectories.push_back({traj.status, traj.iterations, traj.final_state()});
      report << "trajectory " << k + 1 << ": " << to_string(traj.status) << " after "
             << traj.iterations << " steps, final " << vec(traj.final_state()) << '\n';
      if (req.trajectory_csv) {
        const auto path = out_dir / (scn.name + "_traj" + std::to_string(k + 1) + ".csv");
        std::ofstream out(path);
        if (!out) throw Error("cannot write " + path.string());
        write_trajectory_csv(out, traj, scn.mode == ScenarioMode::FJOpinions ? "y" : "p");
        if (!out) throw Error("write failed for " + path.string());
        result.artifacts.push_back(path);
      }
    }
  }

  if (req.equilibrium_report) {
    const auto text = header(scn) + equilibrium_text(scn, result.trajectories);
    result.artifacts.push_back(write_text(out_dir, scn.name + "_equilibrium.txt", text));
  }
  if (!req.conditions.empty()) {
    const auto text = condition_text(scn);
    result.artifacts.push_back(write_text(out_dir, scn.name + "_conditions.txt", header(scn) + text));
    report << text;
  }
  if (req.invariant_test) {
    const auto text = invariance_text(scn);
    result.artifacts.push_back(write_text(out_dir, scn.name + "_invariance.txt", header(scn) + text));
    report << text;
  }
  if (req.monotonicity_report) {
    const auto text = monotonicity_text(scn);
    result.artifacts.push_back(write_text(out_dir, scn.name + "_monotonicity.txt", header(scn) + text));
    report << text;
  }

  bool diverged = false;
  bool unfinished = false;
  for (const auto& t : result.trajectories) {
    diverged = diverged || t.status == RunStatus::Diverged;
    unfinished = unfinished || t.status == RunStatus::MaxIter;
  }
  result.exit_code = diverged ? 2 : (unfinished ? 1 : 0);
  result.report = report.str();
  return result;
}

std::string scenario_report(const Scenario& scn) {
  std::ostringstream os;
  os << header(scn);
  const auto& net = scn.net;
  os << "fully_stubborn:";
  for (auto i : net.fully_stubborn_nodes()) os << ' ' << i + 1;
  os << "\npartially_stubborn:";
  for (auto i : net.partially_stubborn_nodes()) os << ' ' << i + 1;
  os << '\n';

  Scenario with_all = scn;
  with_all.outputs.conditions = {ConditionId::Eq15, ConditionId::Eq16, ConditionId::Eq17,
                                 ConditionId::Eq19, ConditionId::Democracy, ConditionId::Eq15Legacy};
  os << condition_text(with_all);
  const Box h = build_invariant_set_H(net);
  const Box m = build_invariant_set_M(net);
  os << "box H: lower " << vec(h.lower) << " upper " << vec(h.upper) << '\n'
     << "box M: lower " << vec(m.lower) << " upper " << vec(m.upper) << '\n';
  if (scn.mode != ScenarioMode::SocialPower && !uses_gamma_oracle(scn.mode) &&
      scn.mode != ScenarioMode::FJOpinions) {
    os << equilibrium_text(scn, {});
  } else if (scn.gamma) {
    os << oracle_report(scn);
  }
  return os.str();
}

std::string oracle_report(const Scenario& scn) {
  if (!scn.gamma) {
    throw ValidationError("mode_fields: the direct social power solve needs gamma");
  }
  const Vector x = compute_social_power(scn.net, *scn.gamma);
  std::ostringstream os;
  os << "gamma: " << vec(*scn.gamma, 17) << '\n'
     << "social_power: " << vec(x, 17) << '\n'
     << "sum: " << num(x.sum(), 17) << '\n';
  return os.str();
}

}  // namespace spp
