#include "neurohjr/config.hpp"

#include <cstdio>
#include <sstream>

#include "neurohjr/manifest.hpp"

namespace neurohjr {

EnvTemplate EnvironmentSpec::as_template() const {
  EnvTemplate tpl;
  tpl.bounds = bounds;
  tpl.start = start;
  tpl.goal = goal;
  tpl.obstacle_count = random_obstacles;
  tpl.obstacle_radius = obstacle_radius;
  tpl.safety_margin = safety_margin;
  tpl.goal_threshold = goal_threshold;
  tpl.placement_clearance = placement_clearance;
  return tpl;
}

Environment EnvironmentSpec::realize() const {
  if (random_obstacles > 0 && !obstacles.empty()) {
    throw std::invalid_argument(
        "environment: explicit obstacles and random_obstacles are exclusive");
  }
  if (random_obstacles > 0) {
    return random_environment(as_template(), placement_seed);
  }
  return Environment(bounds, start, goal, obstacles, safety_margin,
                     goal_threshold);
}

namespace {

struct Cursor {
  std::string file;
  int line = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(file + ":" + std::to_string(line) + ": " + what, line);
  }
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_doubles(const Cursor& at, const std::string& value,
                                  std::size_t expect = 0) {
  std::istringstream in(value);
  std::vector<double> out;
  double x;
  while (in >> x) out.push_back(x);
  std::string rest;
  if (in.clear(), in >> rest) at.fail("trailing junk in numeric value");
  if (out.empty()) at.fail("expected numeric value");
  if (expect != 0 && out.size() != expect) {
    at.fail("expected " + std::to_string(expect) + " numbers");
  }
  return out;
}

double parse_double(const Cursor& at, const std::string& value) {
  return parse_doubles(at, value, 1)[0];
}

long long parse_int(const Cursor& at, const std::string& value) {
  std::istringstream in(value);
  long long x;
  if (!(in >> x)) at.fail("expected integer value");
  std::string rest;
  if (in >> rest) at.fail("trailing junk after integer");
  return x;
}

std::uint64_t parse_seed(const Cursor& at, const std::string& value) {
  const long long v = parse_int(at, value);
  if (v < 0) at.fail("seed must be non-negative");
  return static_cast<std::uint64_t>(v);
}

bool parse_bool(const Cursor& at, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  at.fail("expected true/false");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& name) {
  ExperimentConfig cfg;
  Cursor at{name, 0};
  std::string section;
  std::istringstream in(text);
  std::string raw;

  while (std::getline(in, raw)) {
    ++at.line;
    std::string line = raw;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') at.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "environment" && section != "grid" &&
          section != "training" && section != "simulation" &&
          section != "compare" && section != "ablation") {
        at.fail("unknown section [" + section + "]");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) at.fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) at.fail("empty key");
    if (value.empty()) at.fail("empty value for key '" + key + "'");
    if (section.empty()) at.fail("key '" + key + "' outside any section");

    if (section == "environment") {
      EnvironmentSpec& e = cfg.environment;
      if (key == "bounds_min") {
        auto v = parse_doubles(at, value, 2);
        e.bounds.lo = {v[0], v[1]};
      } else if (key == "bounds_max") {
        auto v = parse_doubles(at, value, 2);
        e.bounds.hi = {v[0], v[1]};
      } else if (key == "start") {
        auto v = parse_doubles(at, value, 2);
        e.start = {v[0], v[1]};
      } else if (key == "goal") {
        auto v = parse_doubles(at, value, 2);
        e.goal = {v[0], v[1]};
      } else if (key == "safety_margin") {
        e.safety_margin = parse_double(at, value);
      } else if (key == "goal_threshold") {
        e.goal_threshold = parse_double(at, value);
      } else if (key == "obstacle") {
        auto v = parse_doubles(at, value, 3);
        e.obstacles.push_back({{v[0], v[1]}, v[2]});
      } else if (key == "random_obstacles") {
        e.random_obstacles = static_cast<int>(parse_int(at, value));
      } else if (key == "obstacle_radius") {
        e.obstacle_radius = parse_double(at, value);
      } else if (key == "placement_seed") {
        e.placement_seed = parse_seed(at, value);
      } else if (key == "placement_clearance") {
        e.placement_clearance = parse_double(at, value);
      } else {
        at.fail("unknown key '" + key + "' in [environment]");
      }
    } else if (section == "grid") {
      SolveSetup& g = cfg.grid;
      if (key == "spacing") {
        g.spacing = parse_double(at, value);
      } else if (key == "cfl") {
        g.cfl = parse_double(at, value);
      } else if (key == "horizon_forward") {
        g.horizon_forward = parse_double(at, value);
      } else if (key == "horizon_backward") {
        g.horizon_backward = parse_double(at, value);
      } else {
        at.fail("unknown key '" + key + "' in [grid]");
      }
    } else if (section == "training") {
      TrainConfig& t = cfg.training;
      if (key == "epochs") {
        t.epochs = static_cast<int>(parse_int(at, value));
      } else if (key == "learning_rate") {
        t.learning_rate = parse_double(at, value);
      } else if (key == "minibatch") {
        t.minibatch = static_cast<int>(parse_int(at, value));
      } else if (key == "interior_points") {
        t.interior_count = static_cast<int>(parse_int(at, value));
      } else if (key == "boundary_points") {
        t.boundary_count = static_cast<int>(parse_int(at, value));
      } else if (key == "lambda_pde") {
        t.weights.pde = parse_double(at, value);
      } else if (key == "lambda_value") {
        t.weights.value = parse_double(at, value);
      } else if (key == "lambda_obstacle") {
        t.weights.obstacle = parse_double(at, value);
      } else if (key == "lambda_goal") {
        t.weights.goal = parse_double(at, value);
      } else if (key == "seed") {
        t.seed = parse_seed(at, value);
      } else if (key == "residual_mode") {
        if (value == "predicted") {
          t.residual_mode = ResidualMode::kPredictedControl;
        } else if (value == "analytic") {
          t.residual_mode = ResidualMode::kAnalyticHamiltonian;
        } else {
          at.fail("residual_mode must be 'predicted' or 'analytic'");
        }
      } else if (key == "boundary_band") {
        t.boundary_band = parse_double(at, value);
      } else if (key == "resample_each_epoch") {
        t.resample_each_epoch = parse_bool(at, value);
      } else if (key == "composite_field") {
        cfg.composite_field_path = value;
      } else {
        at.fail("unknown key '" + key + "' in [training]");
      }
    } else if (section == "simulation") {
      SimConfig& s = cfg.simulation;
      if (key == "dt") {
        s.dt = parse_double(at, value);
      } else if (key == "sensor_radius") {
        s.sensor_radius = parse_double(at, value);
      } else if (key == "max_time") {
        s.max_episode_time = parse_double(at, value);
      } else if (key == "controller") {
        if (value == "neurohjr") {
          s.controller = ControllerKind::kNeuroHjr;
        } else if (value == "classical") {
          s.controller = ControllerKind::kClassical;
        } else {
          at.fail("controller must be 'neurohjr' or 'classical'");
        }
      } else if (key == "latency_model") {
        if (value == "none") {
          s.latency = LatencyModel::kNone;
        } else if (value == "measured") {
          s.latency = LatencyModel::kMeasured;
        } else {
          at.fail("latency_model must be 'none' or 'measured'");
        }
      } else if (key == "seed") {
        s.seed = parse_seed(at, value);
      } else if (key == "start_jitter") {
        s.start_jitter = parse_double(at, value);
      } else if (key == "episodes") {
        cfg.episodes = static_cast<int>(parse_int(at, value));
      } else if (key == "checkpoint") {
        cfg.checkpoint_path = value;
      } else {
        at.fail("unknown key '" + key + "' in [simulation]");
      }
    } else if (section == "compare") {
      if (key == "runs") {
        cfg.compare_runs = static_cast<int>(parse_int(at, value));
      } else {
        at.fail("unknown key '" + key + "' in [compare]");
      }
    } else {  // ablation
      if (key == "radii") {
        cfg.ablation_radii = parse_doubles(at, value);
      } else {
        at.fail("unknown key '" + key + "' in [ablation]");
      }
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what(), 0);
  }
  return parse_config_text(text, path);
}

namespace {
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace

std::string ExperimentConfig::resolved_text() const {
  std::ostringstream out;
  const EnvironmentSpec& e = environment;
  out << "[environment]\n";
  out << "bounds_min = " << fmt(e.bounds.lo.x) << ' ' << fmt(e.bounds.lo.y) << '\n';
  out << "bounds_max = " << fmt(e.bounds.hi.x) << ' ' << fmt(e.bounds.hi.y) << '\n';
  out << "start = " << fmt(e.start.x) << ' ' << fmt(e.start.y) << '\n';
  out << "goal = " << fmt(e.goal.x) << ' ' << fmt(e.goal.y) << '\n';
  out << "safety_margin = " << fmt(e.safety_margin) << '\n';
  out << "goal_threshold = " << fmt(e.goal_threshold) << '\n';
  for (const Obstacle& o : e.obstacles) {
    out << "obstacle = " << fmt(o.center.x) << ' ' << fmt(o.center.y) << ' '
        << fmt(o.radius) << '\n';
  }
  out << "random_obstacles = " << e.random_obstacles << '\n';
  out << "obstacle_radius = " << fmt(e.obstacle_radius) << '\n';
  out << "placement_seed = " << e.placement_seed << '\n';
  out << "placement_clearance = " << fmt(e.placement_clearance) << '\n';

  out << "\n[grid]\n";
  out << "spacing = " << fmt(grid.spacing) << '\n';
  out << "cfl = " << fmt(grid.cfl) << '\n';
  out << "horizon_forward = " << fmt(grid.horizon_forward) << '\n';
  out << "horizon_backward = " << fmt(grid.horizon_backward) << '\n';

  out << "\n[training]\n";
  out << "epochs = " << training.epochs << '\n';
  out << "learning_rate = " << fmt(training.learning_rate) << '\n';
  out << "minibatch = " << training.minibatch << '\n';
  out << "interior_points = " << training.interior_count << '\n';
  out << "boundary_points = " << training.boundary_count << '\n';
  out << "lambda_pde = " << fmt(training.weights.pde) << '\n';
  out << "lambda_value = " << fmt(training.weights.value) << '\n';
  out << "lambda_obstacle = " << fmt(training.weights.obstacle) << '\n';
  out << "lambda_goal = " << fmt(training.weights.goal) << '\n';
  out << "seed = " << training.seed << '\n';
  out << "residual_mode = "
      << (training.residual_mode == ResidualMode::kPredictedControl
              ? "predicted"
              : "analytic")
      << '\n';
  out << "boundary_band = " << fmt(training.boundary_band) << '\n';
  out << "resample_each_epoch = "
      << (training.resample_each_epoch ? "true" : "false") << '\n';
  if (!composite_field_path.empty()) {
    out << "composite_field = " << composite_field_path << '\n';
  }

  out << "\n[simulation]\n";
  out << "dt = " << fmt(simulation.dt) << '\n';
  out << "sensor_radius = " << fmt(simulation.sensor_radius) << '\n';
  out << "max_time = " << fmt(simulation.max_episode_time) << '\n';
  out << "controller = "
      << (simulation.controller == ControllerKind::kNeuroHjr ? "neurohjr"
                                                             : "classical")
      << '\n';
  out << "latency_model = "
      << (simulation.latency == LatencyModel::kMeasured ? "measured" : "none")
      << '\n';
  out << "seed = " << simulation.seed << '\n';
  out << "start_jitter = " << fmt(simulation.start_jitter) << '\n';
  out << "episodes = " << episodes << '\n';
  if (!checkpoint_path.empty()) {
    out << "checkpoint = " << checkpoint_path << '\n';
  }

  out << "\n[compare]\n";
  out << "runs = " << compare_runs << '\n';

  out << "\n[ablation]\n";
  out << "radii =";
  for (double r : ablation_radii) out << ' ' << fmt(r);
  out << '\n';
  return out.str();
}

}  // namespace neurohjr
