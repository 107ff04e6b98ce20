#include "config.hpp"

#include "lyapdisc/error.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

namespace lyapdisc::cli {

namespace {

constexpr double kProbSumTol = 1e-12;

[[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& message) {
  std::ostringstream os;
  const YAML::Mark mark = node.Mark();
  if (!mark.is_null()) os << "line " << mark.line + 1 << ", ";
  os << "field '" << field << "': " << message;
  throw Error(ErrorCode::ConfigError, os.str());
}

void require_keys(const YAML::Node& map, const std::string& where, const std::set<std::string>& allowed) {
  if (!map.IsMap()) fail(map, where, "expected a mapping");
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.contains(key)) fail(kv.first, where.empty() ? key : where + "." + key, "unknown key");
  }
}

double to_double(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) fail(node, field, "expected a number");
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    fail(node, field, "expected a number, got '" + node.Scalar() + "'");
  }
}

double to_angle(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) fail(node, field, "expected a number or pi expression");
  try {
    return parse_angle_expression(node.Scalar());
  } catch (const Error& e) {
    fail(node, field, e.what());
  }
}

std::int64_t to_integer(const YAML::Node& node, const std::string& field, std::int64_t min_value) {
  if (!node.IsScalar()) fail(node, field, "expected an integer");
  std::int64_t value = 0;
  const std::string& s = node.Scalar();
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    // Allow 1e6 style integers.
    double d = 0.0;
    try {
      d = node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node, field, "expected an integer, got '" + s + "'");
    }
    if (!(std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e18)) {
      fail(node, field, "expected an integer, got '" + s + "'");
    }
    value = static_cast<std::int64_t>(d);
  }
  if (value < min_value) fail(node, field, "must be at least " + std::to_string(min_value));
  return value;
}

bool is_auto(const YAML::Node& node) { return node.IsScalar() && node.Scalar() == "auto"; }

std::vector<double> to_list(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence()) fail(node, field, "expected a list");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(to_double(node[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Family parse_family(const YAML::Node& node, const std::string& field) {
  const std::string name = node.IsScalar() ? node.Scalar() : "";
  if (name == "S") return Family::S;
  if (name == "D") return Family::D;
  if (name == "R") return Family::R;
  fail(node, field, "family must be one of S, D, R");
}

GeneratorSpec parse_generator(const YAML::Node& node, const std::string& field) {
  require_keys(node, field, {"family", "param", "matrix", "product"});
  if (node["product"]) {
    if (node.size() != 1) fail(node, field, "'product' cannot be combined with other keys");
    const YAML::Node list = node["product"];
    if (!list.IsSequence() || list.size() == 0) fail(list, field + ".product", "expected a non-empty list");
    std::vector<GeneratorSpec> factors;
    for (std::size_t i = 0; i < list.size(); ++i) {
      factors.push_back(parse_generator(list[i], field + ".product[" + std::to_string(i) + "]"));
    }
    return GeneratorSpec::product(std::move(factors));
  }
  if (node["matrix"]) {
    if (node.size() != 1) fail(node, field, "'matrix' cannot be combined with other keys");
    const auto e = to_list(node["matrix"], field + ".matrix");
    if (e.size() != 4) fail(node["matrix"], field + ".matrix", "expected four entries [a, b, c, d]");
    return GeneratorSpec::explicit_matrix(Matrix2(e[0], e[1], e[2], e[3]));
  }
  if (!node["family"]) fail(node, field, "needs 'family' and 'param', 'matrix' or 'product'");
  if (!node["param"]) fail(node, field + ".param", "missing");
  const Family family = parse_family(node["family"], field + ".family");
  const double param = to_angle(node["param"], field + ".param");
  GeneratorSpec spec{family, param, std::nullopt, {}};
  if (family == Family::D && param == 0.0) fail(node["param"], field + ".param", "D needs a non-zero parameter");
  return spec;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void emit_generator(std::ostream& os, const GeneratorSpec& g) {
  switch (g.family) {
    case Family::S:
    case Family::D:
    case Family::R:
      os << "{family: " << family_name(g.family) << ", param: " << fmt(g.param) << "}";
      return;
    case Family::Explicit: {
      const Matrix2 m = g.matrix.value_or(Matrix2::identity());
      os << "{matrix: [" << fmt(m.a()) << ", " << fmt(m.b()) << ", " << fmt(m.c()) << ", " << fmt(m.d()) << "]}";
      return;
    }
    case Family::Product:
      os << "{product: [";
      for (std::size_t i = 0; i < g.factors.size(); ++i) {
        if (i) os << ", ";
        emit_generator(os, g.factors[i]);
      }
      os << "]}";
      return;
  }
}

void emit_list(std::ostream& os, const std::vector<double>& v) {
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << fmt(v[i]);
  os << "]";
}

}  // namespace

double parse_angle_expression(const std::string& text) {
  static const std::regex pattern(
      R"(^\s*([+-])?\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(\*?\s*pi)?\s*(?:/\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern) || (!m[2].matched && !m[3].matched)) {
    throw Error(ErrorCode::ConfigError, "cannot read '" + text + "' as a number or pi expression");
  }
  if (m[3].matched && m[3].str().front() == '*' && !m[2].matched) {
    throw Error(ErrorCode::ConfigError, "cannot read '" + text + "' as a number or pi expression");
  }
  double value = m[2].matched ? std::stod(m[2].str()) : 1.0;
  if (m[3].matched) value *= kPi;
  if (m[4].matched) {
    const double denom = std::stod(m[4].str());
    if (denom == 0.0) throw Error(ErrorCode::ConfigError, "division by zero in '" + text + "'");
    value /= denom;
  }
  return m[1].matched && m[1].str() == "-" ? -value : value;
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    std::ostringstream os;
    os << "line " << e.mark.line + 1 << ": " << e.msg;
    throw Error(ErrorCode::ConfigError, os.str());
  }
  if (!root.IsMap()) throw Error(ErrorCode::ConfigError, "config must be a YAML mapping");
  require_keys(root, "",
               {"generators", "probs", "iterate_n", "alpha", "mesh_N", "mesh_points", "alpha_grid", "n_max",
                "word_cap", "seed_grid", "kappa_grid", "mc"});

  RunConfig c;
  const YAML::Node gens = root["generators"];
  if (!gens) throw Error(ErrorCode::ConfigError, "field 'generators': missing");
  if (!gens.IsSequence() || gens.size() == 0) fail(gens, "generators", "expected a non-empty list");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    c.generators.push_back(parse_generator(gens[i], "generators[" + std::to_string(i) + "]"));
  }

  if (const YAML::Node n = root["probs"]) {
    auto probs = to_list(n, "probs");
    if (probs.size() != c.generators.size()) {
      fail(n, "probs", "has " + std::to_string(probs.size()) + " entries for " +
                           std::to_string(c.generators.size()) + " generators");
    }
    for (double p : probs) {
      if (!(p > 0.0)) fail(n, "probs", "entries must be positive");
    }
    const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(sum - 1.0) > kProbSumTol) fail(n, "probs", "sum to " + fmt(sum) + ", expected 1");
    c.probs = std::move(probs);
  }
  if (const YAML::Node n = root["iterate_n"]; n && !is_auto(n)) {
    c.iterate_n = static_cast<int>(to_integer(n, "iterate_n", 1));
  }
  if (const YAML::Node n = root["alpha"]; n && !is_auto(n)) {
    const double a = to_double(n, "alpha");
    if (!(a > 0.0 && a < 1.0)) fail(n, "alpha", "must lie in (0, 1)");
    c.alpha = a;
  }
  if (const YAML::Node n = root["mesh_N"]) c.mesh_N = static_cast<std::size_t>(to_integer(n, "mesh_N", 2));
  if (const YAML::Node n = root["mesh_points"]) {
    std::vector<double> pts;
    for (std::size_t i = 0; i < n.size(); ++i) pts.push_back(to_angle(n[i], "mesh_points"));
    if (!n.IsSequence() || pts.size() < 2) fail(n, "mesh_points", "expected a list of at least two angles");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!(pts[i] >= 0.0 && pts[i] < kPi) || (i && !(pts[i] > pts[i - 1]))) {
        fail(n, "mesh_points", "angles must be strictly increasing in [0, pi)");
      }
    }
    c.mesh_points = std::move(pts);
    c.mesh_N = c.mesh_points.size();
  }
  if (const YAML::Node n = root["alpha_grid"]) {
    auto grid = to_list(n, "alpha_grid");
    if (grid.empty()) fail(n, "alpha_grid", "must not be empty");
    for (double a : grid) {
      if (!(a > 0.0 && a < 1.0)) fail(n, "alpha_grid", "entries must lie in (0, 1)");
    }
    c.alpha_grid = std::move(grid);
  }
  if (const YAML::Node n = root["n_max"]) c.n_max = static_cast<int>(to_integer(n, "n_max", 1));
  if (const YAML::Node n = root["word_cap"]) c.word_cap = static_cast<std::uint64_t>(to_integer(n, "word_cap", 1));
  if (const YAML::Node n = root["seed_grid"]) c.seed_grid = static_cast<std::size_t>(to_integer(n, "seed_grid", 2));
  if (const YAML::Node n = root["kappa_grid"]) {
    c.kappa_grid = static_cast<std::size_t>(to_integer(n, "kappa_grid", 16));
  }
  if (const YAML::Node n = root["mc"]) {
    require_keys(n, "mc", {"steps", "samples", "seed", "burn_in", "start_theta"});
    McOptions mc;
    if (n["steps"]) mc.steps = static_cast<std::uint64_t>(to_integer(n["steps"], "mc.steps", 1));
    if (n["samples"]) mc.samples = static_cast<std::uint64_t>(to_integer(n["samples"], "mc.samples", 1));
    if (n["seed"]) mc.seed = static_cast<std::uint64_t>(to_integer(n["seed"], "mc.seed", 0));
    if (n["burn_in"]) mc.burn_in = static_cast<std::uint64_t>(to_integer(n["burn_in"], "mc.burn_in", 0));
    if (n["start_theta"]) mc.start_theta = to_angle(n["start_theta"], "mc.start_theta");
    c.mc = mc;
  }

  try {
    (void)build_cocycle(c);
  } catch (const Error& e) {
    fail(gens, "generators", e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "generators:\n";
  for (const auto& g : c.generators) {
    os << "  - ";
    emit_generator(os, g);
    os << "\n";
  }
  if (c.probs) {
    os << "probs: ";
    emit_list(os, *c.probs);
    os << "\n";
  }
  os << "iterate_n: " << (c.iterate_n ? std::to_string(*c.iterate_n) : "auto") << "\n";
  os << "alpha: " << (c.alpha ? fmt(*c.alpha) : "auto") << "\n";
  os << "mesh_N: " << c.mesh_N << "\n";
  if (!c.mesh_points.empty()) {
    os << "mesh_points: ";
    emit_list(os, c.mesh_points);
    os << "\n";
  }
  os << "alpha_grid: ";
  emit_list(os, c.alpha_grid);
  os << "\n";
  os << "n_max: " << c.n_max << "\n";
  os << "word_cap: " << c.word_cap << "\n";
  os << "seed_grid: " << c.seed_grid << "\n";
  os << "kappa_grid: " << c.kappa_grid << "\n";
  if (c.mc) {
    os << "mc:\n"
       << "  steps: " << c.mc->steps << "\n"
       << "  samples: " << c.mc->samples << "\n"
       << "  seed: " << c.mc->seed << "\n"
       << "  burn_in: " << c.mc->burn_in << "\n"
       << "  start_theta: " << fmt(c.mc->start_theta) << "\n";
  }
  return os.str();
}

Cocycle build_cocycle(const RunConfig& config) {
  std::vector<Matrix2> mats;
  mats.reserve(config.generators.size());
  for (const auto& g : config.generators) mats.push_back(make_generator(g));
  if (config.probs) return Cocycle(std::move(mats), *config.probs);
  return Cocycle::uniform(std::move(mats));
}

EstimateParams estimate_params(const RunConfig& config) {
  EstimateParams p;
  p.alpha = config.alpha;
  p.n = config.iterate_n;
  p.mesh_size = config.mesh_N;
  p.mesh_points = config.mesh_points;
  p.alpha_grid = config.alpha_grid;
  p.n_max = config.n_max;
  p.word_cap = config.word_cap;
  p.kappa.grid_size = config.kappa_grid;
  p.holder.seed_grid = config.seed_grid;
  p.mc = config.mc;
  return p;
}

}  // namespace lyapdisc::cli
