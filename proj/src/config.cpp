#include "risline/config.hpp"

#include "risline/random.hpp"

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace risline {
namespace {

namespace pt = boost::property_tree;

constexpr std::pair<Method, const char*> kMethodNames[] = {
    {Method::FullL2, "FULL_L2"},
    {Method::FullL4, "FULL_L4"},
    {Method::LineL2, "LINE_L2"},
    {Method::LineL4, "LINE_L4"},
    {Method::LineL2StdQuad, "LINE_L2_STDQUAD"},
    {Method::LineL2Exact, "LINE_L2_EXACT"},
    {Method::Continuous, "CONTINUOUS"},
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    boost::algorithm::trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
      value = static_cast<T>(std::stod(text, &used));
    } else if constexpr (std::is_signed_v<T>) {
      value = static_cast<T>(std::stoll(text, &used));
    } else {
      if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
      value = static_cast<T>(std::stoull(text, &used));
    }
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': cannot parse '" + text + "'");
  }
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number<T>(item, key));
  return out;
}

Vec3 parse_vec3(const std::string& text, const std::string& key) {
  const auto v = parse_list<double>(text, key);
  if (v.size() != 3) throw std::invalid_argument("config key '" + key + "' needs x,y,z");
  return Vec3(v[0], v[1], v[2]);
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("config key '" + key + "' expects true/false");
}

std::optional<double> parse_spacing(const std::string& text, const std::string& key) {
  if (text == "half-wavelength") return std::nullopt;
  return parse_number<double>(text, key);
}

/// Section accessor that rejects keys nobody reads.
class Section {
 public:
  Section(const pt::ptree& root, const std::string& name, std::set<std::string> allowed)
      : name_(name) {
    const auto child = root.get_child_optional(pt::ptree::path_type(name, '\0'));
    if (!child) return;
    node_ = &*child;
    for (const auto& [key, value] : *node_) {
      if (!allowed.empty() && !allowed.contains(key)) {
        throw std::invalid_argument("unknown config key [" + name + "] " + key);
      }
    }
  }

  std::optional<std::string> get(const std::string& key) const {
    if (!node_) return std::nullopt;
    const auto it = node_->find(key);
    if (it == node_->not_found()) return std::nullopt;
    return boost::algorithm::trim_copy(it->second.data());
  }

  std::string qualified(const std::string& key) const { return name_ + "." + key; }

  const pt::ptree* node() const { return node_; }

 private:
  std::string name_;
  const pt::ptree* node_ = nullptr;
};

}  // namespace

std::string to_string(Method m) {
  for (const auto& [method, name] : kMethodNames) {
    if (method == m) return name;
  }
  throw std::logic_error("unnamed method");
}

Method parse_method(const std::string& name) {
  for (const auto& [method, label] : kMethodNames) {
    if (name == label) return method;
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

int method_levels(Method m) {
  switch (m) {
    case Method::FullL4:
    case Method::LineL4:
      return 4;
    case Method::Continuous:
      return 0;
    default:
      return 2;
  }
}

SolverSpec ExperimentConfig::solver_for(Method m) const {
  if (const auto it = solvers.find(m); it != solvers.end()) return it->second;
  return SolverSpec::parse("sa");
}

SolverSpec ExperimentConfig::second_step_for(Method m) const {
  if (const auto it = second_step.find(m); it != second_step.end()) return it->second;
  return SolverSpec::parse("alternating:starts=32");
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree root;
  {
    std::istringstream in(text);
    try {
      pt::ini_parser::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
      throw std::invalid_argument(std::string("config: ") + e.what());
    }
  }
  for (const auto& [name, child] : root) {
    static const std::set<std::string> sections{"scene", "bs_array", "ris_array", "sweep",
                                                "solvers", "second_step", "run"};
    if (!sections.contains(name)) throw std::invalid_argument("unknown config section [" + name + "]");
  }

  ExperimentConfig cfg;
  ScenarioConfig& sc = cfg.scene;

  const Section scene(root, "scene", {"frequency_hz", "tx_power_w", "bs_distance_m", "ut_distance_m",
                                      "ut_angle_deg", "bs_position", "ris_center", "ut_position",
                                      "randomize_ut"});
  if (auto v = scene.get("frequency_hz")) sc.frequency_hz = parse_number<double>(*v, scene.qualified("frequency_hz"));
  if (auto v = scene.get("tx_power_w")) sc.tx_power_w = parse_number<double>(*v, scene.qualified("tx_power_w"));
  if (auto v = scene.get("bs_distance_m")) sc.bs_distance_m = parse_number<double>(*v, scene.qualified("bs_distance_m"));
  if (auto v = scene.get("ut_distance_m")) sc.ut_distance_m = parse_number<double>(*v, scene.qualified("ut_distance_m"));
  if (auto v = scene.get("ut_angle_deg")) sc.ut_angle_deg = parse_number<double>(*v, scene.qualified("ut_angle_deg"));
  if (auto v = scene.get("bs_position")) sc.bs_position = parse_vec3(*v, scene.qualified("bs_position"));
  if (auto v = scene.get("ris_center")) sc.ris_center = parse_vec3(*v, scene.qualified("ris_center"));
  if (auto v = scene.get("ut_position")) sc.ut_position = parse_vec3(*v, scene.qualified("ut_position"));
  if (auto v = scene.get("randomize_ut")) cfg.randomize_ut = parse_bool(*v, scene.qualified("randomize_ut"));

  const Section bs(root, "bs_array", {"rows", "cols", "spacing"});
  if (auto v = bs.get("rows")) sc.bs_rows = parse_number<int>(*v, bs.qualified("rows"));
  if (auto v = bs.get("cols")) sc.bs_cols = parse_number<int>(*v, bs.qualified("cols"));
  if (auto v = bs.get("spacing")) sc.bs_spacing_m = parse_spacing(*v, bs.qualified("spacing"));

  const Section ris(root, "ris_array", {"rows", "cols", "spacing"});
  if (auto v = ris.get("rows")) sc.ris_rows = parse_number<int>(*v, ris.qualified("rows"));
  if (auto v = ris.get("cols")) sc.ris_cols = parse_number<int>(*v, ris.qualified("cols"));
  if (auto v = ris.get("spacing")) sc.ris_spacing_m = parse_spacing(*v, ris.qualified("spacing"));

  const Section sweep(root, "sweep", {"sizes", "line_variables", "distances_m", "methods", "seeds"});
  if (auto v = sweep.get("sizes")) cfg.sizes = parse_list<int>(*v, sweep.qualified("sizes"));
  if (auto v = sweep.get("line_variables")) cfg.line_variables = parse_list<int>(*v, sweep.qualified("line_variables"));
  if (auto v = sweep.get("distances_m")) cfg.distances_m = parse_list<double>(*v, sweep.qualified("distances_m"));
  if (auto v = sweep.get("seeds")) cfg.seeds = parse_list<std::uint64_t>(*v, sweep.qualified("seeds"));
  if (auto v = sweep.get("methods")) {
    for (const auto& name : split_list(*v)) cfg.methods.push_back(parse_method(name));
  }

  for (const auto& [section, target] : {std::pair{"solvers", &cfg.solvers}, std::pair{"second_step", &cfg.second_step}}) {
    const Section specs(root, section, {});
    if (!specs.node()) continue;
    for (const auto& [key, value] : *specs.node()) {
      (*target)[parse_method(key)] = SolverSpec::parse(boost::algorithm::trim_copy(value.data()));
    }
  }

  const Section run(root, "run", {"tuning_budget", "exhaustive_cap", "variable_accounting", "threads", "output"});
  if (auto v = run.get("tuning_budget")) cfg.tuning_budget = parse_number<std::size_t>(*v, run.qualified("tuning_budget"));
  if (auto v = run.get("exhaustive_cap")) cfg.exhaustive_cap = parse_number<std::size_t>(*v, run.qualified("exhaustive_cap"));
  if (auto v = run.get("threads")) cfg.threads = parse_number<unsigned>(*v, run.qualified("threads"));
  if (auto v = run.get("output")) cfg.output = *v;
  if (auto v = run.get("variable_accounting")) {
    if (*v == "paper") {
      cfg.variable_accounting = GadgetMode::PaperCount;
    } else if (*v == "rosenberg") {
      cfg.variable_accounting = GadgetMode::Rosenberg;
    } else {
      throw std::invalid_argument("run.variable_accounting must be paper or rosenberg");
    }
  }

  // Fail early on bad scene values.
  build_scene(cfg.scene);
  return cfg;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ScenarioConfig scene_for_seed(const ExperimentConfig& config, std::uint64_t seed) {
  ScenarioConfig sc = config.scene;
  if (!config.randomize_ut || sc.ut_position) return sc;
  auto rng = make_rng(seed, 0x5CE9E);
  std::uniform_real_distribution<double> angle(-60.0, 60.0);
  std::uniform_real_distribution<double> scale(0.5, 1.5);
  sc.ut_angle_deg = angle(rng);
  sc.ut_distance_m = scale(rng) * config.scene.ut_distance_m;
  return sc;
}

}  // namespace risline
