#include "config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace wsr {

namespace pt = boost::property_tree;
using namespace warmstandby;

namespace {

const std::map<std::string, std::set<std::string>> kAllowedKeys = {
    {"model",
     {"type", "lambda1", "mu1", "lambda2", "lambda2_loaded", "mu2", "initial", "initial_hat"}},
    {"lambda1", {"family", "bounds", "rates", "intercept", "slope", "argument", "clamp",
                 "bin_width", "x_bins", "y_bins", "values"}},
    {"sim", {"horizon", "n_paths", "seed", "time_grid", "grid_points", "hist_bins", "bin_cap",
             "threads", "dump_events"}},
    {"coupling", {"epsilon", "strategy", "n_runs", "failure_channel"}},
    {"bounds", {"grid_points", "grid_lo", "grid_hi"}},
    {"output", {"directory", "formats"}},
};

const std::set<std::string>& allowed(const std::string& section) {
  static const std::set<std::string> intensity_names = {"lambda1", "mu1", "lambda2", "mu2"};
  if (intensity_names.contains(section)) return kAllowedKeys.at("lambda1");
  auto it = kAllowedKeys.find(section);
  if (it == kAllowedKeys.end()) throw ConfigError("unknown section [" + section + "]");
  return it->second;
}

// Thin accessor over one section that reports errors as "[section] key: ...".
class Section {
 public:
  Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

  bool present() const { return tree_ != nullptr; }
  bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

  std::string text(const std::string& key) const {
    if (!has(key)) fail(key, "missing required key");
    return tree_->get<std::string>(key);
  }

  double number(const std::string& key) const { return parse_number(key, text(key)); }
  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string v = text(key);
    std::size_t pos = 0;
    std::uint64_t out = 0;
    try {
      if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
      out = std::stoull(v, &pos);
    } catch (const std::exception&) {
      fail(key, "expected a nonnegative integer, got '" + v + "'");
    }
    if (pos != v.size()) fail(key, "expected a nonnegative integer, got '" + v + "'");
    return out;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = text(key);
    if (v == "true") return true;
    if (v == "false") return false;
    fail(key, "expected true or false, got '" + v + "'");
  }

  std::vector<double> numbers(const std::string& key) const {
    std::istringstream in(text(key));
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_number(key, tok));
    return out;
  }

  std::vector<double> numbers(const std::string& key, std::size_t count) const {
    auto v = numbers(key);
    if (v.size() != count) {
      fail(key, "expected " + std::to_string(count) + " values, got " + std::to_string(v.size()));
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("[" + name_ + "] " + key + ": " + what);
  }

 private:
  double parse_number(const std::string& key, const std::string& v) const {
    std::size_t pos = 0;
    double out = 0.0;
    try {
      out = std::stod(v, &pos);
    } catch (const std::exception&) {
      fail(key, "expected a number, got '" + v + "'");
    }
    if (pos != v.size()) fail(key, "expected a number, got '" + v + "'");
    return out;
  }

  std::string name_;
  const pt::ptree* tree_;
};

Section section(const pt::ptree& root, const std::string& name) {
  auto it = root.find(name);
  return {name, it == root.not_found() ? nullptr : &it->second};
}

FullState parse_state(const Section& s, const std::string& key) {
  const auto v = s.numbers(key, 4);
  auto cond = [&](double f) {
    if (f == 0.0) return Condition::working;
    if (f == 1.0) return Condition::failed;
    s.fail(key, "flags must be 0 (working) or 1 (failed)");
  };
  FullState st{cond(v[0]), v[1], cond(v[2]), v[3]};
  if (!st.valid()) s.fail(key, "elapsed times must be finite and nonnegative");
  return st;
}

std::array<double, 4> per_mode(const Section& s, const std::string& key) {
  const auto v = s.numbers(key);
  if (v.size() == 1) return {v[0], v[0], v[0], v[0]};
  if (v.size() != 4) s.fail(key, "expected 1 or 4 values (modes 00 10 01 11)");
  return {v[0], v[1], v[2], v[3]};
}

std::pair<IntensityFunction, RateBounds> parse_intensity(const Section& s) {
  if (!s.present()) s.fail("family", "section is required for a general model");
  const auto b = s.numbers("bounds", 2);
  const RateBounds bounds{b[0], b[1]};
  const std::string family = s.text("family");
  if (family == "constant") {
    return {ConstantPerMode{per_mode(s, "rates")}, bounds};
  }
  if (family == "clamped_affine") {
    ClampedAffine f;
    f.intercept = per_mode(s, "intercept");
    f.slope = per_mode(s, "slope");
    const std::string arg = s.has("argument") ? s.text("argument") : "x";
    if (arg != "x" && arg != "y") s.fail("argument", "expected x or y");
    f.argument = arg == "x" ? ElapsedArgument::x : ElapsedArgument::y;
    const auto c = s.has("clamp") ? s.numbers("clamp", 2) : b;
    f.lo = c[0];
    f.hi = c[1];
    return {f, bounds};
  }
  if (family == "table") {
    TableLookup f;
    f.bin_width = s.number("bin_width");
    f.x_bins = s.integer("x_bins", 1);
    f.y_bins = s.integer("y_bins", 1);
    f.values = s.numbers("values", 4 * f.x_bins * f.y_bins);
    return {f, bounds};
  }
  s.fail("family", "expected constant, clamped_affine or table, got '" + family + "'");
}

void check_keys(const pt::ptree& root) {
  for (const auto& [name, tree] : root) {
    if (tree.empty() && !tree.data().empty()) {
      throw ConfigError("key '" + name + "' outside any section");
    }
    const auto& keys = allowed(name);
    for (const auto& [key, value] : tree) {
      if (!keys.contains(key)) throw ConfigError("[" + name + "] " + key + ": unknown key");
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree root;
  std::istringstream in(text);
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
  }
  check_keys(root);

  ExperimentConfig cfg;
  try {
    const Section m = section(root, "model");
    if (!m.present()) throw ConfigError("missing section [model]");
    const std::string type = m.has("type") ? m.text("type") : "exponential";
    if (type == "exponential") {
      for (const char* name : {"lambda1", "mu1", "lambda2", "mu2"}) {
        if (section(root, name).present()) {
          throw ConfigError(std::string("section [") + name + "] requires type = general");
        }
      }
      ExpParams p{m.number("lambda1"), m.number("mu1"), m.number("lambda2"),
                  m.number("lambda2_loaded"), m.number("mu2")};
      p.validate();
      cfg.model.params = p;
      cfg.model.model = IntensityModel::from_exp_params(p);
    } else if (type == "general") {
      for (const char* key : {"lambda1", "mu1", "lambda2", "lambda2_loaded", "mu2"}) {
        if (m.has(key)) m.fail(key, "rates belong in their own section for type = general");
      }
      auto [l1, bl1] = parse_intensity(section(root, "lambda1"));
      auto [r1, br1] = parse_intensity(section(root, "mu1"));
      auto [l2, bl2] = parse_intensity(section(root, "lambda2"));
      auto [r2, br2] = parse_intensity(section(root, "mu2"));
      cfg.model.exponential = false;
      cfg.model.model = IntensityModel(std::move(l1), std::move(r1), std::move(l2), std::move(r2),
                                       IntensityBounds{bl1, br1, bl2, br2});
    } else {
      m.fail("type", "expected exponential or general, got '" + type + "'");
    }
    if (m.has("initial")) cfg.model.initial = parse_state(m, "initial");
    if (m.has("initial_hat")) cfg.model.initial_hat = parse_state(m, "initial_hat");

    const Section s = section(root, "sim");
    cfg.sim.horizon = s.number("horizon", 20.0);
    cfg.sim.n_paths = s.integer("n_paths", 10000);
    cfg.sim.master_seed = s.integer("seed", 1);
    cfg.sim.hist_bins = s.integer("hist_bins", 16);
    cfg.sim.bin_cap = s.number("bin_cap", 0.0);
    cfg.sim.threads = static_cast<unsigned>(s.integer("threads", 1));
    cfg.dump_events = s.boolean("dump_events", false);
    if (s.has("time_grid") && s.has("grid_points")) {
      s.fail("time_grid", "give either time_grid or grid_points, not both");
    }
    if (s.has("time_grid")) {
      cfg.sim.time_grid = s.numbers("time_grid");
    } else {
      const std::size_t n = s.integer("grid_points", 21);
      if (n < 2) s.fail("grid_points", "need at least 2 points");
      for (std::size_t k = 0; k < n; ++k) {
        cfg.sim.time_grid.push_back(cfg.sim.horizon * static_cast<double>(k) /
                                    static_cast<double>(n - 1));
      }
    }
    cfg.sim.validate();

    const Section c = section(root, "coupling");
    if (c.has("epsilon") && c.text("epsilon") != "auto") {
      cfg.coupling.epsilon = c.number("epsilon");
      if (!(*cfg.coupling.epsilon > 0.0)) c.fail("epsilon", "must be positive or auto");
    }
    if (c.has("strategy")) {
      try {
        cfg.coupling.strategy = parse_strategy(c.text("strategy"));
      } catch (const DomainError& e) {
        c.fail("strategy", e.what());
      }
    }
    cfg.coupling.n_runs = c.integer("n_runs", 1000);
    if (cfg.coupling.n_runs == 0) c.fail("n_runs", "must be positive");
    cfg.coupling.failure_channel = c.boolean("failure_channel", false);

    const Section b = section(root, "bounds");
    cfg.bounds.grid_points = b.integer("grid_points", 64);
    cfg.bounds.grid_lo = b.number("grid_lo", 1e-3);
    cfg.bounds.grid_hi = b.number("grid_hi", 10.0);
    if (cfg.bounds.grid_points == 0) b.fail("grid_points", "must be positive");
    if (!(cfg.bounds.grid_lo > 0.0) || !(cfg.bounds.grid_hi >= cfg.bounds.grid_lo)) {
      b.fail("grid_lo", "need 0 < grid_lo <= grid_hi");
    }

    const Section o = section(root, "output");
    if (o.has("directory")) cfg.output.directory = o.text("directory");
    if (o.has("formats")) {
      std::istringstream fmt(o.text("formats"));
      cfg.output.csv = cfg.output.text = false;
      std::string tok;
      while (fmt >> tok) {
        if (tok == "csv") {
          cfg.output.csv = true;
        } else if (tok == "text") {
          cfg.output.text = true;
        } else {
          o.fail("formats", "unknown format '" + tok + "' (expected csv, text)");
        }
      }
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace wsr
