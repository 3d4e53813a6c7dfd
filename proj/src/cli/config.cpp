#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"
#include "toda/cli.hpp"
#include "toda/error.hpp"
#include "toda/response.hpp"

namespace toda::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InvalidArgument("config: " + path + " " + what);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(path, "must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) fail(path.empty() ? key : path + "." + key, "is not a recognized field");
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double number(const json& obj, const std::string& path, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number()) fail(join(path, key), "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(join(path, key), "must be finite");
  return x;
}

std::size_t count(const json& obj, const std::string& path, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(join(path, key), "must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> numbers(const json& obj, const std::string& path, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_array()) fail(join(path, key), "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(join(path, key) + "[" + std::to_string(i) + "]", "must be a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::string text(const json& obj, const std::string& path, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_string()) fail(join(path, key), "must be a string");
  return v.get<std::string>();
}

// Re-throws library validation errors with the config path prefixed.
template <class F>
auto with_path(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const InvalidArgument& e) {
    std::string msg = e.what();
    if (const auto colon = msg.find(": "); colon != std::string::npos) msg = msg.substr(colon + 2);
    throw InvalidArgument("config: " + path + "." + msg);
  }
}

InitialSpec parse_initial(const json& j) {
  const std::string path = "initial";
  only_keys(j, path, {"diag", "offdiag", "nodes", "weights", "generator", "alpha", "beta",
                      "gamma", "size", "upper_bound", "random"});
  InitialSpec spec;
  int sources = 0;
  if (j.contains("diag") || j.contains("offdiag")) {
    ++sources;
    if (!j.contains("diag")) fail(path + ".diag", "is required with offdiag");
    const auto diag = numbers(j, path, "diag");
    const auto offdiag = j.contains("offdiag") ? numbers(j, path, "offdiag") : std::vector<double>{};
    spec.matrix = with_path(path, [&] { return JacobiMatrix(diag, offdiag); });
  }
  if (j.contains("nodes") || j.contains("weights")) {
    ++sources;
    if (!j.contains("nodes") || !j.contains("weights")) {
      fail(path, "needs both nodes and weights for an explicit measure");
    }
    const auto nodes = numbers(j, path, "nodes");
    const auto weights = numbers(j, path, "weights");
    spec.measure = with_path(path, [&] { return DiscreteMeasure(nodes, weights); });
  }
  if (j.contains("generator")) {
    ++sources;
    GeneratorSpec g;
    g.name = text(j, path, "generator");
    if (g.name != "linear_b" && g.name != "constant" && g.name != "decay") {
      fail(path + ".generator", "must be one of linear_b, constant, decay (got '" + g.name + "')");
    }
    if (j.contains("alpha")) g.alpha = number(j, path, "alpha");
    if (j.contains("beta")) g.beta = number(j, path, "beta");
    if (j.contains("gamma")) g.gamma = number(j, path, "gamma");
    if (!(g.alpha > 0.0)) fail(path + ".alpha", "must be strictly positive (off-diagonal coupling)");
    if (j.contains("size")) {
      g.size = count(j, path, "size");
      if (*g.size == 0) fail(path + ".size", "must be >= 1");
    }
    if (j.contains("upper_bound")) g.upper_bound = number(j, path, "upper_bound");
    spec.generator = g;
  }
  if (j.contains("random")) {
    ++sources;
    only_keys(j.at("random"), path + ".random", {"size"});
    spec.random_size = count(j.at("random"), path + ".random", "size");
    if (*spec.random_size == 0) fail(path + ".random.size", "must be >= 1");
  }
  if (sources != 1) {
    fail(path, "must give exactly one of diag/offdiag, nodes/weights, generator, random");
  }
  return spec;
}

} // namespace

Mode parse_mode(const std::string& name) {
  if (name == "finite") return Mode::finite;
  if (name == "semi_infinite") return Mode::semi_infinite;
  if (name == "verify") return Mode::verify;
  if (name == "response") return Mode::response;
  throw InvalidArgument("config: mode must be one of finite, semi_infinite, verify, response (got '" +
                        name + "')");
}

std::string to_string(Mode mode) {
  switch (mode) {
  case Mode::finite:
    return "finite";
  case Mode::semi_infinite:
    return "semi_infinite";
  case Mode::verify:
    return "verify";
  case Mode::response:
    return "response";
  }
  return "unknown";
}

RunConfig parse_config(const std::string& source, std::optional<Mode> mode_override) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config: malformed JSON: ") + e.what());
  }
  only_keys(doc, "", {"mode", "initial", "time", "options", "output", "seed"});

  RunConfig config;
  if (mode_override) {
    config.mode = *mode_override;
  } else {
    if (!doc.contains("mode")) fail("mode", "is required");
    config.mode = parse_mode(text(doc, "", "mode"));
  }
  if (!doc.contains("initial")) fail("initial", "is required");
  config.initial = parse_initial(doc.at("initial"));

  if (!doc.contains("time")) fail("time", "is required");
  const json& time = doc.at("time");
  only_keys(time, "time", {"t_start", "t_end", "steps"});
  if (time.contains("t_start") && number(time, "time", "t_start") != 0.0) {
    fail("time.t_start", "must be 0");
  }
  config.t_end = number(time, "time", "t_end");
  config.steps = count(time, "time", "steps");
  if (!(config.t_end > 0.0)) fail("time.t_end", "must be > 0");
  if (config.steps < 1) fail("time.steps", "must be >= 1");

  if (doc.contains("options")) {
    const json& opt = doc.at("options");
    only_keys(opt, "options", {"dt", "tol", "n_max", "window", "moments"});
    if (opt.contains("dt")) config.dt = number(opt, "options", "dt");
    if (opt.contains("tol")) config.tol = number(opt, "options", "tol");
    if (opt.contains("n_max")) config.n_max = count(opt, "options", "n_max");
    if (opt.contains("window")) config.window = count(opt, "options", "window");
    if (opt.contains("moments")) config.moments = count(opt, "options", "moments");
    if (!(config.dt > 0.0)) fail("options.dt", "must be > 0");
    if (!(config.tol > 0.0)) fail("options.tol", "must be > 0");
    if (config.window < 1) fail("options.window", "must be >= 1");
    if (config.moments < 1 || config.moments > kMaxResponseLength) {
      fail("options.moments", "must be in [1, 30]");
    }
    if (config.n_max < 2 * config.window + 2) fail("options.n_max", "must be >= 2 * window + 2");
  }

  if (doc.contains("output")) {
    const json& out = doc.at("output");
    only_keys(out, "output", {"trajectory", "oracle", "report", "moments", "response"});
    if (out.contains("trajectory")) config.trajectory_file = text(out, "output", "trajectory");
    if (out.contains("oracle")) config.oracle_file = text(out, "output", "oracle");
    if (out.contains("report")) config.report_file = text(out, "output", "report");
    if (out.contains("moments")) config.moments_file = text(out, "output", "moments");
    if (out.contains("response")) config.response_file = text(out, "output", "response");
  }

  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      fail("seed", "must be a non-negative integer");
    }
    config.seed = s.get<std::uint64_t>();
  }

  const InitialSpec& init = config.initial;
  if (init.measure && config.mode != Mode::response) {
    fail("initial", "nodes/weights are only accepted in response mode");
  }
  if (config.mode == Mode::semi_infinite && (init.random_size || init.measure)) {
    fail("initial", "semi_infinite mode needs a generator or an explicit table");
  }
  if (config.mode != Mode::semi_infinite && init.generator && !init.generator->size) {
    fail("initial.size", "is required for generator data outside semi_infinite mode");
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<Mode> mode_override) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), mode_override);
}

} // namespace toda::cli
