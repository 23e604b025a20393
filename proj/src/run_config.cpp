// SPDX-License-Identifier: Apache-2.0
#include "tentflow/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tentflow/heat_ops.hpp"
#include "tentflow/verify_harness.hpp"

namespace tentflow {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

const std::vector<std::string>& verify_ids() {
  static const std::vector<std::string> ids{"lemma_timederiv", "maxreg",     "leray",         "gradient_product",
                                            "key_inequalities", "bilinear", "embeddings",    "mollification",
                                            "offdiagonal",      "scaling",  "all"};
  return ids;
}

bool contains(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

// Object reader that records consumed keys and rejects the rest.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  void read(const char* key, int& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) fail(at(key), "expected an integer");
      const auto x = v->get<long long>();
      if (x < INT32_MIN || x > INT32_MAX) fail(at(key), "integer out of range");
      out = static_cast<int>(x);
    }
  }
  void read(const char* key, std::uint64_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) fail(at(key), "expected a nonnegative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void read(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) fail(at(key), "expected a number");
      out = v->get<double>();
    }
  }
  void read(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) fail(at(key), "expected a string");
      out = v->get<std::string>();
    }
  }
  template <class T>
  void read(const char* key, std::vector<T>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) fail(at(key), "expected an array");
      std::vector<T> tmp;
      for (std::size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        const std::string p = at(key) + "[" + std::to_string(i) + "]";
        if constexpr (std::is_same_v<T, int>) {
          if (!e.is_number_integer()) fail(p, "expected an integer");
        } else if constexpr (std::is_same_v<T, double>) {
          if (!e.is_number()) fail(p, "expected a number");
        } else {
          if (!e.is_string()) fail(p, "expected a string");
        }
        tmp.push_back(e.get<T>());
      }
      out = std::move(tmp);
    }
  }
  template <class Fn>
  void section(const char* key, Fn&& fn) {
    if (const json* v = take(key)) {
      Section s(*v, at(key));
      fn(s);
      s.finish();
    }
  }
  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) fail(at(k.c_str()), "unknown key");
  }
  std::string at(const char* key) const { return path_ + "." + key; }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Command command_from(const std::string& s, const std::string& path) {
  for (Command c : {Command::norm, Command::verify, Command::solve, Command::sweep})
    if (to_string(c) == s) return c;
  fail(path, "unknown command '" + s + "'");
}

}  // namespace

std::string to_string(Command command) {
  switch (command) {
    case Command::norm: return "norm";
    case Command::verify: return "verify";
    case Command::solve: return "solve";
    case Command::sweep: return "sweep";
  }
  return "?";
}

void RunConfig::validate() const {
  if (grid.dim != 2 && grid.dim != 3) fail("config.grid.dim", "must be 2 or 3");
  if (!(grid.L > 0.0)) fail("config.grid.L", "must be positive");
  if (!power_of_two(grid.n) || grid.n < 8) fail("config.grid.n", "must be a power of two >= 8");
  if (balls.center_stride < 0) fail("config.balls.center_stride", "must be >= 0");
  if (balls.j_max < 2 || balls.j_max > 12) fail("config.balls.j_max", "must lie in [2, 12]");
  if (time.time_nodes < 0) fail("config.time.time_nodes", "must be >= 0");
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    fail("config.solver", e.what());
  }
  if (ensemble.size < 1) fail("config.ensemble.size", "must be >= 1");
  if (!(ensemble.roughness > 0.0 && ensemble.roughness < 2.0)) fail("config.ensemble.roughness", "must lie in (0, 2)");
  if (norm.family != "U" && norm.family != "BMO" && norm.family != "V") fail("config.norm.family", "must be U, BMO or V");
  if (norm.family == "U" && !(norm.param > -1.0 && norm.param <= 1.0)) fail("config.norm.param", "U needs alpha in (-1, 1]");
  if (norm.family == "V" && !(norm.param > 0.0 && norm.param < 1.0)) fail("config.norm.param", "V needs alpha in (0, 1)");
  if (!contains(preset_names(), norm.preset)) fail("config.norm.preset", "unknown preset '" + norm.preset + "'");
  if (!contains(verify_ids(), verify.id)) fail("config.verify.id", "unknown inequality id '" + verify.id + "'");
  if (!(verify.alpha > 0.0 && verify.alpha < 1.0)) fail("config.verify.alpha", "must lie in (0, 1)");
  if (verify.k_max < 0) fail("config.verify.k_max", "must be >= 0");
  if (!power_of_two(verify.offdiagonal_n) || verify.offdiagonal_n < 256)
    fail("config.verify.offdiagonal_n", "must be a power of two >= 256");
  if (!power_of_two(verify.scaling_n) || verify.scaling_n < 64) fail("config.verify.scaling_n", "must be a power of two >= 64");
  if (command == Command::verify && grid.n < 64) fail("config.grid.n", "campaigns need n >= 64");
  if (!contains(preset_names(), solve.preset)) fail("config.solve.preset", "unknown preset '" + solve.preset + "'");
  if (!(solve.rho_dev >= 0.0 && solve.rho_dev <= 0.5)) fail("config.solve.rho_dev", "must lie in [0, 0.5]");
  if (sweep.alphas.empty()) fail("config.sweep.alphas", "must not be empty");
  if (sweep.eps0s.empty()) fail("config.sweep.eps0s", "must not be empty");
  if (sweep.ns.empty()) fail("config.sweep.ns", "must not be empty");
  for (std::size_t i = 0; i < sweep.alphas.size(); ++i)
    if (!(sweep.alphas[i] > 0.0 && sweep.alphas[i] < 1.0))
      fail("config.sweep.alphas[" + std::to_string(i) + "]", "must lie in (0, 1)");
  for (std::size_t i = 0; i < sweep.eps0s.size(); ++i)
    if (!(sweep.eps0s[i] > 0.0)) fail("config.sweep.eps0s[" + std::to_string(i) + "]", "must be positive");
  for (std::size_t i = 0; i < sweep.ns.size(); ++i)
    if (!power_of_two(sweep.ns[i]) || sweep.ns[i] < 8)
      fail("config.sweep.ns[" + std::to_string(i) + "]", "must be a power of two >= 8");
  const std::size_t max_inputs = command == Command::solve ? 2 : command == Command::norm ? 1 : 0;
  if (inputs.size() > max_inputs)
    fail("config.inputs", to_string(command) + " accepts at most " + std::to_string(max_inputs) + " input file(s)");
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (!std::filesystem::is_regular_file(inputs[i]))
      fail("config.inputs[" + std::to_string(i) + "]", "no such file '" + inputs[i] + "'");
  if (output_dir.empty()) fail("config.output_dir", "must not be empty");
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  RunConfig c;
  Section root(j, "config");
  std::string command = to_string(c.command);
  root.read("command", command);
  c.command = command_from(command, "config.command");
  root.read("inputs", c.inputs);
  root.read("output_dir", c.output_dir);
  root.section("grid", [&](Section& s) {
    s.read("dim", c.grid.dim);
    s.read("L", c.grid.L);
    s.read("n", c.grid.n);
  });
  root.section("balls", [&](Section& s) {
    s.read("center_stride", c.balls.center_stride);
    s.read("j_max", c.balls.j_max);
  });
  root.section("time", [&](Section& s) { s.read("time_nodes", c.time.time_nodes); });
  root.section("solver", [&](Section& s) {
    s.read("dim", c.solver.dim);
    s.read("L", c.solver.L);
    s.read("N", c.solver.N);
    s.read("alpha", c.solver.alpha);
    s.read("eps0", c.solver.eps0);
    s.read("t_final", c.solver.t_final);
    s.read("time_nodes", c.solver.time_nodes);
    s.read("picard_max", c.solver.picard_max);
    s.read("picard_tol", c.solver.picard_tol);
    s.read("dealias_fraction", c.solver.dealias_fraction);
    s.read("mollify_k", c.solver.mollify_k);
    s.read("t_min_factor", c.solver.t_min_factor);
  });
  root.section("ensemble", [&](Section& s) {
    s.read("seed", c.ensemble.seed);
    s.read("size", c.ensemble.size);
    s.read("roughness", c.ensemble.roughness);
  });
  root.section("norm", [&](Section& s) {
    s.read("family", c.norm.family);
    s.read("param", c.norm.param);
    s.read("preset", c.norm.preset);
  });
  root.section("verify", [&](Section& s) {
    s.read("id", c.verify.id);
    s.read("alpha", c.verify.alpha);
    s.read("k_max", c.verify.k_max);
    s.read("offdiagonal_n", c.verify.offdiagonal_n);
    s.read("scaling_n", c.verify.scaling_n);
  });
  root.section("solve", [&](Section& s) {
    s.read("preset", c.solve.preset);
    s.read("rho_dev", c.solve.rho_dev);
  });
  root.section("sweep", [&](Section& s) {
    s.read("alphas", c.sweep.alphas);
    s.read("eps0s", c.sweep.eps0s);
    s.read("ns", c.sweep.ns);
  });
  root.finish();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

std::string to_json(const RunConfig& c) {
  const SolverConfig& s = c.solver;
  const json j{
      {"command", to_string(c.command)},
      {"inputs", c.inputs},
      {"output_dir", c.output_dir},
      {"grid", {{"dim", c.grid.dim}, {"L", c.grid.L}, {"n", c.grid.n}}},
      {"balls", {{"center_stride", c.balls.center_stride}, {"j_max", c.balls.j_max}}},
      {"time", {{"time_nodes", c.time.time_nodes}}},
      {"solver",
       {{"dim", s.dim}, {"L", s.L}, {"N", s.N}, {"alpha", s.alpha}, {"eps0", s.eps0}, {"t_final", s.t_final},
        {"time_nodes", s.time_nodes}, {"picard_max", s.picard_max}, {"picard_tol", s.picard_tol},
        {"dealias_fraction", s.dealias_fraction}, {"mollify_k", s.mollify_k}, {"t_min_factor", s.t_min_factor}}},
      {"ensemble", {{"seed", c.ensemble.seed}, {"size", c.ensemble.size}, {"roughness", c.ensemble.roughness}}},
      {"norm", {{"family", c.norm.family}, {"param", c.norm.param}, {"preset", c.norm.preset}}},
      {"verify",
       {{"id", c.verify.id}, {"alpha", c.verify.alpha}, {"k_max", c.verify.k_max},
        {"offdiagonal_n", c.verify.offdiagonal_n}, {"scaling_n", c.verify.scaling_n}}},
      {"solve", {{"preset", c.solve.preset}, {"rho_dev", c.solve.rho_dev}}},
      {"sweep", {{"alphas", c.sweep.alphas}, {"eps0s", c.sweep.eps0s}, {"ns", c.sweep.ns}}},
  };
  return j.dump(2) + "\n";
}

ScalarField preset_scalar(const std::string& name, const PeriodicGrid& g, std::uint64_t seed) {
  const double L = g.side_length();
  const double k = 2.0 * std::numbers::pi / L;
  if (name == "zero") return ScalarField::zeros(g);
  if (name == "single-mode") return ScalarField::sample(g, [&](const Point& x) { return std::cos(k * x[0]); });
  if (name == "taylor_green")
    return ScalarField::sample(g, [&](const Point& x) { return std::sin(k * x[0]) * std::sin(k * x[1]); });
  if (name == "bump") {
    const double s = L / 32.0;
    return ScalarField::sample(g, [&](const Point& x) {
      double r2 = 0.0;
      for (int a = 0; a < g.dim(); ++a) r2 += (x[a] - 0.5 * L) * (x[a] - 0.5 * L);
      return std::exp(-r2 / (2.0 * s * s));
    });
  }
  if (name == "rough") {
    Ensemble e;
    e.seed = seed;
    e.kind = EnsembleKind::slobodeckij_rough;
    e.size = 1;
    return e.sample(g, 0)[0];
  }
  throw ConfigError("preset: unknown name '" + name + "'");
}

VectorField preset_velocity(const std::string& name, const PeriodicGrid& g, std::uint64_t seed) {
  const double k = 2.0 * std::numbers::pi / g.side_length();
  auto pad = [&](std::vector<ScalarField> c) {
    while (static_cast<int>(c.size()) < g.dim()) c.push_back(ScalarField::zeros(g));
    return VectorField(std::move(c));
  };
  if (name == "zero") return VectorField::zeros(g, g.dim());
  if (name == "single-mode") return pad({ScalarField::sample(g, [&](const Point& x) { return std::sin(k * x[1]); })});
  if (name == "taylor_green")
    return pad({ScalarField::sample(g, [&](const Point& x) { return std::sin(k * x[0]) * std::cos(k * x[1]); }),
                ScalarField::sample(g, [&](const Point& x) { return -std::cos(k * x[0]) * std::sin(k * x[1]); })});
  // (d_y psi, -d_x psi, 0) is divergence free in 2D and 3D.
  const ScalarField psi = preset_scalar(name, g, seed);
  return pad({partial_derivative(psi, 1), -1.0 * partial_derivative(psi, 0)});
}

ScalarField preset_density(const PeriodicGrid& g, double rho_dev) {
  const double k = 2.0 * std::numbers::pi / g.side_length();
  return ScalarField::sample(g, [&](const Point& x) { return 1.0 + rho_dev * std::sin(k * x[0]) * std::cos(k * x[1]); });
}

}  // namespace tentflow
