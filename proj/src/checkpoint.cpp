// SPDX-License-Identifier: Apache-2.0
#include "tentflow/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace tentflow {
namespace {

constexpr std::array<char, 8> kMagic{'T', 'E', 'N', 'T', 'F', 'L', 'W', '1'};

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("checkpoint: cannot open '" + path.string() + "' for writing");
  }
  void bytes(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
  template <class U>
  void le(U v) {
    std::array<unsigned char, sizeof(U)> b{};
    for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b.data(), b.size());
  }
  void u32(std::uint32_t v) { le(v); }
  void u64(std::uint64_t v) { le(v); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
  void finish(const std::filesystem::path& path) {
    out_.flush();
    if (!out_) throw std::runtime_error("checkpoint: write to '" + path.string() + "' failed");
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary), path_(path.string()) {
    if (!in_) throw std::runtime_error("checkpoint: cannot open '" + path_ + "'");
  }
  void bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw std::runtime_error("checkpoint: '" + path_ + "' is truncated");
  }
  template <class U>
  U le() {
    std::array<unsigned char, sizeof(U)> b{};
    bytes(b.data(), b.size());
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(b[i]) << (8 * i);
    return v;
  }
  std::uint32_t u32() { return le<std::uint32_t>(); }
  std::uint64_t u64() { return le<std::uint64_t>(); }
  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }
  const std::string& path() const { return path_; }

 private:
  std::ifstream in_;
  std::string path_;
};

void write_all(const std::filesystem::path& path, const PeriodicGrid& g, const std::vector<VectorField>& slices,
               const std::vector<double>& times, const std::vector<double>& weights, const std::vector<double>& edges,
               const std::string& config_json) {
  const int comps = slices.front().component_count();
  Writer w(path);
  w.bytes(kMagic.data(), kMagic.size());
  w.u32(static_cast<std::uint32_t>(g.dim()));
  w.u32(static_cast<std::uint32_t>(g.points_per_axis()));
  w.u32(static_cast<std::uint32_t>(slices.size()));
  w.u32(static_cast<std::uint32_t>(comps));
  w.f64(g.side_length());
  w.u64(config_json.size());
  w.bytes(config_json.data(), config_json.size());
  for (double t : times) w.f64(t);
  for (double t : weights) w.f64(t);
  for (double t : edges) w.f64(t);
  for (int c = 0; c < comps; ++c)
    for (const auto& s : slices)
      for (double v : s[c].values()) w.f64(v);
  w.finish(path);
}

}  // namespace

SpaceTimeField Checkpoint::trajectory() const {
  return SpaceTimeField(TimeGrid(times, weights, edges), slices);
}

void write_checkpoint(const std::filesystem::path& path, const SpaceTimeField& traj, const std::string& config_json) {
  const TimeGrid& tg = traj.time_grid();
  write_all(path, traj.grid(), traj.slices(), {tg.nodes().begin(), tg.nodes().end()},
            {tg.weights().begin(), tg.weights().end()}, {tg.edges().begin(), tg.edges().end()}, config_json);
}

void write_field(const std::filesystem::path& path, const VectorField& field, const std::string& config_json) {
  write_all(path, field.grid(), {field}, {0.0}, {0.0}, {0.0, 0.0}, config_json);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  Reader r(path);
  std::array<char, 8> magic{};
  r.bytes(magic.data(), magic.size());
  if (magic != kMagic) throw std::runtime_error("checkpoint: '" + r.path() + "' is not a tentflow field file");
  Checkpoint cp;
  cp.dim = static_cast<int>(r.u32());
  cp.n = static_cast<int>(r.u32());
  const std::uint32_t nodes = r.u32();
  const std::uint32_t comps = r.u32();
  cp.L = r.f64();
  if (nodes == 0 || comps == 0 || comps > 3) throw std::runtime_error("checkpoint: '" + r.path() + "' has a bad header");
  const PeriodicGrid g(cp.dim, cp.L, cp.n);
  const std::uint64_t len = r.u64();
  if (len > (1u << 24)) throw std::runtime_error("checkpoint: '" + r.path() + "' has an oversized config block");
  cp.config_json.resize(len);
  r.bytes(cp.config_json.data(), len);
  auto read_vec = [&](std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = r.f64();
    return v;
  };
  cp.times = read_vec(nodes);
  cp.weights = read_vec(nodes);
  cp.edges = read_vec(nodes + 1);
  std::vector<std::vector<ScalarField>> parts(nodes);
  for (std::uint32_t c = 0; c < comps; ++c)
    for (std::uint32_t m = 0; m < nodes; ++m) parts[m].emplace_back(g, read_vec(g.point_count()));
  if (!r.at_end()) throw std::runtime_error("checkpoint: '" + r.path() + "' has trailing bytes");
  for (auto& p : parts) cp.slices.emplace_back(std::move(p));
  return cp;
}

VectorField read_field(const std::filesystem::path& path) { return read_checkpoint(path).slices.front(); }

void append_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRow>& rows,
                            const TimeGrid& time_grid) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("diagnostics: cannot open '" + path.string() + "'");
  if (fresh) out << "iter,t,E_alpha_total,rho_dev,energy_lhs,energy_rhs,div_max,increment\n";
  out << std::setprecision(17);
  for (const auto& row : rows)
    for (std::size_t m = 0; m < time_grid.size(); ++m) {
      auto at = [&](const std::vector<double>& v) { return m < v.size() ? v[m] : 0.0; };
      out << row.iter << ',' << time_grid.node(m) << ',' << row.e_alpha.total << ',' << at(row.rho_dev) << ','
          << at(row.energy_lhs) << ',' << row.energy_rhs << ',' << at(row.div_max) << ',' << row.increment << '\n';
    }
  if (!out) throw std::runtime_error("diagnostics: write to '" + path.string() + "' failed");
}

}  // namespace tentflow
