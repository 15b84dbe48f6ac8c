// io.hpp
// JSON records, the binary table cache, and CSV/text dumps.

#pragma once

#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hqaoa/distributions.hpp"
#include "hqaoa/error.hpp"
#include "hqaoa/hash.hpp"
#include "hqaoa/optimizer.hpp"
#include "hqaoa/proxy.hpp"
#include "hqaoa/statevector.hpp"

namespace hqaoa {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// ---- JSON records -------------------------------------------------------

inline Json to_json(const ClassSpec& s) {
  Json j;
  j["class"] = std::string(to_string(s.kind));
  j["n"] = s.n;
  if (s.kind == ClassKind::MaxCutER) j["pe"] = s.edge_probability;
  j["m"] = s.m;
  j["k"] = s.k;
  if (s.kind == ClassKind::MaxCutER) j["margin"] = s.margin;
  j["direction"] = std::string(to_string(s.direction));
  return j;
}

inline ClassSpec class_spec_from_json(const Json& j) {
  try {
    const auto kind = parse_class_kind(j.at("class").get<std::string>());
    const int n = j.at("n").get<int>();
    ClassSpec s;
    switch (kind) {
      case ClassKind::MaxCutER: s = ClassSpec::maxcut_er(n, j.at("pe").get<double>(), j.value("margin", 0.0)); break;
      case ClassKind::MaxE3Lin2: s = ClassSpec::max_e3lin2(n, j.at("m").get<int>()); break;
      case ClassKind::MaxKXor: s = ClassSpec::max_kxor(n, j.at("m").get<int>(), j.at("k").get<int>()); break;
      case ClassKind::RandKSat: s = ClassSpec::rand_ksat(n, j.at("m").get<int>(), j.at("k").get<int>()); break;
      case ClassKind::HammingWeight: s = ClassSpec::hamming_weight(n); break;
    }
    if (j.contains("m")) require(j.at("m").get<int>() == s.m, "class spec: stored m disagrees with the class");
    validate(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("class spec JSON: ") + e.what());
  }
}

inline Json to_json(const ProblemInstance& inst) {
  Json clauses = Json::array();
  for (const auto& c : inst.clauses) {
    Json jc;
    jc["vars"] = c.variables;
    if (inst.spec.kind == ClassKind::RandKSat)
      jc["negations"] = c.negations;
    else
      jc["parity"] = c.parity ? 1 : 0;
    clauses.push_back(std::move(jc));
  }
  Json j;
  j["spec"] = to_json(inst.spec);
  j["n"] = inst.n;
  j["clauses"] = std::move(clauses);
  return j;
}

inline ProblemInstance instance_from_json(const Json& j) {
  try {
    ProblemInstance inst;
    inst.spec = class_spec_from_json(j.at("spec"));
    inst.n = j.at("n").get<int>();
    require(inst.n == inst.spec.n, "instance JSON: n disagrees with spec");
    for (const auto& jc : j.at("clauses")) {
      Clause c;
      c.variables = jc.at("vars").get<std::vector<int>>();
      for (int v : c.variables) require(v >= 0 && v < inst.n, "instance JSON: variable index out of range");
      c.parity = jc.value("parity", 0) != 0;
      c.negations = jc.value("negations", std::uint64_t{0});
      inst.clauses.push_back(std::move(c));
    }
    return inst;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("instance JSON: ") + e.what());
  }
}

inline Json to_json(const Schedule& s) {
  Json j;
  j["gammas"] = s.gammas;
  j["betas"] = s.betas;
  return j;
}

inline Schedule schedule_from_json(const Json& j) {
  try {
    Schedule s{j.at("gammas").get<std::vector<double>>(), j.at("betas").get<std::vector<double>>()};
    validate(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("schedule JSON: ") + e.what());
  }
}

inline Json to_json(const OptimizationResult& r, const ClassSpec& spec) {
  Json j;
  j["class_hash"] = hex64(spec_hash(spec));
  j["class"] = to_json(spec);
  j["p"] = r.schedule.depth();
  j["parameterization"] = std::string(to_string(r.parameterization));
  j["gammas"] = r.schedule.gammas;
  j["betas"] = r.schedule.betas;
  if (r.ramp) {
    j["ramp"] = {{"gamma_start", r.ramp->gamma_start},
                 {"gamma_end", r.ramp->gamma_end},
                 {"beta_start", r.ramp->beta_start},
                 {"beta_end", r.ramp->beta_end}};
  }
  j["objective"] = r.objective_value;
  j["iterations"] = r.iterations;
  j["evaluations"] = r.evaluation_count;
  Json trace = Json::array();
  for (const auto& t : r.trace) trace.push_back(Json::array({t.iteration, t.objective}));
  j["trace"] = std::move(trace);
  return j;
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::Io, "write failed: " + path.string());
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

// ---- table cache --------------------------------------------------------
// Layout: magic "HQAOATBL", u32 version, u32 spec length, spec JSON bytes,
// i32 c_max, |C| doubles P(c′), |C|·(n+1)·|C| doubles N. Native byte order.

inline constexpr char kTableMagic[8] = {'H', 'Q', 'A', 'O', 'A', 'T', 'B', 'L'};
inline constexpr std::uint32_t kTableVersion = 1;

inline std::filesystem::path table_cache_path(const std::filesystem::path& dir, const ClassSpec& spec) {
  return dir / ("table-" + hex64(spec_hash(spec)) + ".bin");
}

inline void save_table(const DistributionTable& t, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  const std::string spec = to_json(t.spec()).dump();
  const auto spec_len = static_cast<std::uint32_t>(spec.size());
  const auto c_max = static_cast<std::int32_t>(t.costs().c_max);
  out.write(kTableMagic, sizeof kTableMagic);
  out.write(reinterpret_cast<const char*>(&kTableVersion), sizeof kTableVersion);
  out.write(reinterpret_cast<const char*>(&spec_len), sizeof spec_len);
  out.write(spec.data(), static_cast<std::streamsize>(spec.size()));
  out.write(reinterpret_cast<const char*>(&c_max), sizeof c_max);
  out.write(reinterpret_cast<const char*>(t.p_of_c().data()), static_cast<std::streamsize>(t.p_of_c().size_bytes()));
  out.write(reinterpret_cast<const char*>(t.raw().data()), static_cast<std::streamsize>(t.raw().size_bytes()));
  if (!out) fail(ErrorKind::Io, "write failed: " + path.string());
}

inline DistributionTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  auto read = [&](void* dst, std::size_t bytes) {
    in.read(static_cast<char*>(dst), static_cast<std::streamsize>(bytes));
    if (!in) fail(ErrorKind::Io, path.string() + ": truncated table cache");
  };
  char magic[sizeof kTableMagic];
  std::uint32_t version = 0, spec_len = 0;
  read(magic, sizeof magic);
  if (std::memcmp(magic, kTableMagic, sizeof magic) != 0) fail(ErrorKind::Io, path.string() + ": not a table cache");
  read(&version, sizeof version);
  if (version != kTableVersion) fail(ErrorKind::Io, path.string() + ": unsupported cache version");
  read(&spec_len, sizeof spec_len);
  std::string spec_text(spec_len, '\0');
  read(spec_text.data(), spec_len);
  const ClassSpec spec = class_spec_from_json(Json::parse(spec_text));
  std::int32_t c_max = 0;
  read(&c_max, sizeof c_max);
  const CostSet cs{c_max};
  if (cs.c_max != cost_set(spec).c_max) fail(ErrorKind::Io, path.string() + ": cost set disagrees with spec");
  std::vector<double> p(static_cast<std::size_t>(cs.size()));
  std::vector<double> n(static_cast<std::size_t>(cs.size()) * (spec.n + 1) * cs.size());
  read(p.data(), p.size() * sizeof(double));
  read(n.data(), n.size() * sizeof(double));
  return DistributionTable(spec, cs, std::move(p), std::move(n));
}

/// Loads the cached table for `spec` from `dir`, or computes and stores it.
/// An empty directory disables caching.
inline DistributionTable load_or_precompute(const ClassSpec& spec, const std::filesystem::path& dir,
                                            unsigned workers = 1, bool* from_cache = nullptr) {
  if (from_cache) *from_cache = false;
  if (dir.empty()) return precompute_all(spec, workers);
  const auto path = table_cache_path(dir, spec);
  if (std::filesystem::exists(path)) {
    auto t = load_table(path);
    if (t.spec() == spec) {
      if (from_cache) *from_cache = true;
      return t;
    }
  }
  auto t = precompute_all(spec, workers);
  save_table(t, path);
  return t;
}

// ---- CSV and dumps ------------------------------------------------------

/// CSV text with a leading "# config_hash=..." comment and a header row.
class CsvWriter {
 public:
  CsvWriter(std::uint64_t config_hash, const std::vector<std::string>& header) {
    out_ << "# config_hash=" << hex64(config_hash) << '\n';
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

  template <class... Ts>
  void values(const Ts&... vs) {
    std::vector<std::string> cells;
    (cells.push_back(cell(vs)), ...);
    row(cells);
  }

  std::string str() const { return out_.str(); }
  void save(const std::filesystem::path& path) const { write_text_file(path, str()); }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  template <class T>
    requires std::is_integral_v<T>
  static std::string cell(T v) {
    return std::to_string(v);
  }

  std::ostringstream out_;
};

inline std::string dump_homog_state(const HomogState& s, const DistributionTable& t, std::uint64_t config_hash) {
  require(static_cast<int>(s.q.size()) == t.size(), "dump_homog_state: size mismatch");
  CsvWriter csv(config_hash, {"cost", "re_q", "im_q", "p"});
  for (int c = 0; c < t.size(); ++c)
    csv.values(c, s.q[static_cast<std::size_t>(c)].real(), s.q[static_cast<std::size_t>(c)].imag(), t.p(c));
  return csv.str();
}

inline constexpr int kStatevectorDumpLimit = 12;

inline std::string dump_statevector(std::span<const Complex> amps, int n, std::uint64_t config_hash) {
  if (n > kStatevectorDumpLimit)
    fail(ErrorKind::SizeLimit, "statevector dump is limited to n <= " + std::to_string(kStatevectorDumpLimit));
  require(amps.size() == (std::size_t{1} << n), "dump_statevector: length is not 2^n");
  CsvWriter csv(config_hash, {"index", "re", "im"});
  for (std::size_t x = 0; x < amps.size(); ++x) csv.values(x, amps[x].real(), amps[x].imag());
  return csv.str();
}

}  // namespace hqaoa
