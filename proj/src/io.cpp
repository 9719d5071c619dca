#include "hypercross/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hypercross/error.hpp"

namespace hypercross {

namespace {

[[noreturn]] void bad(std::string_view where, const std::string& what) {
  throw ConfigurationError(std::string(where) + ": " + what);
}

const Json& member(const Json& j, const char* key, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, std::string_view where) {
  if (!j.is_number()) bad(where, "expected a number, got " + j.dump());
  return j.get<double>();
}

int integer(const Json& j, std::string_view where) {
  if (!j.is_number_integer()) bad(where, "expected an integer, got " + j.dump());
  return j.get<int>();
}

std::vector<double> numbers(const Json& j, std::string_view where) {
  if (!j.is_array()) bad(where, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x, where));
  return out;
}

DyadicIndex index_from_json(const Json& j, std::string_view where) {
  if (!j.is_array() || j.empty()) bad(where, "expected a nonempty array of nonnegative integers");
  std::vector<int> s;
  for (const auto& x : j) {
    const int v = integer(x, where);
    if (v < 0) bad(where, "dyadic index coordinates must be nonnegative");
    s.push_back(v);
  }
  return DyadicIndex(std::move(s));
}

Json index_to_json(const DyadicIndex& s) {
  Json a = Json::array();
  for (int v : s.coords()) a.push_back(v);
  return a;
}

}  // namespace

void reject_unknown_fields(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) bad(where, "expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) bad(where, "unknown field \"" + key + "\"");
  }
}

Json majorant_to_json(const Majorant& omega) {
  Json j;
  j["d"] = omega.dim();
  j["l"] = omega.order();
  if (omega.kind() == MajorantKind::power_log) {
    j["kind"] = "power_log";
    j["r"] = omega.r();
    j["b"] = omega.b();
    return j;
  }
  const auto* table = omega.table_values();
  if (!table) throw ConfigurationError("a custom majorant without a table cannot be serialized");
  j["kind"] = "table";
  Json values = Json::array();
  for (const auto& [s, v] : *table) values.push_back(Json{{"s", index_to_json(s)}, {"v", v}});
  j["values"] = std::move(values);
  return j;
}

Majorant majorant_from_json(const Json& j) {
  constexpr std::string_view where = "omega";
  if (!j.is_object()) bad(where, "expected a JSON object");
  const Json& kind = member(j, "kind", where);
  const int l = j.contains("l") ? integer(j["l"], where) : 1;
  if (kind == "power_log") {
    reject_unknown_fields(j, {"d", "l", "kind", "r", "b"}, where);
    std::vector<double> r = numbers(member(j, "r", where), where);
    std::vector<double> b = j.contains("b") ? numbers(j["b"], where) : std::vector<double>(r.size(), 0.0);
    if (j.contains("d") && integer(j["d"], where) != static_cast<int>(r.size()))
      bad(where, "d does not match the length of r");
    return Majorant::power_log(l, std::move(r), std::move(b));
  }
  if (kind == "table") {
    reject_unknown_fields(j, {"d", "l", "kind", "values"}, where);
    const Json& values = member(j, "values", where);
    if (!values.is_array() || values.empty()) bad(where, "table needs a nonempty \"values\" array");
    std::map<DyadicIndex, double> table;
    for (const auto& e : values) {
      reject_unknown_fields(e, {"s", "v"}, "omega.values");
      DyadicIndex s = index_from_json(member(e, "s", where), where);
      if (!table.emplace(s, number(member(e, "v", where), where)).second) bad(where, "duplicate table entry " + s.str());
    }
    const int d = j.contains("d") ? integer(j["d"], where) : table.begin()->first.dim();
    return Majorant::table(d, l, std::move(table));
  }
  bad(where, "kind must be \"power_log\" or \"table\"");
}

Json block_function_to_json(const BlockFunction& f) {
  Json j;
  j["d"] = f.dim();
  Json blocks = Json::array();
  for (const auto& [s, c] : f.coeffs()) blocks.push_back(Json{{"s", index_to_json(s)}, {"c", c}});
  j["blocks"] = std::move(blocks);
  return j;
}

BlockFunction block_function_from_json(const Json& j) {
  constexpr std::string_view where = "function";
  reject_unknown_fields(j, {"d", "blocks"}, where);
  const int d = integer(member(j, "d", where), where);
  if (d < 1) bad(where, "d must be positive");
  const Json& blocks = member(j, "blocks", where);
  if (!blocks.is_array()) bad(where, "\"blocks\" must be an array");
  BlockFunction f(d);
  for (const auto& b : blocks) {
    reject_unknown_fields(b, {"s", "c"}, "function.blocks");
    DyadicIndex s = index_from_json(member(b, "s", where), where);
    if (s.dim() != d) bad(where, "block " + s.str() + " has the wrong dimension");
    if (f.coeff(s) != 0.0) bad(where, "duplicate block " + s.str());
    const double c = number(member(b, "c", where), where);
    if (!std::isfinite(c)) bad(where, "coefficients must be finite");
    f.set(s, c);
  }
  return f;
}

Json theta_to_json(double theta) {
  if (std::isinf(theta)) return "inf";
  return theta;
}

double theta_from_json(const Json& j) {
  if (j.is_string()) {
    if (j == "inf") return std::numeric_limits<double>::infinity();
    bad("theta", "the only string value allowed is \"inf\"");
  }
  return number(j, "theta");
}

QuadratureGrid grid_from_json(const Json& j) {
  constexpr std::string_view where = "grid";
  reject_unknown_fields(j, {"T", "ppu", "rtol"}, where);
  QuadratureGrid g;
  if (j.contains("T")) g.T = number(j["T"], where);
  if (j.contains("ppu")) g.points_per_unit = integer(j["ppu"], where);
  if (j.contains("rtol")) g.rel_tol = number(j["rtol"], where);
  if (g.T < 0.0) bad(where, "T must be nonnegative");
  if (g.points_per_unit < 0) bad(where, "ppu must be nonnegative");
  if (!(g.rel_tol > 0.0 && g.rel_tol < 1.0)) bad(where, "rtol must lie in (0, 1)");
  return g;
}

Json grid_to_json(const QuadratureGrid& grid) {
  return Json{{"T", grid.T}, {"ppu", grid.points_per_unit}, {"rtol", grid.rel_tol}};
}

Json parse_json(std::string_view text, std::string_view where) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    bad(where, std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_json(os.str(), path);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const Json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(nlohmann::json::parse(j.dump()).dump())));
  return buf;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json level_set_family_to_json(const LevelSetFamily& family) {
  Json j;
  if (family.N == std::floor(family.N) && family.N < 0x1p53)
    j["N"] = static_cast<std::int64_t>(family.N);
  else
    j["N"] = family.N;
  j["kappa_size"] = family.kappa.size();
  j["theta_size"] = family.theta.size();
  Json kappa = Json::array(), theta = Json::array(), flagged = Json::array();
  for (const auto& s : family.kappa) kappa.push_back(index_to_json(s));
  for (const auto& s : family.theta) theta.push_back(index_to_json(s));
  for (const auto& s : family.flagged) flagged.push_back(index_to_json(s));
  j["kappa"] = std::move(kappa);
  j["theta"] = std::move(theta);
  j["s_max"] = family.s_max;
  j["flagged"] = std::move(flagged);
  return j;
}

std::string level_set_family_csv(const LevelSetFamily& family, const std::string& hash) {
  std::ostringstream os;
  os << "# config_hash=" << hash << '\n';
  const int d = family.kappa.empty() ? (family.theta.empty() ? 0 : family.theta.front().dim())
                                     : family.kappa.front().dim();
  for (int j = 1; j <= d; ++j) os << 's' << j << ',';
  os << "set\n";
  auto rows = [&](const std::vector<DyadicIndex>& set, const char* name) {
    for (const auto& s : set) {
      for (int v : s.coords()) os << v << ',';
      os << name << '\n';
    }
  };
  rows(family.kappa, "kappa");
  rows(family.theta, "theta");
  return os.str();
}

std::string rate_table_csv(const RateTable& table, const std::string& hash) {
  std::ostringstream os;
  os << "# config_hash=" << hash << '\n';
  os << "N,error,cert_width,norm_ratio,lemmaV_upper,status\n";
  for (const auto& row : table.rows) {
    os << format_double(row.N) << ',';
    if (row.ok) {
      os << format_double(row.error) << ',' << format_double(row.cert_width) << ',' << format_double(row.norm_ratio)
         << ',' << format_double(row.lemmaV_upper) << ",ok\n";
    } else {
      os << "nan,nan,nan,nan," << row.failure.substr(0, row.failure.find(':')) << '\n';
    }
  }
  return os.str();
}

}  // namespace hypercross
