#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"

#include "hypercross/approximation.hpp"
#include "hypercross/block_function.hpp"
#include "hypercross/kernels.hpp"
#include "hypercross/lattice.hpp"
#include "hypercross/majorant.hpp"

namespace hypercross {

using Json = nlohmann::ordered_json;

/// {"d":2,"l":1,"kind":"power_log","r":[...],"b":[...]} or
/// {"d":2,"l":1,"kind":"table","values":[{"s":[0,0],"v":1.0},...]}.
Json majorant_to_json(const Majorant& omega);
Majorant majorant_from_json(const Json& j);

/// {"d":2,"blocks":[{"s":[1,2],"c":0.35},...]}.
Json block_function_to_json(const BlockFunction& f);
BlockFunction block_function_from_json(const Json& j);

/// theta is a number >= 1 or the string "inf".
Json theta_to_json(double theta);
double theta_from_json(const Json& j);

/// {"T":..,"ppu":..,"rtol":..}, all optional.
QuadratureGrid grid_from_json(const Json& j);
Json grid_to_json(const QuadratureGrid& grid);

/// ConfigurationError naming the first key of j outside allowed.
void reject_unknown_fields(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view where);

/// Parses a JSON document, mapping syntax errors to ConfigurationError.
Json parse_json(std::string_view text, std::string_view where);
Json read_json_file(const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
/// 16 hex digits of the FNV-1a hash of the compact dump of j.
std::string config_hash(const Json& j);

/// Doubles printed with 17 significant digits; "inf" and "nan" spelled out.
std::string format_double(double x);

Json level_set_family_to_json(const LevelSetFamily& family);
/// One row per index: s1..sd,set with set in {kappa, theta}.
std::string level_set_family_csv(const LevelSetFamily& family, const std::string& hash);

/// Columns N,error,cert_width,norm_ratio,lemmaV_upper,status preceded by a "# config_hash=" line.
std::string rate_table_csv(const RateTable& table, const std::string& hash);

}  // namespace hypercross
