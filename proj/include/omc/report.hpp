#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "omc/fits.hpp"

namespace omc {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a, used for input provenance digests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Deterministic serialization: sorted keys, two-space indent, floats printed
// with 12 significant digits.  Rendering a parsed rendering reproduces the
// bytes exactly.
std::string render_json(const nlohmann::json& value);

// {"value": v, "unit": u} and the sigma-carrying variant
nlohmann::json quantity(double value, const char* unit);
nlohmann::json quantity(const Uncertain& u, const char* unit);

}  // namespace omc
