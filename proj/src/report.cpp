#include "omc/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "omc/errors.hpp"

namespace omc {

namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void escape_string(const std::string& s, std::string& out) {
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void render(const nlohmann::json& v, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::null:
      out += "null";
      break;
    case nlohmann::json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      break;
    case nlohmann::json::value_t::number_integer:
      out += std::to_string(v.get<std::int64_t>());
      break;
    case nlohmann::json::value_t::number_unsigned:
      out += std::to_string(v.get<std::uint64_t>());
      break;
    case nlohmann::json::value_t::number_float:
      out += format_double(v.get<double>());
      break;
    case nlohmann::json::value_t::string:
      escape_string(v.get<std::string>(), out);
      break;
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out += pad_in;
        render(v[i], out, depth + 1);
        if (i + 1 < v.size()) out += ',';
        out += '\n';
      }
      out += pad + "]";
      break;
    }
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [key, value] : v.items()) {
        out += pad_in;
        escape_string(key, out);
        out += ": ";
        render(value, out, depth + 1);
        if (++i < v.size()) out += ',';
        out += '\n';
      }
      out += pad + "}";
      break;
    }
    default:
      out += "null";
  }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest_hex(std::string_view bytes) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ValidationError("cannot write '" + path + "'");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw ValidationError("write to '" + path + "' failed");
  }
}

std::string render_json(const nlohmann::json& value) {
  std::string out;
  render(value, out, 0);
  out += '\n';
  return out;
}

nlohmann::json quantity(double value, const char* unit) {
  return nlohmann::json{{"value", value}, {"unit", unit}};
}

nlohmann::json quantity(const Uncertain& u, const char* unit) {
  return nlohmann::json{{"value", u.value}, {"sigma", u.sigma}, {"unit", unit}};
}

}  // namespace omc
