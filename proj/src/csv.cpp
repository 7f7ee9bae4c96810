#include "omc/csv.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "omc/errors.hpp"

namespace omc {

namespace {

std::string lower_trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open '" + path + "'");
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lower_trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) {
    throw ValidationError("'" + path + "' is empty");
  }
  return lines;
}

double parse_cell(const std::string& cell, const std::string& path, std::size_t row,
                  std::size_t col) {
  const std::string text = lower_trim(cell);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ValidationError("'" + path + "' row " + std::to_string(row) + " column " +
                          std::to_string(col + 1) + ": cannot parse '" + cell +
                          "' as a number");
  }
  if (!std::isfinite(value)) {
    throw ValidationError("'" + path + "' row " + std::to_string(row) +
                          ": non-finite value '" + cell + "'");
  }
  return value;
}

struct SchemaDef {
  SpectrumSchema schema;
  std::array<const char*, 2> columns;
};

constexpr std::array<SchemaDef, 3> kSchemas{{
    {SpectrumSchema::OpticalScan, {"wavelength_nm", "reflection"}},
    {SpectrumSchema::MechanicalPsd, {"frequency_hz", "psd"}},
    {SpectrumSchema::TimeTrace, {"time_s", "signal"}},
}};

}  // namespace

std::string schema_name(SpectrumSchema schema) {
  for (const auto& def : kSchemas) {
    if (def.schema == schema) {
      return std::string(def.columns[0]) + "," + def.columns[1];
    }
  }
  return "?";
}

SpectrumTable load_spectrum_csv(const std::string& path) {
  const auto lines = read_lines(path);
  const auto raw_header = split_csv_line(lines[0]);
  std::vector<std::string> header;
  header.reserve(raw_header.size());
  for (const auto& cell : raw_header) header.push_back(lower_trim(cell));

  const bool has_sigma = header.size() == 3 && header[2] == "sigma";
  const SchemaDef* match = nullptr;
  if (header.size() == 2 || has_sigma) {
    for (const auto& def : kSchemas) {
      if (header[0] == def.columns[0] && header[1] == def.columns[1]) {
        match = &def;
      }
    }
  }
  if (!match) {
    // name the first cell that fits no recognized schema position
    std::string offender = raw_header.empty() ? lines[0] : raw_header[0];
    for (std::size_t i = 0; i < header.size(); ++i) {
      bool known = i == 2 && header[i] == "sigma";
      for (const auto& def : kSchemas) {
        if (i < 2 && header[i] == def.columns[i]) known = true;
      }
      if (!known) {
        offender = raw_header[i];
        break;
      }
    }
    throw ValidationError(
        "'" + path + "': unrecognized header column '" + offender +
        "'; expected wavelength_nm,reflection or frequency_hz,psd or time_s,signal "
        "with an optional trailing sigma column");
  }

  SpectrumTable table;
  table.schema = match->schema;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (lower_trim(lines[r]).empty()) continue;
    const auto cells = split_csv_line(lines[r]);
    if (cells.size() != header.size()) {
      throw ValidationError("'" + path + "' row " + std::to_string(r) + ": expected " +
                            std::to_string(header.size()) + " columns, found " +
                            std::to_string(cells.size()));
    }
    table.x.push_back(parse_cell(cells[0], path, r, 0));
    table.y.push_back(parse_cell(cells[1], path, r, 1));
    if (has_sigma) table.sigma.push_back(parse_cell(cells[2], path, r, 2));
  }
  if (table.x.size() < 8) {
    throw ValidationError("'" + path + "' holds " + std::to_string(table.x.size()) +
                          " data rows; at least 8 are required");
  }
  return table;
}

SpectrumTable load_spectrum_csv(const std::string& path, SpectrumSchema expected) {
  SpectrumTable table = load_spectrum_csv(path);
  if (table.schema != expected) {
    throw ValidationError("'" + path + "' has columns (" + schema_name(table.schema) +
                          ") but this command needs (" + schema_name(expected) + ")");
  }
  return table;
}

std::vector<BackactionPoint> load_backaction_csv(const std::string& path) {
  const auto lines = read_lines(path);
  const auto raw_header = split_csv_line(lines[0]);
  std::vector<std::string> header;
  for (const auto& cell : raw_header) header.push_back(lower_trim(cell));
  const std::vector<std::string> expected{"nc", "gamma_m_hz", "side"};
  if (header != expected) {
    std::string offender = raw_header.empty() ? lines[0] : raw_header[0];
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i >= expected.size() || header[i] != expected[i]) {
        offender = raw_header[i];
        break;
      }
    }
    throw ValidationError("'" + path + "': unrecognized header column '" + offender +
                          "'; expected nc,gamma_m_hz,side");
  }

  std::vector<BackactionPoint> points;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (lower_trim(lines[r]).empty()) continue;
    const auto cells = split_csv_line(lines[r]);
    if (cells.size() != 3) {
      throw ValidationError("'" + path + "' row " + std::to_string(r) +
                            ": expected 3 columns, found " +
                            std::to_string(cells.size()));
    }
    BackactionPoint pt;
    pt.nc = parse_cell(cells[0], path, r, 0);
    pt.gamma_m = AngularFrequency::from_hz(parse_cell(cells[1], path, r, 1));
    const std::string side = lower_trim(cells[2]);
    if (side == "red") {
      pt.side = SidebandChoice::Red;
    } else if (side == "blue") {
      pt.side = SidebandChoice::Blue;
    } else {
      throw ValidationError("'" + path + "' row " + std::to_string(r) +
                            ": side must be red or blue, found '" + cells[2] + "'");
    }
    points.push_back(pt);
  }
  if (points.size() < 2) {
    throw ValidationError("'" + path + "' holds " + std::to_string(points.size()) +
                          " data rows; at least 2 are required");
  }
  return points;
}

}  // namespace omc
