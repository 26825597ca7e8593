#include "nirspec/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace nirspec {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& context) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw InvalidConfigError(context + ": cannot parse number '" + s + "'");
  }
  return v;
}

int parse_binary(const std::string& s, const std::string& context) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  throw InvalidConfigError(context + ": expected 0 or 1, got '" + s + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw InvalidConfigError("number formatting failed");
  return std::string(buf, ptr);
}

std::string spectral_column_name(const WavelengthGrid& grid, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "nm_%06.1f", grid.wavelength(i));
  return buf;
}

std::string dataset_to_csv(const Dataset& dataset) {
  std::ostringstream out;
  out << "id,lesion,label,synthetic";
  for (int i = 0; i < dataset.grid.count; ++i) {
    out << ',' << spectral_column_name(dataset.grid, i);
  }
  out << '\n';
  for (const LesionRecord& r : dataset.records) {
    out << r.id << ',' << (r.lesion ? lesion_name(*r.lesion) : "SYN") << ','
        << r.label << ',' << (r.synthetic ? 1 : 0);
    for (double v : r.spectrum.values) out << ',' << format_double(v);
    out << '\n';
  }
  return out.str();
}

Dataset parse_dataset_csv(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw InvalidConfigError(origin + ": missing header");
  }
  const std::vector<std::string> header = split_line(line);
  if (header.size() < 5 || header[0] != "id" || header[1] != "lesion" ||
      header[2] != "label" || header[3] != "synthetic") {
    throw InvalidConfigError(origin + ": header must start with id,lesion,label,synthetic");
  }
  const int n_spectral = static_cast<int>(header.size()) - 4;

  Dataset ds;
  ds.grid.count = n_spectral;
  // Grid parameters are recovered from the first two column labels.
  ds.grid.start_nm = parse_double(header[4].substr(3), origin + " header");
  ds.grid.step_nm = n_spectral > 1
                        ? parse_double(header[5].substr(3), origin + " header") - ds.grid.start_nm
                        : WavelengthGrid{}.step_nm;

  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    const std::string context = origin + " row " + std::to_string(row);
    if (cells.size() != header.size()) {
      throw GridMismatchError(context + ": expected " + std::to_string(header.size()) +
                              " columns, got " + std::to_string(cells.size()));
    }
    LesionRecord r;
    r.id = cells[0];
    if (r.id.empty()) throw InvalidConfigError(context + ": empty id");
    r.lesion = lesion_from_name(cells[1]);
    r.label = parse_binary(cells[2], context);
    r.synthetic = parse_binary(cells[3], context) == 1;
    r.spectrum.values.resize(n_spectral);
    for (int i = 0; i < n_spectral; ++i) {
      const double v = parse_double(cells[4 + i], context);
      if (!std::isfinite(v)) throw InvalidConfigError(context + ": non-finite value");
      r.spectrum.values[i] = v;
    }
    ds.records.push_back(std::move(r));
  }
  try {
    ds.validate();
  } catch (const GridMismatchError&) {
    throw;
  } catch (const Error& e) {
    throw InvalidConfigError(origin + ": " + e.what());
  }
  return ds;
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset_csv(buf.str(), path);
}

void write_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << dataset_to_csv(dataset);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace nirspec
