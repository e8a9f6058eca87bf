#include "xxring/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace xxring {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string quote_csv(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

double parse_double(const std::string& text) {
  if (text == "nan" || text == "NaN") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("bad number in CSV: '" + text + "'");
  }
  if (used != text.size()) throw std::runtime_error("bad number in CSV: '" + text + "'");
  return v;
}

}  // namespace

TableFormat parse_table_format(const std::string& name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json-lines" || name == "jsonl") return TableFormat::json_lines;
  throw std::invalid_argument("unknown output format '" + name + "'");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream& out, const SweepTable& table) {
  const bool with_error = table.has_errors();
  out << "j,b,t,delta,quantity,value" << (with_error ? ",error" : "") << '\n';
  for (const auto& r : table.rows) {
    out << format_double(r.j) << ',' << format_double(r.b) << ',' << format_double(r.t) << ','
        << format_double(r.delta) << ',' << quote_csv(r.quantity) << ',' << format_double(r.value);
    if (with_error) out << ',' << quote_csv(r.error);
    out << '\n';
  }
}

void write_json_lines(std::ostream& out, const SweepTable& table) {
  for (const auto& r : table.rows) {
    nlohmann::json row = {{"j", r.j}, {"b", r.b}, {"t", r.t}, {"delta", r.delta}, {"quantity", r.quantity}};
    if (std::isnan(r.value))
      row["value"] = nullptr;
    else
      row["value"] = r.value;
    if (!r.error.empty()) row["error"] = r.error;
    out << row.dump() << '\n';
  }
}

void write_table(std::ostream& out, const SweepTable& table, TableFormat format) {
  if (format == TableFormat::csv)
    write_csv(out, table);
  else
    write_json_lines(out, table);
}

SweepTable read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  const auto header = split_csv_line(line);
  const bool with_error = header.size() == 7;
  if (header.size() < 6 || header[0] != "j" || header[5] != "value")
    throw std::runtime_error("unexpected CSV header: " + line);

  SweepTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw std::runtime_error("CSV row has wrong field count: " + line);
    SweepRow row;
    row.j = parse_double(f[0]);
    row.b = parse_double(f[1]);
    row.t = parse_double(f[2]);
    row.delta = parse_double(f[3]);
    row.quantity = f[4];
    row.value = parse_double(f[5]);
    if (with_error) row.error = f[6];
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_boundary_csv(std::ostream& out, const BoundaryCurve& curve) {
  out << "b,t_c,branch\n";
  for (const auto& p : curve.points)
    out << format_double(p.b) << ',' << format_double(p.t_c) << ',' << branch_name(p.branch) << '\n';
}

void write_contours_csv(std::ostream& out, const std::vector<ContourPoint>& points) {
  out << "level,b,t\n";
  for (const auto& p : points)
    out << format_double(p.level) << ',' << format_double(p.b) << ',' << format_double(p.t) << '\n';
}

}  // namespace xxring
