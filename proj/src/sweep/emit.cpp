#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "gscnoma/error.hpp"
#include "gscnoma/sweep.hpp"
#include "json.hpp"

namespace gscnoma {
namespace {

using nlohmann::json;

std::string number(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", x);
  return buffer;
}

std::string number(const std::optional<double>& x) { return x ? number(*x) : std::string(); }

// The value as printed with 12 significant digits, so CSV and JSON agree.
json json_number(const std::optional<double>& x) {
  if (!x) return nullptr;
  if (!std::isfinite(*x)) return number(*x);
  return std::strtod(number(*x).c_str(), nullptr);
}

std::optional<double> optional_from(const json& value) {
  if (value.is_null()) return std::nullopt;
  if (value.is_string()) return std::strtod(value.get<std::string>().c_str(), nullptr);
  return value.get<double>();
}

}  // namespace

TableFormat parse_table_format(const std::string& name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << number(r.rho_db) << ',' << number(r.theta) << ',' << number(r.nu) << ',' << r.n_s << ',' << r.n_w << ','
        << number(r.a_s) << ',' << r.method << ',' << number(r.e_strong) << ',' << number(r.e_weak) << ','
        << number(r.e_sum) << ',' << number(r.std_error) << ',' << r.status << '\n';
  }
}

void write_json(const std::vector<SweepRow>& rows, std::ostream& out) {
  json table = json::array();
  for (const auto& r : rows) {
    json record = json::object();
    record["rho_db"] = json_number(r.rho_db);
    record["theta"] = json_number(r.theta);
    record["nu"] = json_number(r.nu);
    record["n_s"] = r.n_s;
    record["n_w"] = r.n_w;
    record["a_s"] = json_number(r.a_s);
    record["method"] = r.method;
    record["e_strong"] = json_number(r.e_strong);
    record["e_weak"] = json_number(r.e_weak);
    record["e_sum"] = json_number(r.e_sum);
    record["std_error"] = json_number(r.std_error);
    record["status"] = r.status;
    table.push_back(std::move(record));
  }
  out << table.dump(2) << '\n';
}

std::vector<SweepRow> parse_rows_json(const std::string& text) {
  std::vector<SweepRow> rows;
  try {
    for (const auto& record : json::parse(text)) {
      SweepRow r;
      r.rho_db = record.at("rho_db").get<double>();
      r.theta = record.at("theta").get<double>();
      r.nu = record.at("nu").get<double>();
      r.n_s = record.at("n_s").get<int>();
      r.n_w = record.at("n_w").get<int>();
      r.a_s = optional_from(record.at("a_s"));
      r.method = record.at("method").get<std::string>();
      r.e_strong = optional_from(record.at("e_strong"));
      r.e_weak = optional_from(record.at("e_weak"));
      r.e_sum = optional_from(record.at("e_sum"));
      r.std_error = optional_from(record.at("std_error"));
      r.status = record.at("status").get<std::string>();
      rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("result table: ") + e.what());
  }
  return rows;
}

void emit(const std::vector<SweepRow>& rows, TableFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  if (format == TableFormat::csv) {
    write_csv(rows, out);
  } else {
    write_json(rows, out);
  }
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace gscnoma
