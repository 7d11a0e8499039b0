#include "vlcqos/cli/csv_table.hpp"

#include <fmt/format.h>

#include <cmath>

namespace vlcqos::cli {

namespace {

void write_field(std::ostream& out, const std::string& f) {
  if (f.find_first_of(",\"\n") == std::string::npos) {
    out << f;
    return;
  }
  out << '"';
  for (char c : f) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

void write_row(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    write_field(out, row[i]);
  }
  out << '\n';
}

}  // namespace

void write_csv(std::ostream& out, const Table& table, const Provenance& prov) {
  out << "# vlcqos " << prov.tool_version << " experiment=" << prov.experiment
      << " spec_hash=" << prov.spec_hash << " seed=" << prov.seed << '\n';
  write_row(out, table.header);
  for (const auto& r : table.rows) write_row(out, r);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{}", v);
}

}  // namespace vlcqos::cli
