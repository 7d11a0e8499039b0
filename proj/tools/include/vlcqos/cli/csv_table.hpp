#ifndef VLCQOS_CLI_CSV_TABLE_HPP
#define VLCQOS_CLI_CSV_TABLE_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace vlcqos::cli {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Provenance {
  std::string tool_version;
  std::string spec_hash;
  std::string experiment;
  std::uint64_t seed = 0;
};

/// Leading "# ..." provenance line, header row, then rows. Fields containing
/// commas, quotes or newlines are quoted.
void write_csv(std::ostream& out, const Table& table, const Provenance& prov);

/// Shortest round-trip decimal for doubles; "nan" for NaN.
std::string format_number(double v);

}  // namespace vlcqos::cli

#endif  // VLCQOS_CLI_CSV_TABLE_HPP
