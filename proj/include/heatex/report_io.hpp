#pragma once
//! \file report_io.hpp
//! report.json and the flat CSV tables.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatex/harness.hpp"

namespace heatex {

struct WriteOptions {
  //! Drop wall-clock timings so repeated runs compare byte-for-byte.
  bool compare_mode = false;
};

//! Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string format_number(double x);

nlohmann::json report_to_json(Report const& report, WriteOptions const& opts = {});

//! One named table (file name, full text). Empty tables are omitted.
struct Table {
  std::string file;
  std::string text;
};
std::vector<Table> report_tables(Report const& report);

//! Write report.json and every table into `dir` (created if missing).
//! Returns the written paths. Throws Error on I/O failure.
std::vector<std::filesystem::path> write_report(Report const& report,
                                                std::filesystem::path const& dir,
                                                WriteOptions const& opts = {});

}  // namespace heatex
