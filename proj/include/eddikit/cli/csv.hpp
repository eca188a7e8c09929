#pragma once

#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eddikit/signal.hpp"

namespace eddikit::cli {

// Shortest text that parses back to the same double (17 significant digits
// at most), locale independent.
std::string format_double(double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
  const std::vector<double>& column(std::string_view name) const;
  bool has_column(std::string_view name) const noexcept;
};

// Throws Io on missing files and on malformed rows (with the line number).
CsvTable read_csv(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               std::span<const std::span<const double>> columns);

// Trajectory CSV: header t,x,v,a,f_ext on a uniform time grid.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

// Accepts "t,x,v,a,f_ext" directly, or "t,a" (optionally "t,a,f_ext") in
// which case x and v are rebuilt by integration and zero-phase high-pass
// filtering with the given settings.
struct LoadedRecord {
  Trajectory trajectory;
  bool reconstructed = false;
};
LoadedRecord read_record(const std::filesystem::path& path, double mass, int filter_order = 3,
                         double cutoff_hz = 1.5);

// Time axis of a sampled column; throws Io unless uniformly spaced.
TimeAxis uniform_axis(const std::vector<double>& t, const std::filesystem::path& source);

}  // namespace eddikit::cli
