#include "eddikit/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "eddikit/error.hpp"
#include "eddikit/preprocess.hpp"

namespace eddikit::cli {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) fail(ErrorKind::Io, "cannot format number");
  return std::string(buf, ptr);
}

const std::vector<double>& CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return columns[i];
  }
  fail(ErrorKind::Io, "CSV has no column '" + std::string(name) + "'");
}

bool CsvTable::has_column(std::string_view name) const noexcept {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty()) continue;
    const auto fields = split(content);
    if (table.header.empty()) {
      for (auto f : fields) table.header.emplace_back(trim(f));
      table.columns.resize(table.header.size());
      continue;
    }
    if (fields.size() != table.header.size()) {
      fail(ErrorKind::Io, path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(table.header.size()) + " fields, found " +
                              std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto f = trim(fields[i]);
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(value)) {
        fail(ErrorKind::Io, path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                                std::string(f) + "' in column '" + table.header[i] + "'");
      }
      table.columns[i].push_back(value);
    }
  }
  if (table.header.empty()) fail(ErrorKind::Io, "'" + path.string() + "' is empty");
  return table;
}

void write_csv(const fs::path& path, std::span<const std::string> header,
               std::span<const std::span<const double>> columns) {
  if (header.size() != columns.size()) fail(ErrorKind::Io, "CSV header/column count mismatch");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) fail(ErrorKind::Io, "CSV columns differ in length");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  std::string buffer;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer += ',';
    buffer += header[i];
  }
  buffer += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) buffer += ',';
      buffer += format_double(columns[i][r]);
    }
    buffer += '\n';
    if (buffer.size() > (1u << 20)) {
      out << buffer;
      buffer.clear();
    }
  }
  out << buffer;
  if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
  std::vector<double> t(traj.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = traj.axis().at(k);
  const std::vector<std::string> header{"t", "x", "v", "a", "f_ext"};
  const std::vector<std::span<const double>> cols{t, traj.x(), traj.v(), traj.a(), traj.f_ext()};
  write_csv(path, header, cols);
}

TimeAxis uniform_axis(const std::vector<double>& t, const fs::path& source) {
  if (t.size() < 2) fail(ErrorKind::Io, source.string() + ": need at least two samples");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(dt > 0.0)) fail(ErrorKind::Io, source.string() + ": time column must increase");
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double expected = t.front() + static_cast<double>(k) * dt;
    if (std::abs(t[k] - expected) > 1e-6 * dt) {
      fail(ErrorKind::Io, source.string() + ": sample " + std::to_string(k + 1) +
                              " breaks the uniform time grid");
    }
  }
  return TimeAxis{t.front(), dt, t.size()};
}

LoadedRecord read_record(const fs::path& path, double mass, int filter_order, double cutoff_hz) {
  const CsvTable table = read_csv(path);
  const auto axis = uniform_axis(table.column("t"), path);
  const std::vector<std::string> full{"t", "x", "v", "a", "f_ext"};
  if (table.header == full) {
    return {Trajectory(axis, table.columns[1], table.columns[2], table.columns[3], table.columns[4], mass),
            false};
  }
  if (table.header.size() >= 2 && table.header[0] == "t" && table.header[1] == "a" &&
      (table.header.size() == 2 || (table.header.size() == 3 && table.header[2] == "f_ext"))) {
    Trajectory rec = reconstruct_states(SampledSignal(axis, table.columns[1]), mass,
                                        FilterSettings{filter_order, cutoff_hz});
    if (table.header.size() == 3) {
      rec = Trajectory(axis, {rec.x().begin(), rec.x().end()}, {rec.v().begin(), rec.v().end()},
                       {rec.a().begin(), rec.a().end()}, table.columns[2], mass);
    }
    return {std::move(rec), true};
  }
  std::string got;
  for (const auto& h : table.header) got += (got.empty() ? "" : ",") + h;
  fail(ErrorKind::Io, path.string() + ": unrecognised header '" + got +
                          "' (expected t,x,v,a,f_ext or t,a)");
}

}  // namespace eddikit::cli
