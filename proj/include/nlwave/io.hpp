#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlwave/experiments.hpp"
#include "nlwave/field.hpp"
#include "nlwave/model.hpp"

namespace nlwave {

/// Raised for unreadable/unwritable files and malformed file contents.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest-safe decimal form: 17 significant digits.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column as doubles; throws IoError for unknown columns.
  std::vector<double> column(const std::string& name) const;
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

/// Columns t, u_site, H_site, E_total, rate_lhs, rate_rhs, residual.
void write_series_csv(const std::vector<SeriesRow>& rows, const std::string& path);
std::vector<SeriesRow> read_series_csv(const std::string& path);

/// Columns t, u_site, H_site for every recorded level.
void write_site_csv(const SimulationResult& run, const std::string& path);

/// Columns A, E_integrated, max_residual, status.
void write_sweep_csv(const SweepResult& result, const std::string& path);
/// Columns omega, A, E_integrated, max_residual, status.
void write_scan_csv(const ScanResult& result, const std::string& path);
/// Columns index, t, H_smoothed.
void write_peaks_csv(const PeakTable& peaks, const std::string& path);

struct SnapshotHeader {
  std::uint32_t version = 1;
  std::array<std::uint32_t, 3> dims{0, 0, 0};
  double dx = 1.0, dy = 1.0, dz = 1.0, t = 0.0;
};

struct SnapshotData {
  SnapshotHeader header;
  FieldLevel level;
};

/// "NLW3" | u32 version | 3 x u32 dims | dx dy dz t (f64) | payload (f64), all little-endian.
std::vector<unsigned char> encode_snapshot(const FieldLevel& level, const Grid3& grid, double t);
SnapshotData decode_snapshot(const std::vector<unsigned char>& bytes);

void write_snapshot(const std::string& path, const FieldLevel& level, const Grid3& grid, double t);
SnapshotData read_snapshot(const std::string& path);
void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes);
std::vector<unsigned char> read_bytes(const std::string& path);

/// Plane m = index of a snapshot as CSV columns n, p, u.
CsvTable snapshot_slice(const SnapshotData& snap, int index);

}  // namespace nlwave
