#include "nlwave/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace nlwave {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw IoError("not a number: '" + s + "'");
  return v;
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xffu));
}

void put_f64(std::vector<unsigned char>& out, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xffu));
}

struct Cursor {
  const std::vector<unsigned char>& bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) throw IoError("snapshot truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
    pos += 8;
    double x;
    std::memcpy(&x, &bits, sizeof x);
    return x;
  }
};

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> CsvTable::column(const std::string& name) const {
  std::size_t idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) idx = i;
  }
  if (idx == header.size()) throw IoError("no column '" + name + "'");
  std::vector<double> out;
  for (const auto& row : rows) out.push_back(parse_double(row.at(idx)));
  return out;
}

void write_csv(const std::string& path, const CsvTable& table) {
  auto out = open_out(path);
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  finish(out, path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  CsvTable table;
  std::string line;
  if (std::getline(in, line)) table.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty()) table.rows.push_back(split(line));
  }
  return table;
}

void write_series_csv(const std::vector<SeriesRow>& rows, const std::string& path) {
  CsvTable t;
  t.header = {"t", "u_site", "H_site", "E_total", "rate_lhs", "rate_rhs", "residual"};
  for (const SeriesRow& r : rows) {
    t.rows.push_back({format_double(r.t), format_double(r.u_site), format_double(r.h_site),
                      format_double(r.e_total), format_double(r.rate_lhs),
                      format_double(r.rate_rhs), format_double(r.residual)});
  }
  write_csv(path, t);
}

std::vector<SeriesRow> read_series_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  const auto t_col = t.column("t");
  const auto u = t.column("u_site");
  const auto h = t.column("H_site");
  const auto e = t.column("E_total");
  const auto l = t.column("rate_lhs");
  const auto r = t.column("rate_rhs");
  const auto res = t.column("residual");
  std::vector<SeriesRow> rows(t_col.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i] = {t_col[i], u[i], h[i], e[i], l[i], r[i], res[i]};
  }
  return rows;
}

void write_site_csv(const SimulationResult& run, const std::string& path) {
  CsvTable t;
  t.header = {"t", "u_site", "H_site"};
  for (std::size_t i = 0; i < run.site.times.size(); ++i) {
    t.rows.push_back({format_double(run.site.times[i]), format_double(run.u_site[i]),
                      format_double(run.site.hamiltonian[i])});
  }
  write_csv(path, t);
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  CsvTable t;
  t.header = {"A", "E_integrated", "max_residual", "status"};
  for (const SweepRow& r : result.rows) {
    t.rows.push_back({format_double(r.amplitude), format_double(r.integral),
                      format_double(r.max_residual), r.status});
  }
  write_csv(path, t);
}

void write_scan_csv(const ScanResult& result, const std::string& path) {
  CsvTable t;
  t.header = {"omega", "A", "E_integrated", "max_residual", "status"};
  for (const ScanRow& r : result.rows) {
    t.rows.push_back({format_double(r.omega), format_double(r.amplitude), format_double(r.energy),
                      format_double(r.max_residual), r.status});
  }
  write_csv(path, t);
}

void write_peaks_csv(const PeakTable& peaks, const std::string& path) {
  CsvTable t;
  t.header = {"index", "t", "H_smoothed"};
  for (std::size_t i = 0; i < peaks.times.size(); ++i) {
    t.rows.push_back({std::to_string(i + 1), format_double(peaks.times[i]),
                      format_double(peaks.values[i])});
  }
  write_csv(path, t);
}

std::vector<unsigned char> encode_snapshot(const FieldLevel& level, const Grid3& grid, double t) {
  std::vector<unsigned char> out{'N', 'L', 'W', '3'};
  out.reserve(4 + 16 + 32 + 8 * level.size());
  put_u32(out, 1);
  const auto side = static_cast<std::uint32_t>(level.side());
  for (int i = 0; i < 3; ++i) put_u32(out, side);
  put_f64(out, grid.dx);
  put_f64(out, grid.dy);
  put_f64(out, grid.dz);
  put_f64(out, t);
  for (double x : level.values()) put_f64(out, x);
  return out;
}

SnapshotData decode_snapshot(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "NLW3", 4) != 0) {
    throw IoError("bad snapshot magic");
  }
  Cursor c{bytes, 4};
  SnapshotData snap;
  snap.header.version = c.u32();
  if (snap.header.version != 1) throw IoError("unsupported snapshot version");
  for (auto& d : snap.header.dims) d = c.u32();
  const auto side = snap.header.dims[0];
  if (side < 3 || snap.header.dims[1] != side || snap.header.dims[2] != side) {
    throw IoError("snapshot dimensions must be equal and >= 3");
  }
  snap.header.dx = c.f64();
  snap.header.dy = c.f64();
  snap.header.dz = c.f64();
  snap.header.t = c.f64();
  snap.level = FieldLevel(static_cast<int>(side) - 2);
  const std::size_t count = snap.level.size();
  if (bytes.size() - c.pos != 8 * count) throw IoError("snapshot payload length mismatch");
  for (double& x : snap.level.values()) x = c.f64();
  return snap;
}

void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  finish(out, path);
}

std::vector<unsigned char> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_snapshot(const std::string& path, const FieldLevel& level, const Grid3& grid, double t) {
  write_bytes(path, encode_snapshot(level, grid, t));
}

SnapshotData read_snapshot(const std::string& path) { return decode_snapshot(read_bytes(path)); }

CsvTable snapshot_slice(const SnapshotData& snap, int index) {
  const int side = snap.level.side();
  if (index < 0 || index >= side) throw IoError("slice index outside the snapshot");
  CsvTable t;
  t.header = {"n", "p", "u"};
  for (int n = 0; n < side; ++n)
    for (int p = 0; p < side; ++p) {
      t.rows.push_back({std::to_string(n), std::to_string(p), format_double(snap.level(index, n, p))});
    }
  return t;
}

}  // namespace nlwave
