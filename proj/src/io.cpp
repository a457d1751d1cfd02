#include "walldist/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace walldist {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad(const std::string& what, int line) {
  throw Error(ErrorKind::Io, what + " (line " + std::to_string(line) + ")");
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double num(const std::string& s, int line) {
  if (s.empty()) bad("empty number", line);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) bad("bad number '" + s + "'", line);
  return v;
}

long inum(const std::string& s, int line) {
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) bad("bad integer '" + s + "'", line);
  return v;
}

// Reads the header and the remaining rows; every row must match the header width.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Csv read_csv(std::istream& is) {
  Csv c;
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::Io, "missing CSV header");
  c.header = split(line);
  int n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty() || line == "\r") continue;
    auto r = split(line);
    if (r.size() != c.header.size()) bad("column count mismatch", n);
    c.rows.push_back(std::move(r));
  }
  return c;
}

void expect_header(const Csv& c, const std::vector<std::string>& want) {
  if (c.header != want) {
    std::string got;
    for (const auto& h : c.header) got += h + ",";
    throw Error(ErrorKind::Io, "unexpected CSV header: " + got);
  }
}

Dims dims_from(const std::vector<std::array<long, 3>>& idx) {
  Dims d{0, 0, 0};
  for (const auto& a : idx) {
    d.ni = std::max<int>(d.ni, a[0] + 1);
    d.nj = std::max<int>(d.nj, a[1] + 1);
    d.nk = std::max<int>(d.nk, a[2] + 1);
  }
  if (d.size() != idx.size()) throw Error(ErrorKind::Io, "node indices do not fill the grid");
  return d;
}

}  // namespace

void write_field_csv(std::ostream& os, const CurvilinearGrid& grid, const ScalarField& phi,
                     const ScalarField* exact) {
  const Dims& d = grid.dims;
  if (phi.dims() != d || (exact && exact->dims() != d))
    throw Error(ErrorKind::DimensionMismatch, "field dims differ from grid");
  const bool three = d.is3d();
  os << (three ? "i,j,k,x,y,z,phi" : "i,j,x,y,phi") << (exact ? ",exact,error\n" : "\n");
  for (int k = 0; k < d.nk; ++k)
    for (int j = 0; j < d.nj; ++j)
      for (int i = 0; i < d.ni; ++i) {
        const std::size_t p = d.index(i, j, k);
        os << i << ',' << j << ',';
        if (three) os << k << ',';
        os << fmt(grid.coord[0][p]) << ',' << fmt(grid.coord[1][p]) << ',';
        if (three) os << fmt(grid.coord[2][p]) << ',';
        os << fmt(phi[p]);
        if (exact) os << ',' << fmt((*exact)[p]) << ',' << fmt(phi[p] - (*exact)[p]);
        os << '\n';
      }
  if (!os) throw Error(ErrorKind::Io, "field CSV write failed");
}

FieldTable read_field_csv(std::istream& is) {
  const Csv c = read_csv(is);
  const bool three = !c.header.empty() && c.header.size() > 2 && c.header[2] == "k";
  const std::size_t base = three ? 7 : 5;
  std::vector<std::string> want = three ? std::vector<std::string>{"i", "j", "k", "x", "y", "z", "phi"}
                                        : std::vector<std::string>{"i", "j", "x", "y", "phi"};
  const bool has_exact = c.header.size() == base + 2;
  if (has_exact) {
    want.push_back("exact");
    want.push_back("error");
  }
  expect_header(c, want);

  std::vector<std::array<long, 3>> idx;
  idx.reserve(c.rows.size());
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const int ln = static_cast<int>(r) + 2;
    idx.push_back({inum(c.rows[r][0], ln), inum(c.rows[r][1], ln), three ? inum(c.rows[r][2], ln) : 0});
  }
  FieldTable t;
  t.dims = dims_from(idx);
  for (auto& f : t.coord) f = ScalarField(t.dims);
  t.phi = ScalarField(t.dims);
  if (has_exact) t.exact = ScalarField(t.dims);
  const std::size_t off = three ? 3 : 2;
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const int ln = static_cast<int>(r) + 2;
    const auto& row = c.rows[r];
    const std::size_t p = t.dims.index(idx[r][0], idx[r][1], idx[r][2]);
    for (std::size_t m = 0; m < off; ++m) t.coord[m][p] = num(row[off + m], ln);
    t.phi[p] = num(row[2 * off], ln);
    if (has_exact) (*t.exact)[p] = num(row[2 * off + 1], ln);
  }
  return t;
}

CurvilinearGrid read_grid_csv(std::istream& is) {
  const Csv c = read_csv(is);
  const bool three = c.header.size() == 7;
  expect_header(c, three ? std::vector<std::string>{"i", "j", "k", "x", "y", "z", "J"}
                         : std::vector<std::string>{"i", "j", "x", "y", "J"});
  std::vector<std::array<long, 3>> idx;
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const int ln = static_cast<int>(r) + 2;
    idx.push_back({inum(c.rows[r][0], ln), inum(c.rows[r][1], ln), three ? inum(c.rows[r][2], ln) : 0});
  }
  CurvilinearGrid g;
  g.dims = dims_from(idx);
  for (auto& f : g.coord) f = ScalarField(g.dims);
  g.jacobian = ScalarField(g.dims);
  const std::size_t off = three ? 3 : 2;
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const int ln = static_cast<int>(r) + 2;
    const std::size_t p = g.dims.index(idx[r][0], idx[r][1], idx[r][2]);
    for (std::size_t m = 0; m < off; ++m) g.coord[m][p] = num(c.rows[r][off + m], ln);
    g.jacobian[p] = num(c.rows[r][2 * off], ln);
  }
  return g;
}

void write_vtk(std::ostream& os, const CurvilinearGrid& grid, const ScalarField& phi, const ScalarField* exact) {
  const Dims& d = grid.dims;
  if (phi.dims() != d || (exact && exact->dims() != d))
    throw Error(ErrorKind::DimensionMismatch, "field dims differ from grid");
  os << "# vtk DataFile Version 3.0\nwall distance\nASCII\nDATASET STRUCTURED_GRID\n";
  os << "DIMENSIONS " << d.ni << ' ' << d.nj << ' ' << d.nk << '\n';
  os << "POINTS " << d.size() << " double\n";
  for (std::size_t p = 0; p < d.size(); ++p)
    os << fmt(grid.coord[0][p]) << ' ' << fmt(grid.coord[1][p]) << ' ' << fmt(grid.coord[2][p]) << '\n';
  os << "POINT_DATA " << d.size() << '\n';
  auto scalars = [&](const char* name, auto&& value) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t p = 0; p < d.size(); ++p) os << fmt(value(p)) << '\n';
  };
  scalars("phi", [&](std::size_t p) { return phi[p]; });
  if (exact) {
    scalars("exact", [&](std::size_t p) { return (*exact)[p]; });
    scalars("error", [&](std::size_t p) { return phi[p] - (*exact)[p]; });
  }
  if (!os) throw Error(ErrorKind::Io, "VTK write failed");
}

void write_history_csv(std::ostream& os, const SolveReport& r) {
  os << "iter,max_residual,l2,wall_seconds\n";
  double t = 0.0;
  for (std::size_t n = 0; n < r.residual_history.size(); ++n) {
    if (n < r.iter_seconds.size()) t += r.iter_seconds[n];
    os << n + 1 << ',' << fmt(r.residual_history[n]) << ',';
    if (n < r.l2_history.size()) os << fmt(r.l2_history[n]);
    os << ',' << fmt(t) << '\n';
  }
  if (!os) throw Error(ErrorKind::Io, "history CSV write failed");
}

HistoryTable read_history_csv(std::istream& is) {
  const Csv c = read_csv(is);
  expect_header(c, {"iter", "max_residual", "l2", "wall_seconds"});
  HistoryTable h;
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const int ln = static_cast<int>(r) + 2;
    const auto& row = c.rows[r];
    h.iter.push_back(static_cast<int>(inum(row[0], ln)));
    h.max_residual.push_back(num(row[1], ln));
    if (!row[2].empty()) h.l2.push_back(num(row[2], ln));
    h.wall_seconds.push_back(num(row[3], ln));
  }
  return h;
}

void write_histogram_csv(std::ostream& os, const ErrorHistogram& h) {
  os << "bin_left,bin_right,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b)
    os << fmt(h.bin_edges[b]) << ',' << fmt(h.bin_edges[b + 1]) << ',' << h.counts[b] << '\n';
  if (!os) throw Error(ErrorKind::Io, "histogram CSV write failed");
}

ErrorHistogram read_histogram_csv(std::istream& is) {
  const Csv c = read_csv(is);
  expect_header(c, {"bin_left", "bin_right", "count"});
  ErrorHistogram h;
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const int ln = static_cast<int>(r) + 2;
    const double left = num(c.rows[r][0], ln);
    if (r == 0) h.bin_edges.push_back(left);
    else if (left != h.bin_edges.back()) bad("histogram bins are not contiguous", ln);
    h.bin_edges.push_back(num(c.rows[r][1], ln));
    h.counts.push_back(inum(c.rows[r][2], ln));
  }
  return h;
}

void write_summary(std::ostream& os, const RunSummary& s) {
  nlohmann::ordered_json j;
  j["case"] = s.case_name;
  j["formulation"] = s.formulation;
  j["scheme"] = s.scheme;
  j["grid"] = s.grid;
  j["iters"] = s.iters;
  j["converged"] = s.converged;
  j["l2"] = s.l2;
  j["max_pct_err"] = s.max_pct_err;
  j["sec_per_100"] = s.sec_per_100;
  os << j.dump(2) << '\n';
  if (!os) throw Error(ErrorKind::Io, "summary write failed");
}

RunSummary read_summary(std::istream& is) {
  try {
    const auto j = nlohmann::json::parse(is);
    RunSummary s;
    s.case_name = j.at("case").get<std::string>();
    s.formulation = j.at("formulation").get<std::string>();
    s.scheme = j.at("scheme").get<std::string>();
    s.grid = j.at("grid").get<std::string>();
    s.iters = j.at("iters").get<int>();
    s.converged = j.value("converged", false);
    s.l2 = j.at("l2").get<double>();
    s.max_pct_err = j.at("max_pct_err").get<double>();
    s.sec_per_100 = j.at("sec_per_100").get<double>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("bad summary: ") + e.what());
  }
}

void write_polylines_csv(std::ostream& os, const std::vector<LevelPolylines>& sets) {
  os << "level,polyline_id,vertex_index,x,y\n";
  for (const auto& s : sets) {
    int id = 0;
    for (const auto& pl : s.lines) {
      std::size_t n = pl.points.size();
      const std::size_t m = pl.closed && n ? n + 1 : n;
      for (std::size_t v = 0; v < m; ++v) {
        const auto& q = pl.points[v % n];
        os << fmt(s.level) << ',' << id << ',' << v << ',' << fmt(q[0]) << ',' << fmt(q[1]) << '\n';
      }
      ++id;
    }
  }
  if (!os) throw Error(ErrorKind::Io, "polyline CSV write failed");
}

std::vector<LevelPolylines> read_polylines_csv(std::istream& is) {
  const Csv c = read_csv(is);
  expect_header(c, {"level", "polyline_id", "vertex_index", "x", "y"});
  std::vector<LevelPolylines> out;
  long last_id = -1;
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const int ln = static_cast<int>(r) + 2;
    const auto& row = c.rows[r];
    const double level = num(row[0], ln);
    const long id = inum(row[1], ln), v = inum(row[2], ln);
    if (out.empty() || out.back().level != level) {
      out.push_back({level, {}});
      last_id = -1;
    }
    auto& lines = out.back().lines;
    if (id != last_id) {
      if (v != 0) bad("polyline does not start at vertex 0", ln);
      lines.push_back({});
      last_id = id;
    } else if (v != static_cast<long>(lines.back().points.size())) {
      bad("vertex index out of order", ln);
    }
    lines.back().points.push_back({num(row[3], ln), num(row[4], ln)});
  }
  for (auto& s : out)
    for (auto& pl : s.lines)
      if (pl.points.size() > 2 && pl.points.front() == pl.points.back()) {
        pl.points.pop_back();
        pl.closed = true;
      }
  return out;
}

void write_perimeter_csv(std::ostream& os, const std::vector<PerimeterRow>& rows) {
  os << "t,level,perimeter,Pc\n";
  for (const auto& r : rows) {
    os << fmt(r.t) << ',' << fmt(r.level) << ',' << fmt(r.perimeter) << ',';
    if (r.pc) os << fmt(*r.pc);
    os << '\n';
  }
  if (!os) throw Error(ErrorKind::Io, "perimeter CSV write failed");
}

std::vector<PerimeterRow> read_perimeter_csv(std::istream& is) {
  const Csv c = read_csv(is);
  expect_header(c, {"t", "level", "perimeter", "Pc"});
  std::vector<PerimeterRow> out;
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const int ln = static_cast<int>(r) + 2;
    const auto& row = c.rows[r];
    PerimeterRow p{num(row[0], ln), num(row[1], ln), num(row[2], ln), std::nullopt};
    if (!row[3].empty()) p.pc = num(row[3], ln);
    out.push_back(p);
  }
  return out;
}

void write_frames_csv(std::ostream& os, const std::vector<FrameRow>& rows) {
  os << "t,iters,converged,l2,max_pct_err\n";
  for (const auto& r : rows)
    os << fmt(r.t) << ',' << r.iters << ',' << (r.converged ? 1 : 0) << ',' << fmt(r.l2) << ','
       << fmt(r.max_pct_err) << '\n';
  if (!os) throw Error(ErrorKind::Io, "frame CSV write failed");
}

std::vector<FrameRow> read_frames_csv(std::istream& is) {
  const Csv c = read_csv(is);
  expect_header(c, {"t", "iters", "converged", "l2", "max_pct_err"});
  std::vector<FrameRow> out;
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const int ln = static_cast<int>(r) + 2;
    const auto& row = c.rows[r];
    out.push_back({num(row[0], ln), static_cast<int>(inum(row[1], ln)), inum(row[2], ln) != 0, num(row[3], ln),
                   num(row[4], ln)});
  }
  return out;
}

void finish_ratios(std::vector<CompareRow>& rows) {
  if (rows.empty()) return;
  const RunSummary& a = rows[0].summary;
  for (auto& r : rows) {
    r.l2_first_over_row = a.l2 / r.summary.l2;
    r.sec_row_over_first = r.summary.sec_per_100 / a.sec_per_100;
    r.iters_row_over_first = static_cast<double>(r.summary.iters) / a.iters;
  }
}

namespace {
const std::vector<std::string> kCompareHeader{"label", "case", "formulation", "scheme", "grid", "iters",
                                              "converged", "l2", "max_pct_err", "sec_per_100",
                                              "l2_first_over_row", "sec_row_over_first", "iters_row_over_first"};
}

void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows) {
  for (std::size_t k = 0; k < kCompareHeader.size(); ++k) os << (k ? "," : "") << kCompareHeader[k];
  os << '\n';
  for (const auto& r : rows) {
    const auto& s = r.summary;
    if (r.label.find(',') != std::string::npos) throw Error(ErrorKind::Io, "label contains a comma");
    os << r.label << ',' << s.case_name << ',' << s.formulation << ',' << s.scheme << ',' << s.grid << ','
       << s.iters << ',' << (s.converged ? 1 : 0) << ',' << fmt(s.l2) << ',' << fmt(s.max_pct_err) << ','
       << fmt(s.sec_per_100) << ',' << fmt(r.l2_first_over_row) << ',' << fmt(r.sec_row_over_first) << ','
       << fmt(r.iters_row_over_first) << '\n';
  }
  if (!os) throw Error(ErrorKind::Io, "compare CSV write failed");
}

std::vector<CompareRow> read_compare_csv(std::istream& is) {
  const Csv c = read_csv(is);
  expect_header(c, kCompareHeader);
  std::vector<CompareRow> out;
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const int ln = static_cast<int>(r) + 2;
    const auto& row = c.rows[r];
    CompareRow x;
    x.label = row[0];
    x.summary = {row[1], row[2], row[3], row[4], static_cast<int>(inum(row[5], ln)), inum(row[6], ln) != 0,
                 num(row[7], ln), num(row[8], ln), num(row[9], ln)};
    x.l2_first_over_row = num(row[10], ln);
    x.sec_row_over_first = num(row[11], ln);
    x.iters_row_over_first = num(row[12], ln);
    out.push_back(x);
  }
  return out;
}

void write_compare_table(std::ostream& os, const std::vector<CompareRow>& rows) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-20s %-13s %-4s %7s %11s %10s %10s %9s %9s\n", "label", "formulation", "scheme",
                "iters", "l2", "max_pct", "sec/100", "l2 gain", "sec ratio");
  os << buf;
  for (const auto& r : rows) {
    const auto& s = r.summary;
    std::snprintf(buf, sizeof buf, "%-20s %-13s %-4s %7d %11.4e %10.4f %10.4f %9.3f %9.3f%s\n", r.label.c_str(),
                  s.formulation.c_str(), s.scheme.c_str(), s.iters, s.l2, s.max_pct_err, s.sec_per_100,
                  r.l2_first_over_row, r.sec_row_over_first, s.converged ? "" : "  (not converged)");
    os << buf;
  }
}

}  // namespace walldist
