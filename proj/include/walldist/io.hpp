#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "walldist/levelset.hpp"
#include "walldist/metrics.hpp"

namespace walldist {

// Field CSV: i,j[,k],x,y[,z],phi[,exact,error]

struct FieldTable {
  Dims dims;
  std::array<ScalarField, 3> coord;
  ScalarField phi;
  std::optional<ScalarField> exact;
};

void write_field_csv(std::ostream& os, const CurvilinearGrid& grid, const ScalarField& phi,
                     const ScalarField* exact = nullptr);
FieldTable read_field_csv(std::istream& is);

/// Reads the grid dump written by write_grid_csv: coordinates and J.
CurvilinearGrid read_grid_csv(std::istream& is);

/// Legacy ASCII VTK structured grid with phi (and exact, error) point data.
void write_vtk(std::ostream& os, const CurvilinearGrid& grid, const ScalarField& phi,
               const ScalarField* exact = nullptr);

// History CSV: iter,max_residual,l2,wall_seconds (l2 empty when not tracked)

struct HistoryTable {
  std::vector<int> iter;
  std::vector<double> max_residual, l2, wall_seconds;
};

void write_history_csv(std::ostream& os, const SolveReport& r);
HistoryTable read_history_csv(std::istream& is);

// Histogram CSV: bin_left,bin_right,count

void write_histogram_csv(std::ostream& os, const ErrorHistogram& h);
ErrorHistogram read_histogram_csv(std::istream& is);

/// One record per run, written as JSON.
struct RunSummary {
  std::string case_name;
  std::string formulation;
  std::string scheme;
  std::string grid;  // "NIxNJ[xNK]"
  int iters = 0;
  bool converged = false;
  double l2 = 0.0;
  double max_pct_err = 0.0;
  double sec_per_100 = 0.0;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

void write_summary(std::ostream& os, const RunSummary& s);
RunSummary read_summary(std::istream& is);

// Polyline CSV: level,polyline_id,vertex_index,x,y
// Closed polylines are written with the first vertex repeated at the end.

struct LevelPolylines {
  double level = 0.0;
  std::vector<Polyline> lines;
};

void write_polylines_csv(std::ostream& os, const std::vector<LevelPolylines>& sets);
std::vector<LevelPolylines> read_polylines_csv(std::istream& is);

// Perimeter history CSV: t,level,perimeter,Pc (Pc empty when not computed)

struct PerimeterRow {
  double t = 0.0;
  double level = 0.0;
  double perimeter = 0.0;
  std::optional<double> pc;
};

void write_perimeter_csv(std::ostream& os, const std::vector<PerimeterRow>& rows);
std::vector<PerimeterRow> read_perimeter_csv(std::istream& is);

// Unsteady frame CSV: t,iters,converged,l2,max_pct_err

struct FrameRow {
  double t = 0.0;
  int iters = 0;
  bool converged = false;
  double l2 = 0.0;
  double max_pct_err = 0.0;
};

void write_frames_csv(std::ostream& os, const std::vector<FrameRow>& rows);
std::vector<FrameRow> read_frames_csv(std::istream& is);

// Comparison CSV: the summary fields per run plus
// l2_first_over_row, sec_row_over_first, iters_row_over_first.

struct CompareRow {
  std::string label;
  RunSummary summary;
  double l2_first_over_row = 1.0;
  double sec_row_over_first = 1.0;
  double iters_row_over_first = 1.0;
};

/// Fills the ratio columns against rows[0].
void finish_ratios(std::vector<CompareRow>& rows);
void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows);
std::vector<CompareRow> read_compare_csv(std::istream& is);
/// Fixed-width text version for the terminal.
void write_compare_table(std::ostream& os, const std::vector<CompareRow>& rows);

}  // namespace walldist
