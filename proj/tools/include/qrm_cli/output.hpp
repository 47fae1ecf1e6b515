#pragma once

// Tabular and graphical output: CSV, JSON lines, key=value reports and SVG plots.

#include "qrm/cycle.hpp"
#include "qrm/scan.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qrm::cli {

/// A file could not be created or written; what() carries the OS message.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Empty cells stand for undefined values (e.g. eta of a degenerate cycle).
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> comments;  // written as "# ..." lines before the CSV header
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

Cell optional_cell(const std::optional<double>& value);

/// Columns: g1,g2,T_C,T_H,ratio,backend,Q_AB,Q_BC,Q_CD,Q_DA,W,eta,eta_carnot,sigma1,sigma2.
const std::vector<std::string>& cycle_columns();
Table cycle_table(const std::vector<CycleResult>& results);

/// index,g,E_0..E_{k-1},gap,n_max_used,converged,max_shift,gap_n_max,gap_converged.
Table spectrum_table(const std::vector<SpectrumRow>& rows, int k);

/// ratio,g,tol,n_max_used,max_shift,converged,work.
Table convergence_table(const std::vector<ConvergenceRow>& rows);

void write_csv(std::ostream& out, const Table& table);
/// One JSON object per row with the CSV column names as keys; comments are dropped.
void write_jsonl(std::ostream& out, const Table& table);

using Report = std::vector<std::pair<std::string, Cell>>;
void write_report(std::ostream& out, const Report& report);
void write_report_json(std::ostream& out, const Report& report);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    std::optional<double> horizontal;  // Carnot efficiency, drawn as a gray solid line
    std::optional<double> vertical;    // critical coupling marker, dashed
};

void write_svg(std::ostream& out, const Plot& plot);

/// Writes `content` to `path`, throwing OutputError with the OS message on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace qrm::cli
