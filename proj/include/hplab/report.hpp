#pragma once

// Tables, CSV/JSON serialization and a small SVG plot emitter.

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hplab/hp_scale.hpp"
#include "hplab/sequences.hpp"

namespace hplab {

using Cell = std::variant<std::string, double, long long>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  /// Index of a column, -1 when absent.
  int find(const std::string& name) const;
  /// Numeric value of a cell (strings are parsed; NaN on failure).
  double number(std::size_t row, int col) const;
};

/// 17 significant digits, "." decimal point; nan/inf spelled out.
std::string format_number(double x);

/// '.' decimals, 17 significant digits, LF line endings, RFC 4180 quoting.
std::string to_csv(const Table& t);
Table parse_csv(const std::string& text);

/// Array of row objects keyed by column name.
nlohmann::ordered_json to_json(const Table& t);

nlohmann::ordered_json to_json(const NormEstimate& e);
nlohmann::ordered_json to_json(const InterpCertificate& c);
nlohmann::ordered_json to_json(const FactorizationCertificate& c);

Table thmc1_table(const std::vector<Thmc1Row>& rows);
Table example317_table(const std::vector<Example317Ratio>& rows);

enum class PlotKind { RatioVsLogK, Decay, Spectrum };

PlotKind parse_plot_kind(const std::string& s);

/// ratio_vs_logk: every ratio* column against log k (from log_k, else kxx).
/// decay: ratio columns against j (or the first column), log y axis.
/// spectrum: the eigenvalue/value column against its index, log y axis.
/// Throws InputError for an empty table or missing columns.
std::string plot(const Table& t, PlotKind kind);

}  // namespace hplab
