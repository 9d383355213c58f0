#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "csk/law.hpp"
#include "csk/quadrature.hpp"

namespace csk {

enum class Quantity {
  density,
  member_density,
  pv,
  variance,
  mean_map,
  v1,
  atom_weight,
};

Quantity quantity_from_string(const std::string& name);
std::string quantity_to_string(Quantity q);

struct Grid {
  double start = 0.0;
  double step = 0.0;
  double stop = 0.0;
  // Parses "a:step:b"; step must be > 0 and a <= b.
  static Grid parse(const std::string& text);
  std::vector<double> points() const;
};

struct TableRequest {
  std::string law_spec;
  Quantity quantity = Quantity::density;
  Grid grid;
  std::optional<double> m;   // member_density
  std::optional<double> m1;  // mean_map, v1
};

struct TableRow {
  double abscissa = 0.0;
  std::optional<double> value;  // absent on domain violations
  std::string reason;           // nonempty iff value absent
};

struct Table {
  std::string abscissa_name;  // "x", "m" or "mbar"
  std::string value_name;
  std::vector<TableRow> rows;
};

Table make_table(const TableRequest& request,
                 const QuadratureConfig& cfg = {});

// CSV: header `abscissa,value,reason`; absent values print as `null`.
// JSON: array of objects with the same keys and null values. Both carry
// numbers at full precision (17 significant digits).
void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);

// 17-significant-digit rendering used by every emitter.
std::string format_number(double v);

}  // namespace csk
