#include "csk/tables.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "csk/errors.hpp"
#include "csk/extend.hpp"
#include "csk/family.hpp"
#include "csk/iterate.hpp"

namespace csk {

Quantity quantity_from_string(const std::string& name) {
  if (name == "density") return Quantity::density;
  if (name == "member_density") return Quantity::member_density;
  if (name == "pv") return Quantity::pv;
  if (name == "variance") return Quantity::variance;
  if (name == "mean_map") return Quantity::mean_map;
  if (name == "v1") return Quantity::v1;
  if (name == "atom_weight") return Quantity::atom_weight;
  throw UsageError("unknown quantity '" + name + "'");
}

std::string quantity_to_string(Quantity q) {
  switch (q) {
    case Quantity::density: return "density";
    case Quantity::member_density: return "member_density";
    case Quantity::pv: return "pv";
    case Quantity::variance: return "variance";
    case Quantity::mean_map: return "mean_map";
    case Quantity::v1: return "v1";
    case Quantity::atom_weight: return "atom_weight";
  }
  return "density";
}

Grid Grid::parse(const std::string& text) {
  Grid g;
  const std::size_t c1 = text.find(':');
  const std::size_t c2 = c1 == std::string::npos ? std::string::npos
                                                 : text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw UsageError("grid must be start:step:stop, got '" + text + "'");
  auto parse_real = [&](const std::string& piece) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(piece, &used);
    } catch (const std::exception&) {
      throw UsageError("bad grid component '" + piece + "'");
    }
    if (used != piece.size())
      throw UsageError("bad grid component '" + piece + "'");
    return v;
  };
  g.start = parse_real(text.substr(0, c1));
  g.step = parse_real(text.substr(c1 + 1, c2 - c1 - 1));
  g.stop = parse_real(text.substr(c2 + 1));
  if (!(g.step > 0.0)) throw UsageError("grid step must be > 0");
  if (g.stop < g.start) throw UsageError("grid stop must be >= start");
  return g;
}

std::vector<double> Grid::points() const {
  std::vector<double> pts;
  const double slack = 1e-9 * std::max({1.0, std::abs(start), std::abs(stop)});
  for (int i = 0;; ++i) {
    const double x = start + i * step;
    if (x > stop + slack) break;
    pts.push_back(x);
    if (i > 1000000) throw UsageError("grid has too many points");
  }
  return pts;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Table make_table(const TableRequest& request, const QuadratureConfig& cfg) {
  const Law law = Law::from_spec(request.law_spec);
  Table table;
  table.value_name = quantity_to_string(request.quantity);

  switch (request.quantity) {
    case Quantity::density:
    case Quantity::member_density:
      table.abscissa_name = "x";
      break;
    case Quantity::v1:
      table.abscissa_name = "mbar";
      break;
    default:
      table.abscissa_name = "m";
      break;
  }

  // One evaluator closure per quantity; rows catch domain violations and
  // carry the reason instead of aborting the table.
  std::function<double(double)> eval;
  switch (request.quantity) {
    case Quantity::density: {
      const Measure mu = law.measure();
      eval = [mu](double x) { return evaluate_density(mu, x); };
      break;
    }
    case Quantity::member_density: {
      if (!request.m) throw UsageError("member_density needs --m");
      const CskFamily fam = build_family(law, cfg);
      const Measure q = fam.member(*request.m);
      eval = [q](double x) { return evaluate_density(q, x); };
      break;
    }
    case Quantity::pv: {
      const CskFamily fam = build_family(law, cfg);
      eval = [fam](double m) { return fam.pseudo_variance(m); };
      break;
    }
    case Quantity::variance: {
      const CskFamily fam = build_family(law, cfg);
      eval = [fam](double m) { return fam.variance(m); };
      break;
    }
    case Quantity::mean_map: {
      if (!request.m1) throw UsageError("mean_map needs --m1");
      const CskFamily fam = build_family(law, cfg);
      const IteratedFamily it = iterate_family(fam, *request.m1);
      eval = [it](double m) { return it.mean_map(m); };
      break;
    }
    case Quantity::v1: {
      if (!request.m1) throw UsageError("v1 needs --m1");
      const CskFamily fam = build_family(law, cfg);
      const IteratedFamily it = iterate_family(fam, *request.m1);
      eval = [it](double mbar) { return it.variance(mbar); };
      break;
    }
    case Quantity::atom_weight: {
      const CskFamily fam = build_family(law, cfg);
      const ExtendedFamily ext = build_extended(fam);
      eval = [ext](double m) { return ext.atom_weight(m); };
      break;
    }
  }

  for (double x : request.grid.points()) {
    TableRow row;
    row.abscissa = x;
    try {
      row.value = eval(x);
    } catch (const DomainError& e) {
      row.reason = e.what();
    } catch (const NoExtensionError& e) {
      row.reason = e.what();
    }
    table.rows.push_back(row);
  }
  return table;
}

void write_csv(const Table& table, std::ostream& out) {
  out << table.abscissa_name << ',' << table.value_name << ",reason\n";
  for (const TableRow& row : table.rows) {
    out << format_number(row.abscissa) << ',';
    if (row.value)
      out << format_number(*row.value);
    else
      out << "null";
    out << ',' << row.reason << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  nlohmann::json arr = nlohmann::json::array();
  for (const TableRow& row : table.rows) {
    nlohmann::json obj;
    obj[table.abscissa_name] = row.abscissa;
    if (row.value)
      obj[table.value_name] = *row.value;
    else
      obj[table.value_name] = nullptr;
    obj["reason"] = row.reason;
    arr.push_back(obj);
  }
  out << arr.dump(2) << '\n';
}

}  // namespace csk
