#include "mcfod/milp/mps.hpp"

#include <charconv>

namespace mcfod::milp {

std::string format_number(double v) {
  if (v == 0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string emit_mps(const MilpModel& model, const MpsOptions& opts) {
  model.validate();
  const auto& vars = model.variables();
  const auto& rows = model.rows();
  std::string out;
  out += "NAME " + model.name + "\n";
  if (opts.objsense_max) out += "OBJSENSE\n    MAX\n";
  out += "ROWS\n N obj\n";
  for (const auto& r : rows) {
    const char* s = r.sense == Sense::LE ? " L " : r.sense == Sense::GE ? " G " : " E ";
    out += s + r.name + "\n";
  }

  // Column-major view of the rows, keeping row order within each column.
  std::vector<std::vector<std::pair<int, double>>> cols(vars.size());
  for (size_t ri = 0; ri < rows.size(); ++ri)
    for (auto [v, c] : rows[ri].coefs)
      if (c != 0) cols[v].emplace_back(static_cast<int>(ri), c);

  if (!vars.empty()) {
    out += "COLUMNS\n";
    bool in_int = false;
    int marker = 0;
    for (size_t v = 0; v < vars.size(); ++v) {
      bool is_int = vars[v].type == VarType::Binary;
      if (is_int != in_int) {
        out += "    MARKER" + std::to_string(marker++) + " 'MARKER' " + (is_int ? "'INTORG'\n" : "'INTEND'\n");
        in_int = is_int;
      }
      const std::string& n = vars[v].name;
      double obj = opts.objsense_max ? vars[v].obj : -vars[v].obj;
      bool wrote = false;
      if (obj != 0) {
        out += "    " + n + " obj " + format_number(obj) + "\n";
        wrote = true;
      }
      for (auto [ri, c] : cols[v]) {
        out += "    " + n + " " + rows[ri].name + " " + format_number(c) + "\n";
        wrote = true;
      }
      // A column must appear even when it has no entries.
      if (!wrote) out += "    " + n + " obj 0\n";
    }
    if (in_int) out += "    MARKER" + std::to_string(marker++) + " 'MARKER' 'INTEND'\n";
  }

  std::string rhs;
  for (const auto& r : rows)
    if (r.rhs != 0) rhs += "    RHS " + r.name + " " + format_number(r.rhs) + "\n";
  if (!rhs.empty()) out += "RHS\n" + rhs;

  std::string bounds;
  for (const auto& v : vars) {
    if (v.type == VarType::Binary) {
      bounds += " UP BND " + v.name + " 1\n";
      continue;
    }
    if (v.lb == -kInf && v.ub == kInf) {
      bounds += " FR BND " + v.name + "\n";
      continue;
    }
    if (v.lb == -kInf) bounds += " MI BND " + v.name + "\n";
    else if (v.lb != 0) bounds += " LO BND " + v.name + " " + format_number(v.lb) + "\n";
    if (v.ub != kInf) bounds += " UP BND " + v.name + " " + format_number(v.ub) + "\n";
  }
  if (!bounds.empty()) out += "BOUNDS\n" + bounds;
  out += "ENDATA\n";
  return out;
}

}  // namespace mcfod::milp
