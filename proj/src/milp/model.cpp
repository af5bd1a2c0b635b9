#include "mcfod/milp/model.hpp"

namespace mcfod::milp {

double Row::activity(const std::vector<double>& x) const {
  double s = 0;
  for (auto [v, c] : coefs) s += c * x[v];
  return s;
}

double Row::violation(const std::vector<double>& x) const {
  double a = activity(x);
  switch (sense) {
    case Sense::LE: return std::max(0.0, a - rhs);
    case Sense::GE: return std::max(0.0, rhs - a);
    case Sense::EQ: return std::abs(a - rhs);
  }
  return 0;
}

size_t MilpModel::KeyHash::operator()(const VarKey& k) const {
  size_t h = static_cast<size_t>(k.fam);
  for (int v : {k.r, k.i, k.j, k.k, k.l}) h = h * 1000003u ^ static_cast<size_t>(v + 1);
  return h;
}

namespace {

bool mps_safe(const std::string& s) {
  if (s.empty() || s.size() > 255) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
  return true;
}

}  // namespace

int MilpModel::add_var(Variable v) {
  if (!mps_safe(v.name)) throw Error("milp: unusable variable name '" + v.name + "'");
  int idx = static_cast<int>(vars_.size());
  if (!by_name_.emplace(v.name, idx).second) throw Error("milp: duplicate variable name '" + v.name + "'");
  if (!by_key_.emplace(v.key, idx).second) throw Error("milp: duplicate variable key for '" + v.name + "'");
  vars_.push_back(std::move(v));
  return idx;
}

int MilpModel::add_binary(std::string name, double obj, VarKey key) {
  return add_var({std::move(name), 0.0, 1.0, VarType::Binary, obj, key});
}

int MilpModel::add_continuous(std::string name, double lb, double ub, double obj, VarKey key) {
  return add_var({std::move(name), lb, ub, VarType::Continuous, obj, key});
}

int MilpModel::find(const std::string& n) const {
  auto it = by_name_.find(n);
  return it == by_name_.end() ? -1 : it->second;
}

int MilpModel::find(const VarKey& key) const {
  auto it = by_key_.find(key);
  return it == by_key_.end() ? -1 : it->second;
}

double MilpModel::objective(const std::vector<double>& x) const {
  double s = objective_constant;
  for (size_t v = 0; v < vars_.size(); ++v) s += vars_[v].obj * x[v];
  return s;
}

void MilpModel::validate() const {
  std::unordered_map<std::string, int> row_names;
  auto check = [&](const Row& r) {
    if (!mps_safe(r.name)) throw Error("milp: unusable row name '" + r.name + "'");
    if (!row_names.emplace(r.name, 0).second) throw Error("milp: duplicate row name '" + r.name + "'");
    for (auto [v, c] : r.coefs)
      if (v < 0 || v >= var_count() || !std::isfinite(c))
        throw Error("milp: row '" + r.name + "' has a bad coefficient");
  };
  for (const auto& r : rows_) check(r);
  for (const auto& r : deferred_) check(r);
}

std::string to_string(Family f) {
  switch (f) {
    case Family::S: return "s";
    case Family::A: return "a";
    case Family::X: return "x";
    case Family::F: return "f";
    case Family::T: return "t";
    case Family::FC: return "F";
    case Family::TC: return "T";
    case Family::PI: return "pi";
  }
  return "?";
}

}  // namespace mcfod::milp
