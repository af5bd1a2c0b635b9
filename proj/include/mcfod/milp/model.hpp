#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mcfod/common.hpp"

namespace mcfod::milp {

enum class VarType { Continuous, Binary };
enum class Sense { LE, EQ, GE };

// Structured identity of a model variable. Unused fields stay -1.
//   S  s^r                     r
//   A  a_{node,k}              i = node id, k
//   X  x^r_ij                  r, i, j = hub positions
//   F  f^{rk}_i / T t^{rk}_i   r, k, i = hub position
//   FC cost F^r_i (i = -1 for the aggregated IF variable), TC likewise
//   PI pi^r_kl                 r, k, l; i, j = witness hub positions
enum class Family { S, A, X, F, T, FC, TC, PI };

struct VarKey {
  Family fam = Family::S;
  int r = -1, i = -1, j = -1, k = -1, l = -1;

  friend bool operator==(const VarKey&, const VarKey&) = default;
};

struct Variable {
  std::string name;
  double lb = 0;
  double ub = kInf;
  VarType type = VarType::Continuous;
  double obj = 0;  // maximization coefficient
  VarKey key;
};

struct Row {
  std::string name;
  Sense sense = Sense::LE;
  double rhs = 0;
  std::vector<std::pair<int, double>> coefs;  // (variable index, coefficient)

  double activity(const std::vector<double>& x) const;
  // Amount by which x violates the row, 0 when satisfied.
  double violation(const std::vector<double>& x) const;
};

class MilpModel {
 public:
  std::string name = "mcfod";

  int add_var(Variable v);
  int add_binary(std::string name, double obj, VarKey key);
  int add_continuous(std::string name, double lb, double ub, double obj, VarKey key);
  void add_row(Row r) { rows_.push_back(std::move(r)); }
  void add_deferred(Row r) { deferred_.push_back(std::move(r)); }
  void clear_deferred() { deferred_.clear(); }

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<Row>& deferred_rows() const { return deferred_; }
  int var_count() const { return static_cast<int>(vars_.size()); }
  int row_count() const { return static_cast<int>(rows_.size()); }

  // -1 when absent.
  int find(const std::string& name) const;
  int find(const VarKey& key) const;

  double objective_constant = 0;
  double objective(const std::vector<double>& x) const;

  // Throws when a row references a missing variable or a name is unusable.
  void validate() const;

  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

 private:
  struct KeyHash {
    size_t operator()(const VarKey& k) const;
  };
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  std::vector<Row> deferred_;
  std::unordered_map<std::string, int> by_name_;
  std::unordered_map<VarKey, int, KeyHash> by_key_;
};

std::string to_string(Family f);

}  // namespace mcfod::milp
