#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mcfod {

enum class Variant { Free, FixedOptimistic, FixedRelaxed };
enum class ResponseMode { Optimistic, Relaxed };
enum class Formulation { EP, EF, IF, IP };

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr int kNone = -1;  // unallocated non-hub / missing hub

// Relative tolerance on money values. Everything compares through these.
inline constexpr double kTol = 1e-9;

inline double tol_scale(double a, double b) {
  return kTol * std::max({1.0, std::abs(a), std::abs(b)});
}
inline bool approx_eq(double a, double b) {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::abs(a - b) <= tol_scale(a, b);
}
inline bool approx_ge(double a, double b) {
  if (a >= b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  return a >= b - tol_scale(a, b);
}
inline bool approx_gt(double a, double b) { return !approx_ge(b, a); }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ParseError : public Error {
 public:
  using Error::Error;
};
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};
class SolverError : public Error {
 public:
  using Error::Error;
};

std::string to_string(Variant v);
std::string to_string(ResponseMode m);
std::string to_string(Formulation f);
Variant parse_variant(std::string_view s);
Formulation parse_formulation(std::string_view s);

inline ResponseMode mode_of(Variant v) {
  return v == Variant::FixedRelaxed ? ResponseMode::Relaxed
                                    : ResponseMode::Optimistic;
}
inline bool is_fixed(Variant v) { return v != Variant::Free; }

}  // namespace mcfod
