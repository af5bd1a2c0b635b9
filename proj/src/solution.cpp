#include "mcfod/solution.hpp"

namespace mcfod {

FeeSchedule FeeSchedule::zeros(const Instance& inst) {
  FeeSchedule f;
  f.R_ = inst.commodity_count();
  f.h_ = inst.hub_count();
  f.p_.assign(static_cast<size_t>(f.R_) * f.h_, 0.0);
  f.q_.assign(static_cast<size_t>(f.R_) * f.h_, 0.0);
  f.has_p_.resize(f.R_);
  f.has_q_.resize(f.R_);
  for (int r = 0; r < f.R_; ++r) {
    f.has_p_[r] = !inst.origin_is_hub(r);
    f.has_q_[r] = !inst.dest_is_hub(r);
  }
  return f;
}

void FeeSchedule::set_p(int r, int hi, double v) {
  if (!has_p(r)) throw ValidationError("p[r=" + std::to_string(r + 1) + "]", "commodity origin is a hub");
  if (!(v >= 0) || !std::isfinite(v)) throw ValidationError("p[r=" + std::to_string(r + 1) + "]", "fee must be >= 0");
  p_[static_cast<size_t>(r) * h_ + hi] = v;
}

void FeeSchedule::set_q(int r, int hi, double v) {
  if (!has_q(r)) throw ValidationError("q[r=" + std::to_string(r + 1) + "]", "commodity destination is a hub");
  if (!(v >= 0) || !std::isfinite(v)) throw ValidationError("q[r=" + std::to_string(r + 1) + "]", "fee must be >= 0");
  q_[static_cast<size_t>(r) * h_ + hi] = v;
}

void FeeSchedule::validate(const Instance& inst) const {
  if (R_ != inst.commodity_count() || h_ != inst.hub_count())
    throw ValidationError("fees", "shape does not match instance");
  for (int r = 0; r < R_; ++r) {
    if (has_p(r) == inst.origin_is_hub(r))
      throw ValidationError("fees.p[r=" + std::to_string(r + 1) + "]", "presence does not match origin type");
    if (has_q(r) == inst.dest_is_hub(r))
      throw ValidationError("fees.q[r=" + std::to_string(r + 1) + "]", "presence does not match destination type");
  }
  for (size_t t = 0; t < p_.size(); ++t)
    if (!(p_[t] >= 0) || !(q_[t] >= 0)) throw ValidationError("fees", "negative fee");
}

}  // namespace mcfod
