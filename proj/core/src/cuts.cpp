#include "savsddp/cuts.hpp"

#include <cmath>

namespace savsddp::sddp {

bool CutPool::append_filtered(int stage, Cut c) {
  auto& list = per_stage_[stage];
  for (Cut& existing : list) {
    if (existing.gradient.size() != c.gradient.size()) continue;
    bool same = true;
    for (size_t i = 0; i < c.gradient.size() && same; ++i) {
      if (std::abs(existing.gradient[i] - c.gradient[i]) > 1e-12) same = false;
    }
    if (!same) continue;
    if (c.intercept <= existing.intercept) return false;
    existing.intercept = c.intercept;
    return true;
  }
  list.push_back(std::move(c));
  return true;
}

}  // namespace savsddp::sddp
