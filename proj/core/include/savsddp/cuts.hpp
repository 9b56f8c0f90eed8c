#pragma once

#include <vector>

namespace savsddp::sddp {

/// Affine lower bound g.x + beta on the expected cost-to-go of bounds_stage,
/// expressed over the outgoing state of stage bounds_stage - 1.
struct Cut {
  int bounds_stage = 0;
  std::vector<double> gradient;
  double intercept = 0.0;
};

/// Per-stage append-only cut lists. The list at index t holds cuts usable in
/// stage-t subproblems (they bound the expected cost-to-go of stage t+1) and
/// is shared by all noise realizations of that stage.
class CutPool {
 public:
  CutPool() = default;
  explicit CutPool(int num_stages) : per_stage_(num_stages) {}

  void reset(int num_stages) {
    per_stage_.assign(num_stages, {});
  }

  int num_stages() const { return static_cast<int>(per_stage_.size()); }

  const std::vector<Cut>& at(int stage) const { return per_stage_[stage]; }

  void append(int stage, Cut c) { per_stage_[stage].push_back(std::move(c)); }

  /// Append with the optional dominance filter: a cut whose gradient matches
  /// an existing one keeps only the larger intercept. Returns false when the
  /// new cut was dominated and dropped.
  bool append_filtered(int stage, Cut c);

  int total_cuts() const {
    int n = 0;
    for (const auto& v : per_stage_) n += static_cast<int>(v.size());
    return n;
  }

 private:
  std::vector<std::vector<Cut>> per_stage_;
};

}  // namespace savsddp::sddp
