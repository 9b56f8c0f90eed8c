#include "savsddp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <optional>

#include "savsddp/errors.hpp"

namespace savsddp::lp {

namespace {

enum VStat : std::uint8_t { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

// Leaving candidates must offer at least this pivot magnitude; anything
// smaller poisons the product-form inverse updates.
constexpr double kStabilityTol = 1e-7;

struct SingularBasis {};

double linf(const std::vector<double>& v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

/// Working state of one solve. Columns, bounds and costs are copied so the
/// phase-1 artificial machinery can extend them without touching the input.
class Worker {
 public:
  Worker(const LpProblem& p, const SimplexSolver::Options& opts, bool force_bland = false)
      : p_(p), opts_(opts), n_(p.num_vars()), m_(p.num_rows()), force_bland_(force_bland) {
    lo_.assign(p.lower().begin(), p.lower().end());
    up_.assign(p.upper().begin(), p.upper().end());
    cost_.assign(p.cost().begin(), p.cost().end());
    cols_.resize(n_);
    for (int i = 0; i < m_; ++i) {
      b_.push_back(p.row(i).rhs);
      for (const auto& [j, a] : p.row(i).coeffs) {
        if (a != 0.0) cols_[j].emplace_back(i, a);
      }
    }
    b_inf_ = linf(b_);
    feas_eps_ = opts_.feas_tol * (1.0 + b_inf_);
    val_.assign(n_, 0.0);
    stat_.assign(n_, kAtLower);
  }

  LpOutcome solve_cold() {
    setup_phase1();
    if (m_ > 0) {
      RunStatus rs = primal_loop();
      if (rs == RunStatus::PivotLimit) throw std::runtime_error("simplex: pivot limit hit in phase 1");
      double infeas = phase1_objective();
      if (infeas > feas_eps_) return finalize_status(LpStatus::Infeasible);
      drive_out_artificials();
    }
    enter_phase2();
    RunStatus rs = primal_loop();
    if (rs == RunStatus::PivotLimit) throw std::runtime_error("simplex: pivot limit hit in phase 2");
    if (rs == RunStatus::Unbounded) return finalize_status(LpStatus::Unbounded);
    return finalize_optimal();
  }

  /// Attempts a warm solve; nullopt means the caller should run cold.
  std::optional<LpOutcome> solve_warm(const BasisState& hint) {
    if (static_cast<int>(hint.basic.size()) != m_) return std::nullopt;
    if (!hint.at_upper.empty() && static_cast<int>(hint.at_upper.size()) != n_)
      return std::nullopt;
    std::vector<std::uint8_t> used(n_, 0);
    for (int j : hint.basic) {
      if (j < 0 || j >= n_ || used[j]) return std::nullopt;
      used[j] = 1;
    }
    basic_ = hint.basic;
    for (int j = 0; j < n_; ++j) {
      if (used[j]) {
        stat_[j] = kBasic;
      } else if (!hint.at_upper.empty() && hint.at_upper[j] && std::isfinite(up_[j])) {
        stat_[j] = kAtUpper;
        val_[j] = up_[j];
      } else {
        stat_[j] = kAtLower;
        val_[j] = lo_[j];
      }
    }
    phase1_ = false;
    if (!refactor()) return std::nullopt;

    const bool pf = primal_feasible();
    const bool df = dual_feasible();
    if (!pf && !df) return std::nullopt;
    if (!pf) {
      const RunStatus ds = dual_loop();
      if (ds == RunStatus::Infeasible || ds == RunStatus::PivotLimit) return std::nullopt;
    }
    // The primal loop re-prices from an exact refactorization before
    // declaring optimality, so every warm exit is self-verified.
    const RunStatus rs = primal_loop();
    if (rs == RunStatus::PivotLimit) return std::nullopt;
    if (rs == RunStatus::Unbounded) return finalize_status(LpStatus::Unbounded);
    if (residual_inf() > 10.0 * feas_eps_) return std::nullopt;
    return finalize_optimal();
  }

 private:
  enum class RunStatus { Optimal, Unbounded, Infeasible, PivotLimit };

  void setup_phase1() {
    phase1_ = true;
    for (int j = 0; j < n_; ++j) {
      stat_[j] = kAtLower;
      val_[j] = lo_[j];
    }
    if (m_ == 0) return;
    // Residual of the all-at-lower point decides each artificial's sign, so
    // the initial basis matrix is diag(+-1) and inverts trivially.
    std::vector<double> res = b_;
    for (int j = 0; j < n_; ++j) {
      if (val_[j] == 0.0) continue;
      for (const auto& [i, a] : cols_[j]) res[i] -= a * val_[j];
    }
    basic_.resize(m_);
    binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
    xb_.resize(m_);
    art_sign_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const double s = res[i] >= 0.0 ? 1.0 : -1.0;
      art_sign_[i] = s;
      cols_.push_back({{i, s}});
      lo_.push_back(0.0);
      up_.push_back(kInf);
      cost_.push_back(0.0);
      val_.push_back(std::abs(res[i]));
      stat_.push_back(kBasic);
      basic_[i] = n_ + i;
      binv_[static_cast<size_t>(i) * m_ + i] = s;
      xb_[i] = std::abs(res[i]);
    }
    phase_cost_.assign(cols_.size(), 0.0);
    for (int i = 0; i < m_; ++i) phase_cost_[n_ + i] = 1.0;
  }

  double phase1_objective() const {
    double obj = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] >= n_) obj += xb_[i];
    }
    return obj;
  }

  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basic_[r] < n_) continue;
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (stat_[j] == kBasic) continue;
        double alpha = 0.0;
        const double* brow = &binv_[static_cast<size_t>(r) * m_];
        for (const auto& [i, a] : cols_[j]) alpha += brow[i] * a;
        if (std::abs(alpha) > opts_.pivot_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) {
        // Redundant row: pin the artificial at zero and leave it basic.
        up_[basic_[r]] = 0.0;
        continue;
      }
      ftran(enter);
      apply_pivot(enter, r, 0.0, /*sigma=*/+1.0, /*leave_to_upper=*/false);
    }
  }

  void enter_phase2() {
    phase1_ = false;
    // Artificials may no longer move away from zero.
    for (size_t j = n_; j < cols_.size(); ++j) {
      lo_[j] = 0.0;
      up_[j] = 0.0;
      cost_[j] = 0.0;
      if (stat_[j] != kBasic) {
        stat_[j] = kAtLower;
        val_[j] = 0.0;
      }
    }
  }

  const std::vector<double>& active_cost() const { return phase1_ ? phase_cost_ : cost_; }

  bool refactor() {
    last_refactor_ = pivots_;
    if (m_ == 0) return true;
    // Gauss-Jordan on [B | I] with partial pivoting.
    const int m = m_;
    std::vector<double> w(static_cast<size_t>(m) * 2 * m, 0.0);
    for (int c = 0; c < m; ++c) {
      for (const auto& [i, a] : cols_[basic_[c]]) w[static_cast<size_t>(i) * 2 * m + c] = a;
    }
    for (int i = 0; i < m; ++i) w[static_cast<size_t>(i) * 2 * m + m + i] = 1.0;
    double scale = 1.0;
    for (int c = 0; c < m; ++c) {
      for (const auto& [i, a] : cols_[basic_[c]]) {
        (void)i;
        scale = std::max(scale, std::abs(a));
      }
    }
    for (int c = 0; c < m; ++c) {
      int piv = c;
      double best = std::abs(w[static_cast<size_t>(c) * 2 * m + c]);
      for (int i = c + 1; i < m; ++i) {
        double v = std::abs(w[static_cast<size_t>(i) * 2 * m + c]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < 1e-13 * scale) {
#ifdef SAVSDDP_SIMPLEX_DEBUG
        std::vector<int> sorted = basic_;
        std::sort(sorted.begin(), sorted.end());
        int dups = 0;
        for (size_t i = 1; i < sorted.size(); ++i)
          if (sorted[i] == sorted[i - 1]) ++dups;
        fprintf(stderr, "[refactor singular] m=%d col=%d best=%g scale=%g dups=%d phase1=%d pivots=%lld\n",
                m, c, best, scale, dups, (int)phase1_, pivots_);
#endif
        return false;
      }
      if (piv != c) {
        for (int k = 0; k < 2 * m; ++k)
          std::swap(w[static_cast<size_t>(piv) * 2 * m + k], w[static_cast<size_t>(c) * 2 * m + k]);
      }
      double* prow = &w[static_cast<size_t>(c) * 2 * m];
      const double invp = 1.0 / prow[c];
      for (int k = 0; k < 2 * m; ++k) prow[k] *= invp;
      for (int i = 0; i < m; ++i) {
        if (i == c) continue;
        double* row = &w[static_cast<size_t>(i) * 2 * m];
        const double f = row[c];
        if (f == 0.0) continue;
        for (int k = 0; k < 2 * m; ++k) row[k] -= f * prow[k];
      }
    }
    binv_.resize(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
      std::memcpy(&binv_[static_cast<size_t>(i) * m], &w[static_cast<size_t>(i) * 2 * m + m],
                  sizeof(double) * m);
    compute_xb();
    return true;
  }

  void compute_xb() {
    if (m_ == 0) return;
    std::vector<double> rhs = b_;
    for (size_t j = 0; j < cols_.size(); ++j) {
      if (stat_[j] == kBasic || val_[j] == 0.0) continue;
      for (const auto& [i, a] : cols_[j]) rhs[i] -= a * val_[j];
    }
    xb_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double* brow = &binv_[static_cast<size_t>(i) * m_];
      double acc = 0.0;
      for (int k = 0; k < m_; ++k) acc += brow[k] * rhs[k];
      xb_[i] = acc;
      val_[basic_[i]] = acc;
    }
  }

  void compute_pi() {
    pi_.assign(m_, 0.0);
    const std::vector<double>& c = active_cost();
    for (int i = 0; i < m_; ++i) {
      const double cb = c[basic_[i]];
      if (cb == 0.0) continue;
      const double* brow = &binv_[static_cast<size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) pi_[k] += cb * brow[k];
    }
  }

  double reduced_cost(int j) const {
    double z = active_cost()[j];
    for (const auto& [i, a] : cols_[j]) z -= pi_[i] * a;
    return z;
  }

  void ftran(int q) {
    d_.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const double* brow = &binv_[static_cast<size_t>(r) * m_];
      double acc = 0.0;
      for (const auto& [i, a] : cols_[q]) acc += brow[i] * a;
      d_[r] = acc;
    }
  }

  double residual_inf() const {
    if (m_ == 0) return 0.0;
    std::vector<double> ax(m_, 0.0);
    for (size_t j = 0; j < cols_.size(); ++j) {
      if (val_[j] == 0.0) continue;
      for (const auto& [i, a] : cols_[j]) ax[i] += a * val_[j];
    }
    double r = 0.0;
    for (int i = 0; i < m_; ++i) r = std::max(r, std::abs(ax[i] - b_[i]));
    return r;
  }

  void maybe_refresh() {
    if (m_ == 0) return;
    bool due = pivots_ - last_refactor_ >= opts_.refactor_interval;
    if (!due && pivots_ > last_refactor_ && (pivots_ - last_refactor_) % 16 == 0)
      due = residual_inf() > opts_.drift_tol * (1.0 + b_inf_);
    if (due && !refactor()) throw SingularBasis{};
  }

  /// Moves entering variable q by sigma*delta, pivoting at row r (or r < 0 for
  /// a bound flip).
  void apply_pivot(int q, int r, double delta, double sigma, bool leave_to_upper) {
    if (delta != 0.0) {
      for (int i = 0; i < m_; ++i) {
        xb_[i] -= sigma * delta * d_[i];
        val_[basic_[i]] = xb_[i];
      }
    }
    if (r < 0) {
      // Bound flip.
      stat_[q] = sigma > 0 ? kAtUpper : kAtLower;
      val_[q] = sigma > 0 ? up_[q] : lo_[q];
      return;
    }
    const int leave = basic_[r];
    stat_[leave] = leave_to_upper ? kAtUpper : kAtLower;
    val_[leave] = leave_to_upper ? up_[leave] : lo_[leave];
    const double enter_val = val_[q] + sigma * delta;
    stat_[q] = kBasic;
    basic_[r] = q;
    val_[q] = enter_val;
    xb_[r] = enter_val;
    // Product-form update of the explicit inverse.
    const double piv = d_[r];
    double* prow = &binv_[static_cast<size_t>(r) * m_];
    const double invp = 1.0 / piv;
    for (int k = 0; k < m_; ++k) prow[k] *= invp;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = d_[i];
      if (f == 0.0) continue;
      double* row = &binv_[static_cast<size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
  }

  long long pivot_budget() const {
    return 50000 + 200LL * (static_cast<long long>(m_) + cols_.size());
  }

  bool xb_within_bounds() const {
    for (int i = 0; i < m_; ++i) {
      const int bi = basic_[i];
      if (xb_[i] < lo_[bi] - feas_eps_ || xb_[i] > up_[bi] + feas_eps_) return false;
    }
    return true;
  }

  RunStatus primal_loop() {
    bland_ = force_bland_;
    degen_streak_ = 0;
    int rechecks = 0;
    const long long budget = pivot_budget();
    while (true) {
      maybe_refresh();
      if (m_ > 0) compute_pi();
      // Pricing: Dantzig by default, first eligible index in Bland mode.
      int q = -1;
      double best = opts_.opt_tol;
      const int ncols = static_cast<int>(cols_.size());
      for (int j = 0; j < ncols; ++j) {
        if (stat_[j] == kBasic || lo_[j] == up_[j]) continue;
        double z = active_cost()[j];
        if (m_ > 0) {
          for (const auto& [i, a] : cols_[j]) z -= pi_[i] * a;
        }
        const double viol = stat_[j] == kAtLower ? -z : z;
        if (bland_) {
          if (viol > opts_.opt_tol) {
            q = j;
            break;
          }
        } else if (viol > best) {
          best = viol;
          q = j;
        }
      }
      if (q < 0) {
        // Declare optimality only from an exactly refactored state: the
        // inverse may have drifted, and a drift-repair can leave the basic
        // point outside its bounds, which dual steps then restore.
        if (m_ == 0) return RunStatus::Optimal;
        if (rechecks >= 5) return RunStatus::Optimal;
        ++rechecks;
        const bool fresh = pivots_ == last_refactor_;
        if (!fresh) {
          if (!refactor()) throw SingularBasis{};
          continue;
        }
        if (!xb_within_bounds()) {
          const RunStatus ds = dual_loop();
          if (ds == RunStatus::PivotLimit) return RunStatus::PivotLimit;
          if (ds == RunStatus::Infeasible)
            throw std::runtime_error("simplex: numerical breakdown restoring feasibility");
          continue;
        }
        return RunStatus::Optimal;
      }

      const double sigma = stat_[q] == kAtLower ? 1.0 : -1.0;
      ftran(q);
      // Ratio test over basic limits and the entering variable's own range.
      // Leaving candidates need a pivot element above the stability
      // threshold; smaller entries would poison the inverse updates.
      const double stab = kStabilityTol;
      double theta = up_[q] - lo_[q];  // may be +inf
      for (int i = 0; i < m_; ++i) {
        const double di = sigma * d_[i];
        const int bi = basic_[i];
        double cand;
        if (di > stab) {
          cand = (xb_[i] - lo_[bi]) / di;
        } else if (di < -stab && std::isfinite(up_[bi])) {
          cand = (xb_[i] - up_[bi]) / di;
        } else {
          continue;
        }
        if (cand < 0.0) cand = 0.0;
        if (cand < theta) theta = cand;
      }
      if (!std::isfinite(theta)) {
        return phase1_ ? RunStatus::Infeasible : RunStatus::Unbounded;
      }

      // Leaving choice inside the tie window: largest pivot element for
      // stability, lowest variable index under Bland's rule, and the entering
      // variable's own bound flip on exact ties.
      const double window = theta + 1e-9 * (1.0 + std::abs(theta));
      int leave_pos = -1;
      bool leave_up = false;
      if (!(up_[q] - lo_[q] <= window)) {
        int best_var = -1;
        double best_piv = 0.0;
        for (int i = 0; i < m_; ++i) {
          const double di = sigma * d_[i];
          const int bi = basic_[i];
          double cand;
          bool to_up;
          if (di > stab) {
            cand = (xb_[i] - lo_[bi]) / di;
            to_up = false;
          } else if (di < -stab && std::isfinite(up_[bi])) {
            cand = (xb_[i] - up_[bi]) / di;
            to_up = true;
          } else {
            continue;
          }
          if (cand < 0.0) cand = 0.0;
          if (cand > window) continue;
          bool take;
          if (bland_) {
            take = best_var < 0 || bi < best_var;
          } else {
            take = std::abs(di) > best_piv ||
                   (std::abs(di) == best_piv && (best_var < 0 || bi < best_var));
          }
          if (take) {
            best_var = bi;
            best_piv = std::abs(di);
            leave_pos = i;
            leave_up = to_up;
          }
        }
        if (leave_pos < 0) return phase1_ ? RunStatus::Infeasible : RunStatus::Unbounded;
      }
      apply_pivot(q, leave_pos, theta, sigma, leave_up);
      ++pivots_;
      if (pivots_ > budget) return RunStatus::PivotLimit;

      if (theta <= 1e-10) {
        if (++degen_streak_ > opts_.degeneracy_streak_limit) bland_ = true;
      } else {
        degen_streak_ = 0;
        bland_ = force_bland_;
      }
    }
  }

  bool primal_feasible() const {
    for (int i = 0; i < m_; ++i) {
      const int bi = basic_[i];
      if (xb_[i] < lo_[bi] - feas_eps_ || xb_[i] > up_[bi] + feas_eps_) return false;
    }
    return true;
  }

  bool dual_feasible() {
    compute_pi();
    for (int j = 0; j < n_; ++j) {
      if (stat_[j] == kBasic || lo_[j] == up_[j]) continue;
      const double z = reduced_cost(j);
      if (stat_[j] == kAtLower && z < -opts_.opt_tol) return false;
      if (stat_[j] == kAtUpper && z > opts_.opt_tol) return false;
    }
    return true;
  }

  RunStatus dual_loop() {
    const long long budget = pivot_budget();
    int rechecks = 0;
    while (true) {
      maybe_refresh();
      // Leaving: the most violated basic variable, lowest index on ties.
      int r = -1;
      int r_var = -1;
      bool below = false;
      double worst = feas_eps_;
      for (int i = 0; i < m_; ++i) {
        const int bi = basic_[i];
        const double vlo = lo_[bi] - xb_[i];
        const double vup = xb_[i] - up_[bi];
        double v = vlo > vup ? vlo : vup;
        if (v > worst || (v == worst && r >= 0 && bi < r_var)) {
          worst = v;
          r = i;
          r_var = bi;
          below = vlo > vup;
        }
      }
      if (r < 0) {
        if (m_ == 0 || rechecks >= 3 || pivots_ == last_refactor_)
          return RunStatus::Optimal;
        ++rechecks;
        if (!refactor()) throw SingularBasis{};
        continue;
      }

      compute_pi();
      const double* brow = &binv_[static_cast<size_t>(r) * m_];
      int q = -1;
      double best_ratio = kInf;
      double best_piv = 0.0;
      std::vector<double> alphas(cols_.size(), 0.0);
      for (size_t j = 0; j < cols_.size(); ++j) {
        if (stat_[j] == kBasic || lo_[j] == up_[j]) continue;
        double alpha = 0.0;
        for (const auto& [i, a] : cols_[j]) alpha += brow[i] * a;
        alphas[j] = alpha;
        bool ok;
        if (below) {
          ok = (stat_[j] == kAtLower && alpha < -kStabilityTol) ||
               (stat_[j] == kAtUpper && alpha > kStabilityTol);
        } else {
          ok = (stat_[j] == kAtLower && alpha > kStabilityTol) ||
               (stat_[j] == kAtUpper && alpha < -kStabilityTol);
        }
        if (!ok) continue;
        const double ratio = std::max(0.0, std::abs(reduced_cost(j))) / std::abs(alpha);
        if (ratio < best_ratio) {
          best_ratio = ratio;
          q = static_cast<int>(j);
          best_piv = std::abs(alpha);
        }
      }
      // Second pass: within the ratio window, take the most stable pivot.
      if (q >= 0) {
        const double window = best_ratio + 1e-9 * (1.0 + best_ratio);
        for (size_t j = 0; j < cols_.size(); ++j) {
          if (stat_[j] == kBasic || lo_[j] == up_[j] || static_cast<int>(j) == q) continue;
          const double alpha = alphas[j];
          bool ok;
          if (below) {
            ok = (stat_[j] == kAtLower && alpha < -kStabilityTol) ||
                 (stat_[j] == kAtUpper && alpha > kStabilityTol);
          } else {
            ok = (stat_[j] == kAtLower && alpha > kStabilityTol) ||
                 (stat_[j] == kAtUpper && alpha < -kStabilityTol);
          }
          if (!ok) continue;
          const double ratio = std::max(0.0, std::abs(reduced_cost(j))) / std::abs(alpha);
          if (ratio <= window && std::abs(alpha) > best_piv) {
            best_piv = std::abs(alpha);
            q = static_cast<int>(j);
          }
        }
      }
      if (q < 0) return RunStatus::Infeasible;

      ftran(q);
      const int bi = basic_[r];
      const double target = below ? lo_[bi] : up_[bi];
      const double delta = (xb_[r] - target) / d_[r];
      for (int i = 0; i < m_; ++i) {
        xb_[i] -= delta * d_[i];
        val_[basic_[i]] = xb_[i];
      }
      stat_[bi] = below ? kAtLower : kAtUpper;
      val_[bi] = target;
      const double enter_val = val_[q] + delta;
      stat_[q] = kBasic;
      basic_[r] = q;
      val_[q] = enter_val;
      xb_[r] = enter_val;
      const double piv = d_[r];
      double* prow = &binv_[static_cast<size_t>(r) * m_];
      const double invp = 1.0 / piv;
      for (int k = 0; k < m_; ++k) prow[k] *= invp;
      for (int i = 0; i < m_; ++i) {
        if (i == r) continue;
        const double f = d_[i];
        if (f == 0.0) continue;
        double* row = &binv_[static_cast<size_t>(i) * m_];
        for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
      }
      ++pivots_;
      if (pivots_ > budget) return RunStatus::PivotLimit;
    }
  }

  LpOutcome finalize_status(LpStatus st) {
    LpOutcome out;
    out.status = st;
    out.pivots = pivots_;
    return out;
  }

  LpOutcome finalize_optimal() {
    LpOutcome out;
    out.status = LpStatus::Optimal;
    out.pivots = pivots_;
    out.primal.assign(val_.begin(), val_.begin() + n_);
    phase1_ = false;
    if (m_ > 0) compute_pi();
    out.dual = pi_;
    out.dual.resize(m_, 0.0);
    out.reduced_cost.resize(n_);
    for (int j = 0; j < n_; ++j) out.reduced_cost[j] = reduced_cost(j);
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += cost_[j] * out.primal[j];
    out.objective = obj;
    out.basis.basic = basic_;
    out.basis.at_upper.assign(n_, 0);
    for (int j = 0; j < n_; ++j) out.basis.at_upper[j] = stat_[j] == kAtUpper ? 1 : 0;
    return out;
  }

  const LpProblem& p_;
  SimplexSolver::Options opts_;
  int n_, m_;
  bool phase1_ = false;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> lo_, up_, cost_, phase_cost_;
  std::vector<double> val_;
  std::vector<std::uint8_t> stat_;
  std::vector<int> basic_;
  std::vector<double> binv_, xb_, b_, pi_, d_;
  std::vector<double> art_sign_;
  double b_inf_ = 0.0, feas_eps_ = 0.0;
  long long pivots_ = 0, last_refactor_ = 0;
  int degen_streak_ = 0;
  bool bland_ = false;
  bool force_bland_ = false;
};

}  // namespace

LpOutcome SimplexSolver::solve(const LpProblem& problem) const {
  problem.validate();
  try {
    Worker w(problem, opts_);
    return w.solve_cold();
  } catch (const SingularBasis&) {
    // A degenerate eta sequence can corrupt a basis beyond refactoring; the
    // Bland-guarded rerun takes a different, stable pivot path.
    Worker w(problem, opts_, /*force_bland=*/true);
    return w.solve_cold();
  }
}

LpOutcome SimplexSolver::solve_with_hint(const LpProblem& problem,
                                         const BasisState& hint) const {
  problem.validate();
  if (!hint.empty()) {
    try {
      Worker w(problem, opts_);
      if (auto out = w.solve_warm(hint)) return *out;
    } catch (const SingularBasis&) {
    }
  }
  return solve(problem);
}

VerificationReport SimplexSolver::verify_optimality(const LpProblem& problem,
                                                    const LpOutcome& outcome) {
  if (outcome.status != LpStatus::Optimal)
    throw ValidationError("verify_optimality requires an Optimal outcome");
  const int n = problem.num_vars();
  const int m = problem.num_rows();
  if (static_cast<int>(outcome.primal.size()) != n ||
      static_cast<int>(outcome.dual.size()) != m)
    throw ValidationError("verify_optimality: outcome dimensions do not match problem");

  const auto& x = outcome.primal;
  const auto& pi = outcome.dual;
  const auto& c = problem.cost();
  const auto& lo = problem.lower();
  const auto& up = problem.upper();

  VerificationReport rep;
  double b_scale = 0.0;
  for (int i = 0; i < m; ++i) {
    const LpRow& r = problem.row(i);
    double ax = 0.0;
    for (const auto& [j, a] : r.coeffs) ax += a * x[j];
    rep.primal_residual = std::max(rep.primal_residual, std::abs(ax - r.rhs));
    b_scale = std::max(b_scale, std::abs(r.rhs));
  }
  for (int j = 0; j < n; ++j) {
    rep.primal_residual = std::max(rep.primal_residual, lo[j] - x[j]);
    if (std::isfinite(up[j]))
      rep.primal_residual = std::max(rep.primal_residual, x[j] - up[j]);
  }

  // Reduced costs from the returned duals; sign consistency depends on where
  // the primal value sits.
  std::vector<double> z(c.begin(), c.end());
  for (int i = 0; i < m; ++i) {
    for (const auto& [j, a] : problem.row(i).coeffs) z[j] -= pi[i] * a;
  }
  double c_scale = 0.0;
  double dual_obj = 0.0;
  for (int i = 0; i < m; ++i) dual_obj += problem.row(i).rhs * pi[i];
  for (int j = 0; j < n; ++j) {
    c_scale = std::max(c_scale, std::abs(c[j]));
    const double pos_eps = 1e-7 * (1.0 + std::abs(lo[j]) + (std::isfinite(up[j]) ? std::abs(up[j]) : 0.0));
    const bool at_lo = x[j] <= lo[j] + pos_eps;
    const bool at_up = std::isfinite(up[j]) && x[j] >= up[j] - pos_eps;
    double viol = 0.0;
    if (at_lo && at_up) {
      viol = 0.0;
    } else if (at_lo) {
      viol = std::max(0.0, -z[j]);
    } else if (at_up) {
      viol = std::max(0.0, z[j]);
    } else {
      viol = std::abs(z[j]);
    }
    rep.dual_residual = std::max(rep.dual_residual, viol);
    if (z[j] > 0.0) {
      dual_obj += z[j] * lo[j];
    } else if (z[j] < 0.0 && std::isfinite(up[j])) {
      dual_obj += z[j] * up[j];
    }
  }

  double primal_obj = 0.0;
  for (int j = 0; j < n; ++j) primal_obj += c[j] * x[j];
  rep.duality_gap = std::abs(primal_obj - dual_obj);

  rep.pass = rep.primal_residual <= VerificationReport::kTol * (1.0 + b_scale) &&
             rep.dual_residual <= VerificationReport::kTol * (1.0 + c_scale) &&
             rep.duality_gap <= VerificationReport::kTol * (1.0 + std::abs(primal_obj));
  return rep;
}

}  // namespace savsddp::lp
