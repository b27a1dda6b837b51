#include "sagr/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "sagr/errors.hpp"

namespace sagr {

int LinearProgram::add_variable(double cost, double lb, double ub) {
  objective.push_back(cost);
  lower.push_back(lb);
  upper.push_back(ub);
  return num_vars() - 1;
}

int LinearProgram::add_row(std::vector<std::pair<int, double>> coefs, Relation rel, double rhs) {
  rows.push_back({std::move(coefs), rel, rhs});
  return num_rows() - 1;
}

namespace {

enum class VarState : unsigned char { Basic, AtLower, AtUpper };

// Bounded revised simplex on  A x = b,  l <= x <= u,  with an explicit dense
// basis inverse updated by rank-one pivots.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opts) : lp_(lp), opts_(opts) {}

  LpSolution run();

 private:
  struct Column {
    std::vector<std::pair<int, double>> entries;  // (internal row, value)
  };

  void build();
  void set_phase_costs(bool phase_one);
  void compute_duals(std::vector<double>& y) const;
  double reduced_cost(int j, const std::vector<double>& y) const;
  void ftran(int q, std::vector<double>& alpha) const;
  void recompute_basic_values();
  void reinvert();
  // Returns false on unbounded direction.
  bool iterate_phase(bool phase_one);
  void drive_out_artificials();
  double value(int j) const { return x_[j]; }

  const LinearProgram& lp_;
  SimplexOptions opts_;

  int n_ = 0;  // structural columns
  int m_ = 0;  // internal rows
  std::vector<int> row_map_;   // internal row -> lp row
  std::vector<double> b_;
  std::vector<Column> cols_;
  std::vector<double> lo_, up_, cost_, x_;
  std::vector<VarState> state_;
  std::vector<char> artificial_;
  std::vector<int> head_;
  std::vector<double> binv_;  // m x m row-major
  int iterations_ = 0;
  int since_reinvert_ = 0;
};

void Simplex::build() {
  n_ = lp_.num_vars();
  if (static_cast<int>(lp_.lower.size()) != n_ || static_cast<int>(lp_.upper.size()) != n_)
    throw std::invalid_argument("bound vectors do not match the objective");
  for (int j = 0; j < n_; ++j) {
    if (!std::isfinite(lp_.lower[j])) throw std::invalid_argument("lower bounds must be finite");
    if (lp_.lower[j] > lp_.upper[j]) throw std::invalid_argument("empty variable box");
    if (!std::isfinite(lp_.objective[j])) throw std::invalid_argument("objective must be finite");
  }
  cols_.assign(n_, {});
  lo_.assign(lp_.lower.begin(), lp_.lower.end());
  up_.assign(lp_.upper.begin(), lp_.upper.end());
  artificial_.assign(n_, 0);

  for (int i = 0; i < lp_.num_rows(); ++i) {
    const LpRow& row = lp_.rows[i];
    std::map<int, double> merged;
    for (auto [j, v] : row.coefs) {
      if (j < 0 || j >= n_) throw std::invalid_argument("row references an unknown variable");
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite coefficient");
      merged[j] += v;
    }
    bool empty = true;
    for (auto& [j, v] : merged) empty = empty && v == 0.0;
    if (empty) continue;
    int r = m_++;
    row_map_.push_back(i);
    b_.push_back(row.rhs);
    for (auto& [j, v] : merged)
      if (v != 0.0) cols_[j].entries.emplace_back(r, v);
  }

  // Start every structural column at its lower bound.
  x_.assign(n_, 0.0);
  state_.assign(n_, VarState::AtLower);
  for (int j = 0; j < n_; ++j) x_[j] = lo_[j];
  std::vector<double> resid = b_;
  for (int j = 0; j < n_; ++j)
    for (auto [r, v] : cols_[j].entries) resid[r] -= v * x_[j];

  head_.assign(m_, -1);
  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  auto add_col = [&](int r, double coef, double lo, double up, bool art) {
    Column c;
    c.entries.emplace_back(r, coef);
    cols_.push_back(std::move(c));
    lo_.push_back(lo);
    up_.push_back(up);
    x_.push_back(0.0);
    state_.push_back(VarState::AtLower);
    artificial_.push_back(art);
    return static_cast<int>(cols_.size()) - 1;
  };
  for (int r = 0; r < m_; ++r) {
    Relation rel = lp_.rows[row_map_[r]].rel;
    int slack = -1;
    double sigma = 0.0;
    if (rel != Relation::Equal) {
      sigma = rel == Relation::LessEqual ? 1.0 : -1.0;
      slack = add_col(r, sigma, 0.0, kInf, false);
    }
    if (slack >= 0 && resid[r] * sigma >= 0.0) {
      head_[r] = slack;
      state_[slack] = VarState::Basic;
      x_[slack] = resid[r] * sigma;
      binv_[static_cast<std::size_t>(r) * m_ + r] = sigma;
    } else {
      double s = resid[r] >= 0.0 ? 1.0 : -1.0;
      int art = add_col(r, s, 0.0, kInf, true);
      head_[r] = art;
      state_[art] = VarState::Basic;
      x_[art] = std::abs(resid[r]);
      binv_[static_cast<std::size_t>(r) * m_ + r] = s;
    }
  }
  cost_.assign(cols_.size(), 0.0);
}

void Simplex::set_phase_costs(bool phase_one) {
  std::fill(cost_.begin(), cost_.end(), 0.0);
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    if (phase_one) cost_[j] = artificial_[j] ? 1.0 : 0.0;
    else if (static_cast<int>(j) < n_) cost_[j] = lp_.objective[j];
  }
}

void Simplex::compute_duals(std::vector<double>& y) const {
  y.assign(m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    double c = cost_[head_[i]];
    if (c == 0.0) continue;
    const double* row = &binv_[static_cast<std::size_t>(i) * m_];
    for (int k = 0; k < m_; ++k) y[k] += c * row[k];
  }
}

double Simplex::reduced_cost(int j, const std::vector<double>& y) const {
  double d = cost_[j];
  for (auto [r, v] : cols_[j].entries) d -= y[r] * v;
  return d;
}

void Simplex::ftran(int q, std::vector<double>& alpha) const {
  alpha.assign(m_, 0.0);
  for (auto [r, v] : cols_[q].entries)
    for (int i = 0; i < m_; ++i) alpha[i] += binv_[static_cast<std::size_t>(i) * m_ + r] * v;
}

void Simplex::recompute_basic_values() {
  std::vector<double> rhs = b_;
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
    for (auto [r, v] : cols_[j].entries) rhs[r] -= v * x_[j];
  }
  for (int i = 0; i < m_; ++i) {
    double s = 0.0;
    const double* row = &binv_[static_cast<std::size_t>(i) * m_];
    for (int k = 0; k < m_; ++k) s += row[k] * rhs[k];
    x_[head_[i]] = s;
  }
}

void Simplex::reinvert() {
  since_reinvert_ = 0;
  if (m_ == 0) return;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m_, m_);
  for (int i = 0; i < m_; ++i)
    for (auto [r, v] : cols_[head_[i]].entries) B(r, i) = v;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  if (!(lu.rcond() > 1e-14)) throw NumericalError("basis became singular");
  Eigen::MatrixXd inv = lu.inverse();
  for (int i = 0; i < m_; ++i)
    for (int k = 0; k < m_; ++k) binv_[static_cast<std::size_t>(i) * m_ + k] = inv(i, k);
  recompute_basic_values();
}

bool Simplex::iterate_phase(bool phase_one) {
  set_phase_costs(phase_one);
  const double piv_tol = 1e-7;
  const double tol = opts_.feas_tol;
  bool bland = false;
  int degenerate_run = 0;
  std::vector<double> y, alpha;
  const int ncols = static_cast<int>(cols_.size());

  for (;;) {
    if (++iterations_ > opts_.max_iterations) throw NumericalError("simplex iteration limit reached");
    if (since_reinvert_ >= std::max(100, m_)) reinvert();

    compute_duals(y);
    int q = -1;
    double best = 0.0;
    for (int j = 0; j < ncols; ++j) {
      if (state_[j] == VarState::Basic) continue;
      if (up_[j] - lo_[j] <= 0.0) continue;
      double d = reduced_cost(j, y);
      bool eligible = (state_[j] == VarState::AtLower && d < -opts_.opt_tol) ||
                      (state_[j] == VarState::AtUpper && d > opts_.opt_tol);
      if (!eligible) continue;
      if (bland) {
        q = j;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
      }
    }
    if (q < 0) return true;

    ftran(q, alpha);
    const double dir = state_[q] == VarState::AtLower ? 1.0 : -1.0;

    // Harris ratio test: widest step allowed with bounds relaxed by tol, then
    // the largest pivot among rows that block within that step.
    double theta_max = kInf;
    for (int i = 0; i < m_; ++i) {
      double delta = -dir * alpha[i];
      int k = head_[i];
      if (delta < -piv_tol) theta_max = std::min(theta_max, (x_[k] - lo_[k] + tol) / -delta);
      else if (delta > piv_tol && std::isfinite(up_[k]))
        theta_max = std::min(theta_max, (up_[k] - x_[k] + tol) / delta);
    }
    int leave = -1;
    double theta = kInf;
    if (std::isfinite(theta_max)) {
      double best_piv = 0.0;
      for (int i = 0; i < m_; ++i) {
        double delta = -dir * alpha[i];
        int k = head_[i];
        double ratio;
        if (delta < -piv_tol) ratio = std::max(0.0, (x_[k] - lo_[k]) / -delta);
        else if (delta > piv_tol && std::isfinite(up_[k])) ratio = std::max(0.0, (up_[k] - x_[k]) / delta);
        else continue;
        if (ratio > theta_max) continue;
        bool take;
        if (bland) take = leave < 0 || ratio < theta - 1e-12 || (ratio <= theta + 1e-12 && k < head_[leave]);
        else take = std::abs(alpha[i]) > best_piv;
        if (take) {
          leave = i;
          theta = ratio;
          best_piv = std::abs(alpha[i]);
        }
      }
    }
    double range = up_[q] - lo_[q];
    bool flip = std::isfinite(range) && (leave < 0 || range <= theta);
    if (leave < 0 && !flip) {
      // Drift in the product-form inverse can fake an unbounded column;
      // refactorise and price again before believing it.
      if (since_reinvert_ > 0) {
        reinvert();
        continue;
      }
      if (phase_one) throw NumericalError("phase one reported an unbounded direction");
      return false;
    }
    if (flip) theta = range;

    // Bland's rule only breaks a degenerate run; progress restores Dantzig.
    if (theta <= 1e-12) {
      if (++degenerate_run > opts_.degenerate_limit) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }

    x_[q] += dir * theta;
    for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * theta * alpha[i];

    if (flip) {
      state_[q] = state_[q] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
      x_[q] = state_[q] == VarState::AtLower ? lo_[q] : up_[q];
      continue;
    }

    int k = head_[leave];
    double delta = -dir * alpha[leave];
    if (delta < 0) {
      state_[k] = VarState::AtLower;
      x_[k] = lo_[k];
    } else {
      state_[k] = VarState::AtUpper;
      x_[k] = up_[k];
    }
    head_[leave] = q;
    state_[q] = VarState::Basic;

    const double piv = alpha[leave];
    double* prow = &binv_[static_cast<std::size_t>(leave) * m_];
    for (int c = 0; c < m_; ++c) prow[c] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == leave || alpha[i] == 0.0) continue;
      double f = alpha[i];
      double* row = &binv_[static_cast<std::size_t>(i) * m_];
      for (int c = 0; c < m_; ++c) row[c] -= f * prow[c];
    }
    ++since_reinvert_;
    if (since_reinvert_ % 25 == 0) recompute_basic_values();
  }
}

void Simplex::drive_out_artificials() {
  std::vector<double> alpha;
  for (int i = 0; i < m_; ++i) {
    int k = head_[i];
    if (!artificial_[k]) continue;
    // Row i of B^-1 A_j for every candidate; pivot on the first usable one.
    const double* row = &binv_[static_cast<std::size_t>(i) * m_];
    int q = -1;
    double best = 1e-7;
    for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
      if (state_[j] == VarState::Basic || artificial_[j]) continue;
      double a = 0.0;
      for (auto [r, v] : cols_[j].entries) a += row[r] * v;
      if (std::abs(a) > best) {
        best = std::abs(a);
        q = j;
      }
    }
    if (q < 0) continue;  // redundant row; the artificial stays basic at zero
    ftran(q, alpha);
    state_[k] = VarState::AtLower;
    x_[k] = 0.0;
    head_[i] = q;
    state_[q] = VarState::Basic;
    const double piv = alpha[i];
    double* prow = &binv_[static_cast<std::size_t>(i) * m_];
    for (int c = 0; c < m_; ++c) prow[c] /= piv;
    for (int r = 0; r < m_; ++r) {
      if (r == i || alpha[r] == 0.0) continue;
      double f = alpha[r];
      double* rr = &binv_[static_cast<std::size_t>(r) * m_];
      for (int c = 0; c < m_; ++c) rr[c] -= f * prow[c];
    }
  }
  for (std::size_t j = 0; j < cols_.size(); ++j)
    if (artificial_[j]) up_[j] = 0.0;
  reinvert();
}

LpSolution Simplex::run() {
  LpSolution sol;
  const int nrows = lp_.num_rows();

  // Rows without coefficients decide feasibility on their own.
  for (int i = 0; i < nrows; ++i) {
    const LpRow& row = lp_.rows[i];
    bool empty = true;
    for (auto [j, v] : row.coefs) empty = empty && v == 0.0;
    if (!empty) continue;
    double r = row.rhs;
    double sign = 0.0;
    if (row.rel == Relation::LessEqual && r < -opts_.feas_tol) sign = -1.0;
    if (row.rel == Relation::GreaterEqual && r > opts_.feas_tol) sign = 1.0;
    if (row.rel == Relation::Equal && std::abs(r) > opts_.feas_tol) sign = r > 0 ? 1.0 : -1.0;
    if (sign != 0.0) {
      sol.status = LpStatus::Infeasible;
      sol.farkas_ray.assign(nrows, 0.0);
      sol.farkas_ray[i] = sign;
      return sol;
    }
  }

  build();
  bool any_art = false;
  for (int i = 0; i < m_; ++i) any_art = any_art || (artificial_[head_[i]] && x_[head_[i]] > 0.0);

  std::vector<double> y;
  if (any_art) {
    iterate_phase(true);
    reinvert();
    double infeas = 0.0;
    for (std::size_t j = 0; j < cols_.size(); ++j)
      if (artificial_[j]) infeas = std::max(infeas, x_[j]);
    if (infeas > opts_.feas_tol) {
      set_phase_costs(true);
      compute_duals(y);
      sol.status = LpStatus::Infeasible;
      sol.farkas_ray.assign(nrows, 0.0);
      double norm = 0.0;
      for (int r = 0; r < m_; ++r) {
        double v = y[r];
        Relation rel = lp_.rows[row_map_[r]].rel;
        if (rel == Relation::LessEqual && v > 0.0) v = 0.0;
        if (rel == Relation::GreaterEqual && v < 0.0) v = 0.0;
        sol.farkas_ray[row_map_[r]] = v;
        norm = std::max(norm, std::abs(v));
      }
      if (norm > 0.0)
        for (double& v : sol.farkas_ray) v /= norm;
      sol.iterations = iterations_;
      return sol;
    }
  }
  drive_out_artificials();

  bool bounded = iterate_phase(false);
  sol.iterations = iterations_;
  if (!bounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }
  reinvert();
  for (int i = 0; i < m_; ++i) {
    int k = head_[i];
    if (x_[k] < lo_[k] - 1e-6 || x_[k] > up_[k] + 1e-6) {
      // Drift after refactorisation; one more pass from the refreshed basis.
      iterate_phase(false);
      reinvert();
      break;
    }
  }

  sol.status = LpStatus::Optimal;
  sol.primal.assign(x_.begin(), x_.begin() + n_);
  for (int j = 0; j < n_; ++j) sol.primal[j] = std::clamp(sol.primal[j], lo_[j], up_[j]);
  sol.objective = 0.0;
  for (int j = 0; j < n_; ++j) sol.objective += lp_.objective[j] * sol.primal[j];
  set_phase_costs(false);
  compute_duals(y);
  sol.duals.assign(nrows, 0.0);
  for (int r = 0; r < m_; ++r) sol.duals[row_map_[r]] = y[r];
  sol.reduced_costs.assign(n_, 0.0);
  for (int j = 0; j < n_; ++j) sol.reduced_costs[j] = reduced_cost(j, y);
  return sol;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
  Simplex s(lp, opts);
  return s.run();
}

bool verify_farkas(const LinearProgram& lp, std::span<const double> ray, double tol) {
  if (static_cast<int>(ray.size()) != lp.num_rows()) return false;
  std::vector<double> g(lp.num_vars(), 0.0);
  double yb = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) {
    double y = ray[i];
    const LpRow& row = lp.rows[i];
    if (row.rel == Relation::LessEqual && y > tol) return false;
    if (row.rel == Relation::GreaterEqual && y < -tol) return false;
    yb += y * row.rhs;
    for (auto [j, v] : row.coefs) g[j] += y * v;
  }
  double maxval = 0.0;
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (std::abs(g[j]) <= 1e-12) continue;
    if (g[j] > 0) {
      if (!std::isfinite(lp.upper[j])) return false;
      maxval += g[j] * lp.upper[j];
    } else {
      maxval += g[j] * lp.lower[j];
    }
  }
  return yb - maxval > tol;
}

MipSolution solve_mip(const LinearProgram& lp, std::span<const int> integer_vars, const MipOptions& opts) {
  struct Node {
    double bound;
    long id;
    std::vector<double> lo, hi;
  };
  struct Worse {
    bool operator()(const Node& a, const Node& b) const {
      return a.bound != b.bound ? a.bound > b.bound : a.id > b.id;
    }
  };

  MipSolution out;
  const double gap = opts.abs_gap;
  auto tighten = [&](double bound) { return opts.integral_objective ? std::ceil(bound - 1e-6) : bound; };

  std::priority_queue<Node, std::vector<Node>, Worse> open;
  long next_id = 0;
  open.push({-kInf, next_id++, lp.lower, lp.upper});
  LinearProgram work = lp;

  while (!open.empty()) {
    if (Clock::now() >= opts.deadline) {
      out.status = MipStatus::TimeLimit;
      out.bound = std::min(open.top().bound, out.objective);
      return out;
    }
    Node node = open.top();
    open.pop();
    if (out.has_incumbent && node.bound >= out.objective - gap) continue;

    work.lower = node.lo;
    work.upper = node.hi;
    LpSolution rel = solve_lp(work, opts.lp);
    ++out.nodes;
    if (rel.status == LpStatus::Unbounded) {
      out.status = MipStatus::Unbounded;
      return out;
    }
    if (rel.status != LpStatus::Optimal) continue;
    double bound = tighten(rel.objective);
    if (out.has_incumbent && bound >= out.objective - gap) continue;

    int branch = -1;
    double best_dist = kInf;
    for (int j : integer_vars) {
      double v = rel.primal[j];
      double frac = v - std::floor(v);
      if (std::min(frac, 1.0 - frac) <= opts.int_tol) continue;
      double dist = std::abs(frac - 0.5);
      if (dist < best_dist - 1e-12 || (dist <= best_dist + 1e-12 && j < branch)) {
        best_dist = dist;
        branch = j;
      }
    }
    if (branch < 0) {
      out.has_incumbent = true;
      out.values = rel.primal;
      for (int j : integer_vars) out.values[j] = std::round(out.values[j]);
      out.objective = 0.0;
      for (int j = 0; j < lp.num_vars(); ++j) out.objective += lp.objective[j] * out.values[j];
      continue;
    }
    double v = rel.primal[branch];
    Node down{bound, next_id++, node.lo, node.hi};
    down.hi[branch] = std::floor(v);
    Node up{bound, next_id++, std::move(node.lo), std::move(node.hi)};
    up.lo[branch] = std::ceil(v);
    open.push(std::move(down));
    open.push(std::move(up));
  }
  if (out.has_incumbent) {
    out.status = MipStatus::Optimal;
    out.bound = out.objective;
  } else {
    out.status = MipStatus::Infeasible;
    out.bound = kInf;
  }
  return out;
}

std::string to_lp_format(const LinearProgram& lp) {
  std::ostringstream os;
  os.precision(17);
  auto term = [&](double v, int j, bool first) {
    if (v < 0) os << (first ? "-" : " - ");
    else if (!first) os << " + ";
    os << std::abs(v) << " x" << j;
  };
  os << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.objective[j] == 0.0) continue;
    os << ' ';
    term(lp.objective[j], j, first);
    first = false;
  }
  if (first) os << " 0 x0";
  os << "\nSubject To\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const LpRow& row = lp.rows[i];
    os << " c" << i << ":";
    bool f = true;
    for (auto [j, v] : row.coefs) {
      os << ' ';
      term(v, j, f);
      f = false;
    }
    if (f) os << " 0 x0";
    os << (row.rel == Relation::LessEqual ? " <= " : row.rel == Relation::GreaterEqual ? " >= " : " = ") << row.rhs
       << '\n';
  }
  os << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    os << ' ' << lp.lower[j] << " <= x" << j << " <= ";
    if (std::isfinite(lp.upper[j])) os << lp.upper[j];
    else os << "+inf";
    os << '\n';
  }
  os << "End\n";
  return os.str();
}

}  // namespace sagr
