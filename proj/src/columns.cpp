#include "sagr/columns.hpp"

#include <algorithm>
#include <cmath>

#include "sagr/errors.hpp"
#include "sagr/network.hpp"

namespace sagr {

double GateDuals::route_value(const Network& net, const AircraftRoute& r) const {
  double v = 0.0;
  for (int c : r.copies) {
    v += activity[net.dep_activity(c)];
    if (!net.is_maintenance_copy(c)) v += activity[net.arr_activity(c)];
  }
  for (int e : r.connections) {
    auto it = pair.find(e);
    if (it != pair.end()) v += it->second;
  }
  return v;
}

bool GateDuals::is_zero(double tol) const {
  for (double v : activity)
    if (std::abs(v) > tol) return false;
  for (const auto& [e, v] : pair)
    if (std::abs(v) > tol) return false;
  return std::abs(gate_term) <= tol;
}

std::string to_string(CutKind k) {
  switch (k) {
    case CutKind::Feasibility: return "feasibility";
    case CutKind::Optimality: return "optimality";
    case CutKind::NoGood: return "nogood";
    case CutKind::Llc: return "llc";
    case CutKind::Global: return "global";
  }
  return "?";
}

bool BendersCut::in_support(const ColumnRef& ref) const {
  return std::binary_search(support.begin(), support.end(), ref);
}

double BendersCut::outside_coef() const { return kind == CutKind::Global ? -(value - lower) : 0.0; }

double BendersCut::column_coef(const Network& net, const AircraftRoute& r, std::optional<ColumnRef> ref) const {
  switch (kind) {
    case CutKind::Feasibility:
    case CutKind::Optimality: return duals.route_value(net, r);
    case CutKind::NoGood: return ref && in_support(*ref) ? 1.0 : 0.0;
    case CutKind::Llc: return ref && in_support(*ref) ? value - lower : 0.0;
    case CutKind::Global: return ref && in_support(*ref) ? value - lower : -(value - lower);
  }
  return 0.0;
}

std::optional<BendersCut> feasibility_cut(GateDuals duals) {
  if (duals.is_zero()) return std::nullopt;
  BendersCut c;
  c.kind = CutKind::Feasibility;
  c.rhs = duals.gate_term;
  c.duals = std::move(duals);
  return c;
}

std::optional<BendersCut> optimality_cut(GateDuals duals) {
  if (duals.is_zero()) return std::nullopt;
  BendersCut c;
  c.kind = CutKind::Optimality;
  c.q_coef = -1.0;
  c.rhs = duals.gate_term;
  c.duals = std::move(duals);
  return c;
}

BendersCut nogood_cut(std::vector<ColumnRef> support) {
  std::sort(support.begin(), support.end());
  BendersCut c;
  c.kind = CutKind::NoGood;
  c.rhs = static_cast<double>(support.size()) - 1.0;
  c.support = std::move(support);
  return c;
}

BendersCut llc_cut(std::vector<ColumnRef> support, double value, double lower) {
  if (lower > value) throw InvalidBound("lower bound exceeds the subproblem value");
  std::sort(support.begin(), support.end());
  BendersCut c;
  c.kind = CutKind::Llc;
  c.value = value;
  c.lower = lower;
  c.q_coef = -1.0;
  c.rhs = (value - lower) * (static_cast<double>(support.size()) - 1.0) - lower;
  c.support = std::move(support);
  return c;
}

BendersCut global_cut(std::vector<ColumnRef> support, double value, double lower) {
  if (lower > value) throw InvalidBound("lower bound exceeds the subproblem value");
  std::sort(support.begin(), support.end());
  BendersCut c;
  c.kind = CutKind::Global;
  c.value = value;
  c.lower = lower;
  c.q_coef = -1.0;
  c.rhs = (value - lower) * static_cast<double>(support.size()) - value;
  c.support = std::move(support);
  return c;
}

}  // namespace sagr
