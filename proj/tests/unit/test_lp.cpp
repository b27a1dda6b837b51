#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include "random_lp.hpp"
#include "sagr/lp.hpp"
#include "tableau_oracle.hpp"

using namespace sagr;

namespace {

void check_optimality(const LinearProgram& lp, const LpSolution& s) {
  const double tol = 1e-6;
  for (int j = 0; j < lp.num_vars(); ++j) {
    CHECK(s.primal[j] >= lp.lower[j] - tol);
    CHECK(s.primal[j] <= lp.upper[j] + tol);
    double d = s.reduced_costs[j];
    if (d > tol) CHECK(std::abs(s.primal[j] - lp.lower[j]) < tol);
    if (d < -tol) CHECK(std::abs(s.primal[j] - lp.upper[j]) < tol);
  }
  for (int i = 0; i < lp.num_rows(); ++i) {
    const LpRow& row = lp.rows[i];
    double act = 0.0;
    for (auto [j, v] : row.coefs) act += v * s.primal[j];
    double y = s.duals[i];
    if (row.rel == Relation::LessEqual) {
      CHECK(act <= row.rhs + tol);
      CHECK(y <= tol);
    } else if (row.rel == Relation::GreaterEqual) {
      CHECK(act >= row.rhs - tol);
      CHECK(y >= -tol);
    } else {
      CHECK(std::abs(act - row.rhs) < tol);
    }
    CHECK(std::abs(y * (row.rhs - act)) < tol);
  }
  // Strong duality with bound terms.
  double dual_obj = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) dual_obj += s.duals[i] * lp.rows[i].rhs;
  for (int j = 0; j < lp.num_vars(); ++j) dual_obj += s.reduced_costs[j] * s.primal[j];
  CHECK(dual_obj == doctest::Approx(s.objective).epsilon(1e-9).scale(1.0));
}

}  // namespace

TEST_CASE("single bound row") {
  LinearProgram lp;
  int x = lp.add_variable(1.0);
  lp.add_row({{x, 1.0}}, Relation::GreaterEqual, 3.0);
  LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.primal[x] == doctest::Approx(3.0));
  CHECK(s.duals[0] == doctest::Approx(1.0));
  CHECK(s.objective == doctest::Approx(3.0));
}

TEST_CASE("textbook infeasibility ray") {
  LinearProgram lp;
  int x = lp.add_variable(0.0);
  lp.add_row({{x, 1.0}}, Relation::LessEqual, 1.0);
  lp.add_row({{x, 1.0}}, Relation::GreaterEqual, 2.0);
  LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Infeasible);
  REQUIRE(s.farkas_ray.size() == 2);
  CHECK(s.farkas_ray[0] == doctest::Approx(-1.0));
  CHECK(s.farkas_ray[1] == doctest::Approx(1.0));
  CHECK(verify_farkas(lp, s.farkas_ray));
}

TEST_CASE("empty row decides feasibility") {
  LinearProgram lp;
  lp.add_variable(1.0);
  lp.add_row({}, Relation::GreaterEqual, 1.0);
  LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Infeasible);
  CHECK(verify_farkas(lp, s.farkas_ray));
}

TEST_CASE("unbounded direction") {
  LinearProgram lp;
  int x = lp.add_variable(-1.0);
  int y = lp.add_variable(0.0);
  lp.add_row({{x, 1.0}, {y, -1.0}}, Relation::LessEqual, 2.0);
  CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("upper bounds and equality rows") {
  // min -x - 2y, x + y = 3, x <= 2, y <= 2
  LinearProgram lp;
  int x = lp.add_variable(-1.0, 0.0, 2.0);
  int y = lp.add_variable(-2.0, 0.0, 2.0);
  lp.add_row({{x, 1.0}, {y, 1.0}}, Relation::Equal, 3.0);
  LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.primal[x] == doctest::Approx(1.0));
  CHECK(s.primal[y] == doctest::Approx(2.0));
  CHECK(s.objective == doctest::Approx(-5.0));
  check_optimality(lp, s);
}

TEST_CASE("random programs up to 30x40 agree with the tableau oracle") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> rows(3, 30), cols(3, 40);
  int optimal = 0, infeasible = 0, unique_duals = 0;
  for (int t = 0; t < 240; ++t) {
    LinearProgram lp = testsupport::random_lp(rng, rows(rng), cols(rng), t % 3 != 0);
    if (t % 2 == 0) {
      // Shift every right-hand side so that a random integer point is feasible.
      std::vector<double> x0(lp.num_vars());
      for (int j = 0; j < lp.num_vars(); ++j) x0[j] = rng() % (std::isfinite(lp.upper[j]) ? int(lp.upper[j]) + 1 : 4);
      for (auto& row : lp.rows) {
        double act = 0.0;
        for (auto [j, v] : row.coefs) act += v * x0[j];
        double slack = rng() % 3;
        row.rhs = row.rel == Relation::Equal ? act : row.rel == Relation::LessEqual ? act + slack : act - slack;
      }
    }
    CAPTURE(t);
    LpSolution s = solve_lp(lp);
    oracle::TableauResult o = oracle::tableau_solve(lp);
    REQUIRE(static_cast<int>(s.status) == static_cast<int>(o.status));
    if (s.status == LpStatus::Optimal) {
      ++optimal;
      CHECK(s.objective == doctest::Approx(o.objective).epsilon(1e-9).scale(1.0));
      check_optimality(lp, s);
      // A nondegenerate optimum has a unique dual solution.
      if (!o.degenerate) {
        ++unique_duals;
        for (int i = 0; i < lp.num_rows(); ++i) CHECK(s.duals[i] == doctest::Approx(o.duals[i]).epsilon(1e-6));
      }
    } else if (s.status == LpStatus::Infeasible) {
      ++infeasible;
      CHECK(verify_farkas(lp, s.farkas_ray));
    }
  }
  MESSAGE(optimal << " optimal, " << infeasible << " infeasible, " << unique_duals << " with unique duals");
  CHECK(optimal > 80);
  CHECK(infeasible > 40);
}

TEST_CASE("lp dump names every row") {
  LinearProgram lp;
  int x = lp.add_variable(1.0, 0.0, 1.0);
  lp.add_row({{x, 2.0}}, Relation::LessEqual, 1.0);
  std::string text = to_lp_format(lp);
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("c0: 2 x0 <= 1") != std::string::npos);
  CHECK(text.find("0 <= x0 <= 1") != std::string::npos);
}

TEST_CASE("integral relaxation needs no branching") {
  LinearProgram lp;
  int x = lp.add_variable(1.0, 0.0, 1.0);
  int y = lp.add_variable(2.0, 0.0, 1.0);
  lp.add_row({{x, 1.0}, {y, 1.0}}, Relation::GreaterEqual, 1.0);
  std::vector<int> ints{x, y};
  MipSolution m = solve_mip(lp, ints);
  REQUIRE(m.status == MipStatus::Optimal);
  CHECK(m.nodes == 1);
  CHECK(m.objective == doctest::Approx(1.0));
}

TEST_CASE("two-variable knapsack") {
  LinearProgram lp;
  int x = lp.add_variable(-1.0, 0.0, 1.0);
  int y = lp.add_variable(-1.0, 0.0, 1.0);
  lp.add_row({{x, 1.0}, {y, 1.0}}, Relation::LessEqual, 1.0);
  std::vector<int> ints{x, y};
  MipSolution m = solve_mip(lp, ints);
  REQUIRE(m.status == MipStatus::Optimal);
  CHECK(-m.objective == doctest::Approx(1.0));
}

TEST_CASE("random set partitioning matches exhaustive enumeration") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> cost(1, 20);
  for (int t = 0; t < 25; ++t) {
    const int n = 15, m = 6;
    std::vector<std::vector<int>> cover(m);
    LinearProgram lp;
    for (int j = 0; j < n; ++j) lp.add_variable(cost(rng), 0.0, 1.0);
    std::vector<std::uint32_t> colmask(n, 0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < m; ++i)
        if (u01(rng) < 0.35) colmask[j] |= 1u << i;
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, double>> row;
      for (int j = 0; j < n; ++j)
        if (colmask[j] >> i & 1u) row.emplace_back(j, 1.0);
      lp.add_row(std::move(row), Relation::Equal, 1.0);
    }
    double best = kInf;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
      std::uint32_t covered = 0;
      bool ok = true;
      double c = 0.0;
      for (int j = 0; j < n && ok; ++j) {
        if (!(s >> j & 1u)) continue;
        ok = (covered & colmask[j]) == 0;
        covered |= colmask[j];
        c += lp.objective[j];
      }
      if (ok && covered == (1u << m) - 1) best = std::min(best, c);
    }
    std::vector<int> ints(n);
    for (int j = 0; j < n; ++j) ints[j] = j;
    MipSolution sol = solve_mip(lp, ints);
    if (std::isinf(best)) {
      CHECK(sol.status == MipStatus::Infeasible);
    } else {
      REQUIRE(sol.status == MipStatus::Optimal);
      CHECK(sol.objective == doctest::Approx(best));
      CHECK(sol.bound <= sol.objective + 1e-9);
    }
  }
}

TEST_CASE("time limit reports incumbent and bound") {
  std::mt19937 rng(3);
  LinearProgram lp = testsupport::random_lp(rng, 10, 14, true);
  std::vector<int> ints(14);
  for (int j = 0; j < 14; ++j) ints[j] = j;
  MipOptions opts;
  opts.deadline = Clock::now();
  MipSolution m = solve_mip(lp, ints, opts);
  CHECK(m.status == MipStatus::TimeLimit);
  CHECK_FALSE(m.has_incumbent);
}
