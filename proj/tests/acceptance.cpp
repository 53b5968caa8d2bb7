// One PASS/FAIL line per acceptance criterion; the exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sbtheta/abelian.hpp"
#include "sbtheta/error.hpp"
#include "sbtheta/hierarchy.hpp"
#include "sbtheta/solution.hpp"
#include "sbtheta/verification.hpp"

using namespace sbtheta;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what, double value, double tol) {
    if (!ok) pass = false;
    detail << " " << what << "=" << value << (ok ? "<=" : ">") << tol << ";";
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void run(int id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " exception: " << e.what();
  }
  if (!out.pass) ++failures;
  std::printf("criterion %d %s: %s (%.2f s)%s\n", id, out.pass ? "PASS" : "FAIL", title, seconds_since(t0),
              out.detail.str().c_str());
  std::fflush(stdout);
}

double agm(double a, double b) {
  while (std::abs(a - b) > 1e-16 * a) {
    const double m = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = m;
  }
  return a;
}

// Complete elliptic integral of the first kind via the arithmetic-geometric mean.
double ellip_k(double k) { return std::numbers::pi / (2.0 * agm(1.0, std::sqrt(1.0 - k * k))); }

LatticeSeq random_seq(int n_min, int n_max, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LatticeSeq s;
  s.n_min = n_min;
  s.n_max = n_max;
  for (int i = 0; i < s.size(); ++i) {
    s.alpha.emplace_back(u(rng), u(rng));
    s.beta.emplace_back(u(rng), u(rng));
  }
  return s;
}

SolutionState genus1_state(cplx mu_z) {
  std::vector<cplx> e = {1.0, 2.0, 3.0, 4.0};
  const CurveSpec spec = validate_spec(e);
  Divisor mu;
  mu.points = {make_point(spec, mu_z, 1)};
  return init_solution(spec, mu, 1.0, 0);
}

void genus0_closed_form(Outcome& out) {
  const auto t0 = Clock::now();
  const LatticeSolution sol = genus0_solution(1.0, 4.0, 1, 1.0, 0, -10, 10);
  double a_err = 0.0, ab_err = 0.0;
  for (int n = -10; n <= 10; ++n) {
    const cplx a = sol.alpha[n + 10], b = sol.beta[n + 10];
    const double exact = std::pow(-2.0, n);
    a_err = std::max(a_err, std::abs(a - exact) / std::abs(exact));
    ab_err = std::max(ab_err, std::abs(a * b - 9.0 / 8.0) / (9.0 / 8.0));
  }
  const LatticeSeq seq = sol.seq();
  const HierarchyCoefficients co = run_recursion(seq, {-2.5}, 0, 0);
  double sb = 0.0;
  for (int n = -10; n <= 10; ++n) {
    const auto r = sb_residual(co, seq, 2.0, n);
    if (!std::isfinite(r.first.real()) || !std::isfinite(r.second.real())) continue;
    const double sa = std::max(std::abs(seq.a(n)), std::abs(seq.a(n + 1)));
    const double sbeta = std::max(std::abs(seq.b(n)), std::abs(seq.b(n - 1)));
    sb = std::max({sb, std::abs(r.first) / sa, std::abs(r.second) / sbeta});
  }
  const double elapsed = seconds_since(t0);
  out.require(a_err <= 1e-12, "alpha_rel", a_err, 1e-12);
  out.require(ab_err <= 1e-12, "alpha_beta_rel", ab_err, 1e-12);
  out.require(sb <= 1e-12, "sb0", sb, 1e-12);
  out.require(elapsed < 1.0, "seconds", elapsed, 1.0);
}

void period_oracle(Outcome& out) {
  const auto t0 = Clock::now();
  const double rho = ellip_k(std::sqrt(3.0) / 2.0) / ellip_k(0.5);
  std::vector<cplx> e = {1.0, 2.0, 3.0, 4.0};
  const CurveSpec spec = validate_spec(e);
  const PeriodData pd = compute_periods(spec, build_homology(spec));
  const cplx tau = pd.tau(0, 0);
  const double err = std::min(std::abs(tau - cplx(0.0, rho)), std::abs(tau - cplx(0.0, 1.0 / rho)));
  const double frozen = std::abs(tau - cplx(0.0, 1.2792615711710065));
  const double elapsed = seconds_since(t0);
  out.require(err <= 1e-8, "agm_distance", err, 1e-8);
  out.require(frozen <= 1e-8, "frozen_branch", frozen, 1e-8);
  out.require(elapsed < 5.0, "seconds", elapsed, 5.0);
}

void theta_suite(Outcome& out) {
  ThetaParams unit;
  unit.tau = CMat::Constant(1, 1, cplx(0.0, 1.0));
  double direct = 0.0;
  for (int n = -40; n <= 40; ++n) direct += std::exp(-std::numbers::pi * n * n);
  const cplx t0 = theta(CVec::Zero(1), unit);
  out.require(std::abs(t0 - 1.086434811213308) <= 1e-12, "theta0_vs_reference", std::abs(t0 - 1.086434811213308), 1e-12);
  out.require(std::abs(t0 - direct) <= 1e-12, "theta0_vs_direct_sum", std::abs(t0 - direct), 1e-12);

  std::vector<cplx> e = {1.0, 2.0, 3.0, 4.0, cplx(2.5, 2.0), cplx(1.0, -2.0)};
  const CurveSpec spec = validate_spec(e);
  ThetaParams tp;
  tp.tau = compute_periods(spec, build_homology(spec)).tau;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> k(-2, 2);
  double quasi = 0.0, parity = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    CVec z(2);
    Eigen::VectorXd m(2), n(2);
    for (int j = 0; j < 2; ++j) {
      z(j) = cplx(u(rng), 0.5 * u(rng));
      m(j) = k(rng);
      n(j) = k(rng);
    }
    const CVec nc = n.cast<cplx>();
    const CVec shifted = z + m.cast<cplx>() + tp.tau * nc;
    const cplx factor = std::exp(-std::numbers::pi * cplx(0.0, 1.0) * nc.dot(tp.tau * nc) -
                                 2.0 * std::numbers::pi * cplx(0.0, 1.0) * nc.dot(z));
    const cplx lhs = theta(shifted, tp), rhs = factor * theta(z, tp);
    quasi = std::max(quasi, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
    const cplx plus = theta(z, tp), minus = theta(-z, tp);
    parity = std::max(parity, std::abs(plus - minus) / std::abs(plus));
  }
  out.require(quasi <= 1e-10, "quasi_periodicity", quasi, 1e-10);
  out.require(parity <= 1e-14, "parity", parity, 1e-14);
}

void abelian_checks(Outcome& out) {
  const SolutionState st = genus1_state(cplx(2.5, 0.6));
  const AbelianSetup& ab = st.abelian;
  double a_per = 0.0, res = 0.0;
  for (const ThirdKindData* tk : {&ab.minus, &ab.plus}) {
    for (int j = 0; j < st.genus(); ++j)
      a_per = std::max(a_per, std::abs(tk->integrate(st.periods.homology.a_values[j])));
    const Special t = tk->target > 0 ? Special::PinfPlus : Special::PinfMinus;
    res = std::max(res, std::abs(residue_at(st.spec, *tk, Special::P0Minus) - 1.0));
    res = std::max(res, std::abs(residue_at(st.spec, *tk, t) + 1.0));
  }
  const double drift = abel_invariant_drift(st, 10, 17);
  out.require(a_per <= 1e-8, "a_periods", a_per, 1e-8);
  out.require(res <= 1e-8, "residues", res, 1e-8);
  out.require(ab.b_period_residual <= 1e-7, "b_period_relation", ab.b_period_residual, 1e-7);
  out.require(ab.identity_residual <= 1e-8, "omega0_identity", ab.identity_residual, 1e-8);
  out.require(drift <= 1e-7, "abel_invariant_drift", drift, 1e-7);
}

void genus1_end_to_end(Outcome& out) {
  const auto t0 = Clock::now();
  const SolutionState st = genus1_state(cplx(2.5, 0.6));
  VerifyConfig cfg;
  cfg.n_min = -5;
  cfg.n_max = 5;
  cfg.riccati_points = 10;
  const VerificationReport rep = full_report(st, cfg);
  const std::vector<std::pair<const char*, double>> wanted = {
      {"riccati", 1e-6}, {"transfer", 1e-6}, {"eigenrelation", 1e-6}, {"R_match", 1e-7},
      {"R_drift", 1e-8}, {"trace", 1e-6},    {"product", 1e-8},       {"divisor_flow", 1e-6},
      {"ba_product", 1e-6}};
  for (const auto& [name, tol] : wanted) {
    const Residual* r = rep.find(name);
    if (!r) {
      out.pass = false;
      out.detail << " missing " << name << ";";
      continue;
    }
    out.require(!r->skipped && r->samples > 0 && r->max <= tol, name, r->max, tol);
  }
  const double elapsed = seconds_since(t0);
  out.require(elapsed < 60.0, "seconds", elapsed, 60.0);
}

void unit_circle(Outcome& out) {
  std::vector<cplx> e = {std::polar(1.0, 0.5), std::polar(1.0, -0.5), std::polar(1.0, 2.0), std::polar(1.0, -2.0)};
  const CurveSpec spec = validate_spec(e);
  Divisor mu;
  mu.points = {make_point(spec, cplx(0.3, 0.4), 1)};
  const SolutionState st = init_solution(spec, mu, cplx(0.3, 0.1), 0);
  const double gf = std::abs(growth_factor(st) - 1.0);
  const LatticeSolution sol = solve_window(st, -20, 20);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const cplx& a : sol.alpha) {
    lo = std::min(lo, std::abs(a));
    hi = std::max(hi, std::abs(a));
  }
  out.require(gf <= 1e-6, "growth_factor_deviation", gf, 1e-6);
  out.require(hi / lo <= 1.0 + 1e-4, "max_over_min_modulus", hi / lo, 1.0 + 1e-4);
}

void hierarchy_algebra(Outcome& out) {
  double dual = 0.0, low = 0.0, expl = 0.0, scaling = 0.0;
  for (unsigned trial = 0; trial < 5; ++trial) {
    const LatticeSeq s = random_seq(0, 19, 100 + trial);
    for (int p : {0, 1, 2}) {
      std::vector<cplx> c = {cplx(0.3, -0.2), cplx(0.1, 0.7), cplx(-0.5, 0.4)};
      c.resize(p + 1);
      const HierarchyCoefficients co = run_recursion(s, c, p, 10);
      dual = std::max(dual, dual_identity_check(co, s));
      for (int k = 0; k <= p + 1; ++k) {
        const cplx ref = r_coefficient(co, k, 10);
        for (int n = 0; n <= 19; ++n) {
          const cplx v = r_coefficient(co, k, n);
          if (std::isfinite(v.real())) low = std::max(low, std::abs(v - ref) / std::max(1.0, std::abs(ref)));
        }
      }
      const cplx g(0.4, 1.3), A(0.6, -1.3);
      LatticeSeq t = s;
      for (auto& a : t.alpha) a *= A;
      for (auto& b : t.beta) b /= A;
      const HierarchyCoefficients cs = run_recursion(t, c, p, 10);
      for (int n = 0; n <= 19; ++n) {
        const auto r = sb_residual(co, s, g, n), rs = sb_residual(cs, t, g, n);
        if (!std::isfinite(r.first.real()) || !std::isfinite(r.second.real())) continue;
        scaling = std::max({scaling, std::abs(rs.first - A * r.first) / std::abs(A * r.first),
                            std::abs(rs.second - r.second / A) / std::abs(r.second / A)});
        if (p <= 1) {
          const auto x = sb_residual_explicit(s, p, c[0], g, n);
          expl = std::max({expl, std::abs(r.first - x.first), std::abs(r.second - x.second)});
        }
      }
    }
  }
  out.require(dual <= 1e-12, "dual_identity", dual, 1e-12);
  out.require(low <= 1e-10, "invariant_constancy", low, 1e-10);
  out.require(expl <= 1e-12, "explicit_forms", expl, 1e-12);
  out.require(scaling <= 1e-12, "scaling_law", scaling, 1e-12);
}

void theta_divisor(Outcome& out) {
  std::vector<cplx> e = {1.0, 2.0, 3.0, 4.0};
  const CurveSpec spec = validate_spec(e);
  const PeriodData pd = compute_periods(spec, build_homology(spec));
  const AbelianSetup ab = build_abelian(spec, pd);
  const RiemannConstants rc = riemann_constants(spec, pd, ab.registry);
  const ThetaParams tp{pd.tau};
  double worst = 0.0;
  for (const SurfacePoint& q : random_points(spec, 5, 41)) {
    const CVec aq = abel_point(q, pd, ab.registry);
    const double at_q = std::abs(theta(rc.xi - abel_point(q, pd, ab.registry) + aq, tp));
    std::vector<double> mags;
    for (const SurfacePoint& p : random_points(spec, 31, 43))
      mags.push_back(std::abs(theta(rc.xi - abel_point(p, pd, ab.registry) + aq, tp)));
    std::nth_element(mags.begin(), mags.begin() + 15, mags.end());
    worst = std::max(worst, at_q / mags[15]);
  }
  out.require(worst <= 1e-6, "vanishing_ratio", worst, 1e-6);
}

}  // namespace

int main() {
  run(1, "genus-0 closed form", genus0_closed_form);
  run(2, "period matrix against the AGM oracle", period_oracle);
  run(3, "theta function suite", theta_suite);
  run(4, "abelian differential self-checks", abelian_checks);
  run(5, "genus-1 end-to-end pipeline", genus1_end_to_end);
  run(6, "unit-circle quasi-periodicity", unit_circle);
  run(7, "hierarchy algebra", hierarchy_algebra);
  run(8, "theta divisor vanishing", theta_divisor);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures;
}
