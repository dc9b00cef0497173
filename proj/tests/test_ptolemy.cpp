#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dehnvol/ptolemy.hpp"

using namespace dehnvol;
using std::numbers::pi;

namespace {

const cplx kM15(0.840594690995942215, 0.0074509727604470163);
const cplx kL15(-0.838677941946446161, -0.607066548169527312);
const cplx kC1(0.19204264046756900, -1.14874710425617367);

std::mt19937_64 rng(23);
cplx random_nonzero(double lo = 0.3, double hi = 3.0) {
  std::uniform_real_distribution<double> mod(lo, hi), ph(0, 2 * pi);
  return std::polar(mod(rng), ph(rng));
}

}  // namespace

TEST_CASE("the census system matches the published equations") {
  auto cx = census_figure_eight();
  // Delta1 (tet 0):  -c(l1)c(l2) = L^-1 M^-2 c(l2)^2 - M^2 c(l1)^2
  // Delta2 (tet 1):   c(l1)c(l2) = c(l2)^2 - L c(l1)^2
  // with l1 = class 1, l2 = class 0; normalized so the mixed coefficient is 1,
  // the coefficient ratios are (KY/KX, KW/KX).
  auto sys = build_symbolic_system(cx);
  auto ratio = [&](int t, int which) {
    Monomial m = (*sys.equations[t].monomials)[which];
    m *= (*sys.equations[t].monomials)[2].inverse();
    return m;
  };
  CHECK(ratio(0, 0) == Monomial::parse("M^2", 1));
  CHECK(ratio(0, 1) == Monomial::parse("L^-1*M^-2", 1));
  CHECK(ratio(1, 0) == Monomial::parse("1", 1));
  CHECK(ratio(1, 1) == Monomial::parse("L", 1));
  // numeric build agrees with the template evaluation
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  auto nsys = build_system(cx, sigma);
  for (int t = 0; t < 2; ++t) {
    CHECK(std::abs(nsys.equations[t].KY / nsys.equations[t].KX -
                   ratio(t, 0).eval({{kM15, kL15}})) < 1e-12);
    CHECK(std::abs(nsys.equations[t].KW / nsys.equations[t].KX -
                   ratio(t, 1).eval({{kM15, kL15}})) < 1e-12);
  }
}

TEST_CASE("trivial sigma gives the undeformed Ptolemy system") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{cplx(1), cplx(1)}});
  auto sys = build_system(cx, sigma);
  for (const auto& eq : sys.equations) {
    CHECK(std::abs(eq.KY - 1.0) < 1e-14);
    CHECK(std::abs(eq.KW - 1.0) < 1e-14);
    CHECK(std::abs(eq.KX - 1.0) < 1e-14);
  }
}

TEST_CASE("solver finds the single solution class") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  auto sys = build_system(cx, sigma);
  auto sols = solve(sys, sigma, 64, 1, 1e-12);
  REQUIRE(sols.size() == 1);
  CHECK(std::abs(sols[0].c[0] - 1.0) < 1e-14);  // gauge normalized
  CHECK(std::abs(sols[0].c[1] - kC1) < 1e-9);
  CHECK(system_residual(sys, sols[0].c) < 1e-12);
  // the reduced variable solves both published quadratics
  cplx z = sols[0].c[1] / sols[0].c[0];
  CHECK(std::abs(1.0 / (kL15 * kM15 * kM15) + z - kM15 * kM15 * z * z) < 1e-10);
  CHECK(std::abs(1.0 - z - kL15 * z * z) < 1e-10);
  // deterministic output
  auto again = solve(sys, sigma, 64, 1, 1e-12);
  REQUIRE(again.size() == 1);
  CHECK(again[0].c == sols[0].c);
}

TEST_CASE("empty variety when (M,L) is off the curve") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{cplx(1), cplx(1)}});
  auto sols = solve(build_system(cx, sigma), sigma, 32, 5, 1e-12);
  CHECK(sols.empty());
}

TEST_CASE("natural cocycle conditions") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  auto sols = solve(build_system(cx, sigma), sigma);
  REQUIRE(sols.size() == 1);
  auto nat = natural_cocycle(sols[0], sigma);
  // determinant exactly one by construction
  for (int t = 0; t < 2; ++t)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        auto m = nat.long_edge(t, i, j);
        CHECK(std::abs(m[0] * m[3] - m[1] * m[2] - 1.0) < 1e-14);
        for (int k = 0; k < 4; ++k) {
          if (k == i || k == j) continue;
          auto s = nat.short_edge(t, i, j, k);
          CHECK(std::abs(s[0] * s[3] - s[1] * s[2] - 1.0) < 1e-14);
        }
      }
  CHECK(nat.face_residual() < 1e-11);
  // short-edge parameters all finite and nonzero
  for (int t = 0; t < 2; ++t)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          if (i == j || i == k || j == k) continue;
          cplx v = short_edge_param(sols[0], sigma, t, i, j, k);
          CHECK(std::isfinite(std::abs(v)));
          CHECK(std::abs(v) > 1e-12);
        }
  // meridian product is upper triangular with diagonal (M, 1/M)
  auto P = nat.boundary_product(cx.cusp(0).meridian);
  CHECK(std::abs(P[2]) < 1e-11);
  CHECK(std::abs(P[0] - kM15) < 1e-11);
  CHECK(std::abs(P[3] - 1.0 / kM15) < 1e-11);
}

TEST_CASE("filling representation check") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  auto sols = solve(build_system(cx, sigma), sigma);
  REQUIRE(sols.size() == 1);
  FillingVector kappa{{true, 1, 5}};
  auto ok = check_filling_representation(sols[0], sigma, kappa);
  CHECK(ok.pass);
  CHECK(ok.residuals[0] < 1e-8);
  // random non-solution fails
  PtolemyAssignment bad = sols[0];
  bad.c[1] *= cplx(1.1, 0.2);
  auto fail = check_filling_representation(bad, sigma, kappa);
  CHECK(!fail.pass);
  CHECK(fail.residuals[0] > 1e-3);
  // complete structure: parabolic traces at (M,L) = (1,-1)
  auto s2 = sigma_from_holonomy(cx, {{cplx(1), cplx(-1)}});
  auto sols2 = solve(build_system(cx, s2), s2);
  REQUIRE(!sols2.empty());
  auto par = check_filling_representation(sols2[0], s2, FillingVector{{false, 0, 0}});
  CHECK(par.pass);
}

TEST_CASE("cross-ratios and gluing equations") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  auto sols = solve(build_system(cx, sigma), sigma);
  REQUIRE(sols.size() == 1);
  auto crs = cross_ratios(sols[0], sigma);
  for (int t = 0; t < 2; ++t) {
    CHECK(std::abs(crs.z[t][1] - 1.0 / (1.0 - crs.z[t][0])) < 1e-10);
    CHECK(std::abs(crs.z[t][2] - (1.0 - 1.0 / crs.z[t][0])) < 1e-10);
  }
  CHECK(gluing_check(crs, cx) < 1e-10);
  // perturbation shows up in the gluing residual
  PtolemyAssignment bad = sols[0];
  bad.c[1] *= 1.01;
  CHECK(gluing_check(cross_ratios(bad, sigma), cx) > 1e-3);
  // diagonal action leaves cross-ratios fixed
  auto acted = act_diagonal(cx, sols[0], {random_nonzero()});
  CHECK(system_residual(build_system(cx, sigma), acted.c) < 1e-10);
  auto crs2 = cross_ratios(acted, sigma);
  for (int t = 0; t < 2; ++t)
    for (int s = 0; s < 3; ++s)
      CHECK(std::abs(crs2.z[t][s] - crs.z[t][s]) < 1e-12);
}

TEST_CASE("complete structure cross-ratios") {
  auto cx = census_figure_eight();
  auto s2 = sigma_from_holonomy(cx, {{cplx(1), cplx(-1)}});
  auto sols2 = solve(build_system(cx, s2), s2);
  REQUIRE(sols2.size() == 2);  // the geometric solution and its mirror
  bool found = false;
  for (const auto& s : sols2) {
    auto crs = cross_ratios(s, s2);
    if (crs.z[0][0].imag() > 0) {
      CHECK(std::abs(crs.z[0][0] - std::polar(1.0, pi / 3.0)) < 1e-9);
      CHECK(std::abs(crs.z[1][0] - std::polar(1.0, -pi / 3.0)) < 1e-9);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("gauge covariance of the deformed system") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  auto sys = build_system(cx, sigma);
  auto sols = solve(sys, sigma);
  REQUIRE(sols.size() == 1);
  std::vector<cplx> tau;
  for (int v = 0; v < cx.num_corners(); ++v) tau.push_back(random_nonzero());
  auto sigma_t = act_tau(sigma, tau);
  auto sys_t = build_system(cx, sigma_t);
  // c^tau solves the transformed system
  auto ct = act_tau(cx, sols[0], tau);
  CHECK(system_residual(sys_t, ct.c) < 1e-10);
  // and the gauge-transformed variety has the same cross-ratios
  auto sols_t = solve(sys_t, sigma_t);
  REQUIRE(sols_t.size() == 1);
  auto crs = cross_ratios(sols[0], sigma);
  auto crs_t = cross_ratios(sols_t[0], sigma_t);
  for (int t = 0; t < 2; ++t)
    for (int s = 0; s < 3; ++s)
      CHECK(std::abs(crs.z[t][s] - crs_t.z[t][s]) < 1e-9);
  // induced holonomy traces along the peripheral curves agree
  auto nat = natural_cocycle(sols[0], sigma);
  auto nat_t = natural_cocycle(sols_t[0], sigma_t);
  for (const auto& p : {cx.cusp(0).meridian, cx.cusp(0).longitude}) {
    auto A = nat.boundary_product(p);
    auto B = nat_t.boundary_product(p);
    CHECK(std::abs((A[0] + A[3]) - (B[0] + B[3])) < 1e-9);
  }
  // tau supported on a single vertex (the proposition's reduction step)
  std::vector<cplx> tau1(cx.num_corners(), 1.0);
  tau1[2] = random_nonzero();
  auto s1 = act_tau(sigma, tau1);
  auto c1 = act_tau(cx, sols[0], tau1);
  CHECK(system_residual(build_system(cx, s1), c1.c) < 1e-12);
}

TEST_CASE("peripheral power paths") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  auto p = peripheral_power_path(cx, 0, 1, 5);
  cplx v = induced_hom(sigma, 0, p);
  cplx want = kM15 * std::pow(kL15, 5.0);
  CHECK(std::abs(v - want) < 1e-12);
  auto pneg = peripheral_power_path(cx, 0, -2, 3);
  CHECK(std::abs(induced_hom(sigma, 0, pneg) -
                 std::pow(kL15, 3.0) / (kM15 * kM15)) < 1e-12);
}

TEST_CASE("degenerate cross-ratio is reported") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  // force z(tet 0) = 1: the slot formula is L M^4 c1^2 / c0^2
  PtolemyAssignment bad;
  bad.targets = sigma.targets();
  bad.c = {cplx(1), std::sqrt(1.0 / (kL15 * std::pow(kM15, 4.0)))};
  CHECK_THROWS_AS(cross_ratios(bad, sigma), ptolemy_error);
  auto crs = cross_ratios(bad, sigma, false);
  CHECK(crs.degenerate);
  CHECK(crs.degenerate_tet == 0);
}
