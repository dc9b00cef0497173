#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dehnvol/cocycle.hpp"

using namespace dehnvol;
using std::numbers::pi;

namespace {

const cplx kM15(0.840594690995942215, 0.0074509727604470163);
const cplx kL15(-0.838677941946446161, -0.607066548169527312);

std::mt19937_64 rng(17);
cplx random_nonzero() {
  std::uniform_real_distribution<double> mod(0.3, 3.0), ph(0, 2 * pi);
  return std::polar(mod(rng), ph(rng));
}

TruncatedComplex census_without_template() {
  auto cx = census_figure_eight();
  return build_complex(cx.pairing(),
                       {{cx.cusp(0).meridian, cx.cusp(0).longitude}},
                       std::vector<int>{1, -1}, "fig8-bare");
}

}  // namespace

TEST_CASE("monomial parse/print/eval") {
  auto m = Monomial::parse("M^-2*L^-1", 1);
  CHECK(m.exps[0] == std::pair{-2, -1});
  CHECK(m.str() == "M^-2*L^-1");
  CHECK(Monomial::parse("1", 1).is_one());
  CHECK(Monomial::parse("L*M", 1) == Monomial::parse("M*L", 1));
  CHECK(std::abs(m.eval({{cplx(2.0), cplx(4.0)}}) - cplx(1.0 / 16.0)) < 1e-15);
  CHECK_THROWS_AS(Monomial::parse("M3", 1), cocycle_error);
  CHECK_THROWS_AS(Monomial::parse("Q", 1), cocycle_error);
}

TEST_CASE("sigma from the bundled template") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  CHECK(sigma.triangle_residual() < 1e-13);
  auto [o1, d1] = cx.labeled_edge("s1");
  CHECK(std::abs(sigma.value(o1, d1) - 1.0 / (kL15 * kM15 * kM15)) < 1e-12);
  CHECK(std::abs(induced_hom(sigma, 0, cx.cusp(0).meridian) - kM15) < 1e-13);
  CHECK(std::abs(induced_hom(sigma, 0, cx.cusp(0).longitude) - kL15) < 1e-13);
  CHECK_THROWS_AS(sigma_from_holonomy(cx, {{cplx(0), kL15}}), cocycle_error);
}

TEST_CASE("sigma from the fundamental-cycle construction") {
  auto cx = census_without_template();
  for (int trial = 0; trial < 20; ++trial) {
    cplx M = random_nonzero(), L = random_nonzero();
    auto sigma = sigma_from_holonomy(cx, {{M, L}});
    CHECK(sigma.triangle_residual() < 1e-13);
    CHECK(std::abs(induced_hom(sigma, 0, cx.cusp(0).meridian) - M) < 1e-12);
    CHECK(std::abs(induced_hom(sigma, 0, cx.cusp(0).longitude) - L) < 1e-12);
  }
  // targets (1,1) give the trivial cocycle on the tree construction
  auto sigma1 = sigma_from_holonomy(cx, {{cplx(1), cplx(1)}});
  for (const cplx& v : sigma1.values()) CHECK(std::abs(v - 1.0) < 1e-15);
}

TEST_CASE("induced_hom paths") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  CHECK(induced_hom(sigma, 0, {}) == cplx(1));
  // commutator: both bundled curves pass through the same vertex here
  auto mu = cx.cusp(0).meridian, lam = cx.cusp(0).longitude;
  auto inv = [](PeripheralCurve p) {
    PeripheralCurve r;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
      r.push_back({it->first, -it->second});
    return r;
  };
  PeripheralCurve comm = mu;
  for (auto& x : lam) comm.push_back(x);
  for (auto& x : inv(mu)) comm.push_back(x);
  for (auto& x : inv(lam)) comm.push_back(x);
  CHECK(std::abs(induced_hom(sigma, 0, comm) - 1.0) < 1e-13);
  // non-closed path rejected
  PeripheralCurve open_path{{2, 1}, {5, -1}};
  CHECK_THROWS_AS(induced_hom(sigma, 0, open_path), cocycle_error);
}

TEST_CASE("select_b") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  FillingVector kappa{{true, 1, 5}};
  SUBCASE("default minimizes |u|+|v|") {
    auto b = select_b(sigma, kappa);
    CHECK(b.entries[0].u == -1);
    CHECK(b.entries[0].v == 1);
    CHECK(1 * b.entries[0].u + 5 * b.entries[0].v == 4);
    CHECK(std::abs(1.0 * b.entries[0].b_mu + 5.0 * b.entries[0].b_lambda) <
          1e-12);
  }
  SUBCASE("published override accepted") {
    auto b = select_b(sigma, kappa, {{{4, 0}}});
    CHECK(b.entries[0].u == 4);
    CHECK(b.entries[0].v == 0);
    CHECK(std::abs(1.0 * b.entries[0].b_mu + 5.0 * b.entries[0].b_lambda) <
          1e-12);
  }
  SUBCASE("override must satisfy the filling equation") {
    CHECK_THROWS_AS(select_b(sigma, kappa, {{{1, 1}}}), cocycle_error);
  }
  SUBCASE("(2,5) row admits the published (2,0)") {
    const cplx M(0.841491915878372892, 0.0148492847212854487);
    const cplx L(-0.871206545089561035, -0.623621821129431622);
    auto s2 = sigma_from_holonomy(cx, {{M, L}});
    auto b = select_b(s2, FillingVector{{true, 2, 5}}, {{{2, 0}}});
    CHECK(b.entries[0].u == 2);
    CHECK(std::abs(2.0 * b.entries[0].b_mu + 5.0 * b.entries[0].b_lambda) <
          1e-12);
  }
  SUBCASE("holonomy constraint violated") {
    auto bad = sigma_from_holonomy(cx, {{cplx(0.5, 0.1), cplx(1.5)}});
    CHECK_THROWS_AS(select_b(bad, kappa), cocycle_error);
  }
  SUBCASE("unfilled cusps") {
    auto s1 = sigma_from_holonomy(cx, {{cplx(1), cplx(1)}});
    auto b1 = select_b(s1, FillingVector{{false, 0, 0}});
    CHECK(b1.entries[0].u == 0);
    CHECK(b1.entries[0].v == 0);
    auto s2 = sigma_from_holonomy(cx, {{cplx(1), cplx(-1)}});
    auto b2 = select_b(s2, FillingVector{{false, 0, 0}});
    CHECK(b2.entries[0].v == -1);
    CHECK(std::abs(b2.entries[0].b_lambda) < 1e-15);
    auto s3 = sigma_from_holonomy(cx, {{cplx(0.5), cplx(1)}});
    CHECK_THROWS_AS(select_b(s3, FillingVector{{false, 0, 0}}), cocycle_error);
  }
}

TEST_CASE("parse_filling") {
  auto f = parse_filling("1/5,inf");
  CHECK(f.size() == 2);
  CHECK(f[0].filled);
  CHECK(f[0].r == 1);
  CHECK(f[0].s == 5);
  CHECK(!f[1].filled);
  CHECK_THROWS_AS(parse_filling("2/4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_filling("nope"), std::invalid_argument);
}

TEST_CASE("lift_log_cocycle") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  auto b = select_b(sigma, FillingVector{{true, 1, 5}}, {{{4, 0}}});
  auto a = lift_log_cocycle(sigma, b);
  CHECK(a.triangle_residual() < 1e-12);
  CHECK(std::abs(induced_hom(a, 0, cx.cusp(0).meridian) - b.entries[0].b_mu) <
        1e-12);
  CHECK(std::abs(induced_hom(a, 0, cx.cusp(0).longitude) -
                 b.entries[0].b_lambda) < 1e-12);
  // congruence spot check on random runs: residues (a - log sigma)/(pi i)
  // are integral
  std::uniform_int_distribution<int> uvpick(-3, 3);
  int edges_checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    cplx M = random_nonzero(), L = random_nonzero();
    auto s = sigma_from_holonomy(cx, {{M, L}});
    PeripheralLog pb;
    PeripheralLog::Entry e;
    e.u = uvpick(rng);
    e.v = uvpick(rng);
    e.b_mu = std::log(M) + cplx(0, pi) * double(e.u);
    e.b_lambda = std::log(L) + cplx(0, pi) * double(e.v);
    pb.entries.push_back(e);
    auto al = lift_log_cocycle(s, pb);
    for (int o = 0; o < cx.num_short_orbits(); ++o) {
      cplx res = (al.value(o, +1) - std::log(s.value(o, +1))) / cplx(0, pi);
      CHECK(std::abs(res - cplx(std::round(res.real()), 0)) < 1e-9);
      ++edges_checked;
    }
    CHECK(std::abs(induced_hom(al, 0, cx.cusp(0).meridian) - e.b_mu) < 1e-11);
  }
  CHECK(edges_checked >= 1000);
}

TEST_CASE("template-exponent a-assignment lies in the set A") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  auto b = select_b(sigma, FillingVector{{true, 1, 5}}, {{{4, 0}}});
  cplx bm = b.entries[0].b_mu, bl = b.entries[0].b_lambda;
  // a(s4)=a(s7)=a(s10)=0, a(s2)=a(s5)=a(s8)=a(s11)=b(mu),
  // a(s6)=a(s9)=a(s12)=-b(mu), a(s1)=-b(lambda)-2b(mu), a(s3)=b(lambda)+b(mu)
  std::vector<cplx> vals(cx.num_short_orbits(), 0.0);
  for (int o = 0; o < cx.num_short_orbits(); ++o) {
    auto [x, y] = cx.sigma_template().values[o].exps[0];
    vals[o] = double(x) * bm + double(y) * bl;
  }
  LogCocycle a(cx, vals);
  CHECK(a.triangle_residual() < 1e-12);
  for (int o = 0; o < cx.num_short_orbits(); ++o) {
    cplx res = (a.value(o, +1) - std::log(sigma.value(o, +1))) / cplx(0, pi);
    CHECK(std::abs(res - cplx(std::round(res.real()), 0)) < 1e-9);
  }
  CHECK(std::abs(induced_hom(a, 0, cx.cusp(0).meridian) - bm) < 1e-12);
  CHECK(std::abs(induced_hom(a, 0, cx.cusp(0).longitude) - bl) < 1e-12);
}

TEST_CASE("gauge action") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  SUBCASE("identity tau") {
    std::vector<cplx> tau(cx.num_corners(), 1.0);
    auto s2 = act_tau(sigma, tau);
    for (int o = 0; o < cx.num_short_orbits(); ++o)
      CHECK(std::abs(s2.value(o, 1) - sigma.value(o, 1)) < 1e-15);
  }
  SUBCASE("induced homomorphism unchanged") {
    std::vector<cplx> tau;
    for (int v = 0; v < cx.num_corners(); ++v) tau.push_back(random_nonzero());
    auto s2 = act_tau(sigma, tau);
    CHECK(s2.triangle_residual() < 1e-12);
    CHECK(std::abs(induced_hom(s2, 0, cx.cusp(0).meridian) - kM15) < 1e-12);
    CHECK(std::abs(induced_hom(s2, 0, cx.cusp(0).longitude) - kL15) < 1e-12);
  }
  SUBCASE("group action") {
    std::vector<cplx> t1, t2, t12;
    for (int v = 0; v < cx.num_corners(); ++v) {
      t1.push_back(random_nonzero());
      t2.push_back(random_nonzero());
      t12.push_back(t1.back() * t2.back());
    }
    auto a = act_tau(act_tau(sigma, t1), t2);
    auto b = act_tau(sigma, t12);
    for (int o = 0; o < cx.num_short_orbits(); ++o)
      CHECK(std::abs(a.value(o, 1) - b.value(o, 1)) < 1e-12);
  }
  SUBCASE("zero tau rejected") {
    std::vector<cplx> tau(cx.num_corners(), 1.0);
    tau[0] = 0;
    CHECK_THROWS_AS(act_tau(sigma, tau), cocycle_error);
  }
}

TEST_CASE("template inconsistent with holonomy targets") {
  auto cx = census_figure_eight();
  // replace the bundled template by one whose induced holonomy is trivial
  SigmaTemplate flat;
  flat.values.assign(cx.num_short_orbits(), Monomial(cx.num_cusps()));
  attach_template(cx, std::move(flat), {});
  CHECK_THROWS_WITH_AS(sigma_from_holonomy(cx, {{kM15, kL15}}),
                       doctest::Contains("inconsistent"), cocycle_error);
}

TEST_CASE("b incompatible with sigma is rejected") {
  auto cx = census_figure_eight();
  auto sigma = sigma_from_holonomy(cx, {{kM15, kL15}});
  PeripheralLog b;
  PeripheralLog::Entry e;
  e.b_mu = std::log(kM15) + cplx(0, 0.3);  // not a pi i multiple
  e.b_lambda = std::log(kL15);
  b.entries.push_back(e);
  CHECK_THROWS_WITH_AS(lift_log_cocycle(sigma, b),
                       doctest::Contains("incompatible"), cocycle_error);
}
