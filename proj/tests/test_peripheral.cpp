#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dehnvol/peripheral.hpp"

using namespace dehnvol;
using std::numbers::pi;

namespace {
LaurentPoly2 C(long long c) { return LaurentPoly2::monomial(c, 0, 0); }
}

TEST_CASE("sylvester resultant basics") {
  // Res(z^2-1, z^2-1) = 0 (common roots)
  auto r0 = resultant_quadratics({C(-1), C(0), C(1)}, {C(-1), C(0), C(1)});
  CHECK(r0.zero());
  // Res(z^2-2, z^2-3) = 1
  auto r1 = resultant_quadratics({C(-2), C(0), C(1)}, {C(-3), C(0), C(1)});
  CHECK(r1 == C(1));
  // zero leading coefficient rejected
  CHECK_THROWS_AS(
      resultant_quadratics({C(1), C(1), LaurentPoly2{}}, {C(-3), C(0), C(1)}),
      peripheral_error);
}

TEST_CASE("figure-eight A-polynomial") {
  auto cx = census_figure_eight();
  auto poly = apoly_two_tet(cx);
  // seven terms with coefficients (1,-1,-1,-2,-1,-1,1) on the monomial basis
  // (L, L M^2, M^4, L M^4, L^2 M^4, L M^6, L M^8), up to unit and sign
  LaurentPoly2 want;
  want.terms[{0, 1}] = 1;
  want.terms[{2, 1}] = -1;
  want.terms[{4, 0}] = -1;
  want.terms[{4, 1}] = -2;
  want.terms[{4, 2}] = -1;
  want.terms[{6, 1}] = -1;
  want.terms[{8, 1}] = 1;
  CHECK(poly.terms.size() == 7);
  CHECK(poly == want.normalized());
  CHECK(poly.str() == "L - L*M^2 - M^4 - 2*L*M^4 - L^2*M^4 - L*M^6 + L*M^8");
  // at M = 1 the polynomial collapses to -(1+L)^2
  auto pl = poly.at_m_one();
  CHECK(pl == std::map<int, long long>{{0, -1}, {1, -2}, {2, -1}});
}

TEST_CASE("unsupported shapes rejected") {
  auto cx = census_figure_eight();
  // strip the template: apoly needs the bundled monomial coefficients
  auto bare = build_complex(cx.pairing(),
                            {{cx.cusp(0).meridian, cx.cusp(0).longitude}},
                            std::vector<int>{1, -1});
  CHECK_THROWS_AS(apoly_two_tet(bare), ptolemy_error);
}

TEST_CASE("solve_filling reproduces the published rows") {
  auto cx = census_figure_eight();
  struct Row {
    long r, s;
    cplx M, L;
  };
  // (4,5): the published table's L is not on the A-polynomial curve; the
  // value below is the root that satisfies both constraints and reproduces
  // the published Psi.
  std::vector<Row> rows = {
      {1, 5, {0.840594690995942215, 0.0074509727604470163},
       {-0.838677941946446161, -0.607066548169527312}},
      {4, 5, {0.845070245421452497, 0.0292643907355012297},
       {-0.943456821164811605, -0.646320897565598013}},
  };
  for (const auto& row : rows) {
    FillingVector kappa{{true, row.r, row.s}};
    auto cands = solve_filling(cx, kappa, {-4, 4}, 24, 3);
    REQUIRE(!cands.empty());
    const auto& best = select_geometric(cands);
    CHECK(std::abs(best.targets[0].first - row.M) < 1e-6);
    CHECK(std::abs(best.targets[0].second - row.L) < 1e-6);
    CHECK(best.check.pass);
    CHECK(std::abs(std::pow(best.targets[0].first, double(row.r)) *
                       std::pow(best.targets[0].second, double(row.s)) -
                   1.0) < 1e-8);
    REQUIRE(best.k.size() == 1);
    CHECK(best.k[0] == -2);
    // apoly vanishes on the candidate
    auto poly = apoly_two_tet(cx);
    CHECK(std::abs(poly.eval(best.targets[0].first, best.targets[0].second)) <
          1e-7);
  }
}

TEST_CASE("complete structure via parabolic lifts") {
  auto cx = census_figure_eight();
  FillingVector kappa{{false, 0, 0}};
  auto cands = solve_filling(cx, kappa, {-2, 2}, 24, 9);
  REQUIRE(!cands.empty());
  const auto& best = select_geometric(cands);
  CHECK(std::abs(best.targets[0].first - 1.0) < 1e-10);
  CHECK(std::abs(best.targets[0].second + 1.0) < 1e-10);
  CHECK(std::abs(best.volume - 2.02988321281930725) < 1e-9);
  auto sigma = sigma_from_holonomy(cx, best.targets);
  auto crs = cross_ratios(best.c, sigma);
  CHECK(std::abs(crs.z[0][0] - std::polar(1.0, pi / 3.0)) < 1e-9);
}

TEST_CASE("select_geometric") {
  auto cx = census_figure_eight();
  FillingVector kappa{{true, 1, 5}};
  auto cands = solve_filling(cx, kappa, {-3, 3}, 16, 11);
  REQUIRE(!cands.empty());
  const auto& best = select_geometric(cands);
  // permutation invariance
  auto shuffled = cands;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto& best2 = select_geometric(shuffled);
  CHECK(std::abs(best.volume - best2.volume) < 1e-14);
  CHECK(best.targets[0].first == best2.targets[0].first);
  // single candidate returns itself
  std::vector<HolonomyCandidate> one{best};
  CHECK(select_geometric(one).volume == best.volume);
  CHECK_THROWS_AS(select_geometric({}), peripheral_error);
}
