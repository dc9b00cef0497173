#include <doctest.h>

#include "dehnvol/complex.hpp"

using namespace dehnvol;

namespace {

FacePairingData fig8_pairing() { return census_figure_eight().pairing(); }

FacePairingData rotated_pairing() {
  // same two tetrahedra, every face-target rotated by one: orientable but
  // the cusp link has genus 2
  FacePairingData fp;
  fp.tetrahedron_count = 2;
  int target[4] = {1, 2, 3, 0};
  for (int f = 0; f < 4; ++f) {
    int nf = target[f];
    std::array<int, 4> perm{};
    int src[3], dst[3], si = 0, di = 0;
    for (int v = 0; v < 4; ++v) {
      if (v != f) src[si++] = v;
      if (v != nf) dst[di++] = v;
    }
    for (int i = 0; i < 3; ++i) perm[src[i]] = dst[i];
    perm[f] = nf;
    fp.gluings.push_back({0, f, 1, nf, perm});
    std::array<int, 4> inv{};
    for (int v = 0; v < 4; ++v) inv[perm[v]] = v;
    fp.gluings.push_back({1, nf, 0, f, inv});
  }
  return fp;
}

}  // namespace

TEST_CASE("figure-eight census combinatorics") {
  auto cx = census_figure_eight();
  CHECK(cx.size() == 2);
  CHECK(cx.orientation(0) == 1);
  CHECK(cx.orientation(1) == -1);
  CHECK(cx.num_edge_classes() == 2);
  // classes partition the 12 tetrahedron edges
  size_t total = 0;
  for (int c = 0; c < 2; ++c) {
    CHECK(cx.class_members(c).size() == 6);
    total += cx.class_members(c).size();
  }
  CHECK(total == 12);
  for (int t = 0; t < 2; ++t)
    for (int e = 0; e < 6; ++e) {
      auto [i, j] = edge_vertices(e);
      int c = cx.edge_class(t, i, j);
      CHECK(c >= 0);
      CHECK(c < 2);
    }
  CHECK(cx.num_short_orbits() == 12);
  CHECK(cx.num_cusps() == 1);
  const auto& cusp = cx.cusp(0);
  CHECK(cusp.triangles.size() == 8);
  CHECK(cusp.edges.size() == 12);
  CHECK(int(cusp.vertices.size()) - int(cusp.edges.size()) +
            int(cusp.triangles.size()) ==
        0);
  CHECK(3 * cusp.triangles.size() == 2 * cusp.edges.size());
  CHECK(cusp.spanning_tree.size() == cusp.vertices.size() - 1);
  for (int e = 0; e < cx.num_short_orbits(); ++e)
    CHECK(cx.orbit_members(e).size() == 2);
  // bundled sigma template matches the published values
  CHECK(cx.has_template());
  auto tval = [&](const std::string& label) {
    auto [o, d] = cx.labeled_edge(label);
    auto m = cx.sigma_template().values[o];
    return d > 0 ? m : m.inverse();
  };
  CHECK(tval("s3") == Monomial::parse("L*M", 1));
  CHECK(tval("s1") == Monomial::parse("L^-1*M^-2", 1));
  for (const char* lb : {"s4", "s7", "s10"}) CHECK(tval(lb).is_one());
  for (const char* lb : {"s2", "s5", "s8", "s11"})
    CHECK(tval(lb) == Monomial::parse("M", 1));
  for (const char* lb : {"s6", "s9", "s12"})
    CHECK(tval(lb) == Monomial::parse("M^-1", 1));
}

TEST_CASE("deterministic construction") {
  auto a = save_complex(census_figure_eight());
  auto b = save_complex(census_figure_eight());
  CHECK(a == b);
}

TEST_CASE("build errors") {
  SUBCASE("unglued face") {
    FacePairingData fp;
    fp.tetrahedron_count = 1;
    CHECK_THROWS_WITH_AS(build_complex(fp, {}), doctest::Contains("unglued"),
                         complex_error);
  }
  SUBCASE("non-involutive gluing") {
    auto fp = fig8_pairing();
    fp.gluings[0].perm = {2, 0, 3, 1};
    CHECK_THROWS_AS(build_complex(fp, {{{{1, -1}}, {{2, 1}}}}), complex_error);
  }
  SUBCASE("orderings disagree on a face") {
    auto fp = fig8_pairing();
    auto& g = fp.gluings[0];
    std::swap(g.perm[1], g.perm[3]);
    for (auto& h : fp.gluings)
      if (h.tet == g.nbr_tet && h.face == g.nbr_face)
        for (int v = 0; v < 4; ++v) h.perm[g.perm[v]] = v;
    CHECK_THROWS_WITH_AS(build_complex(fp, {{{{1, -1}}, {{2, 1}}}}),
                         doctest::Contains("orderings"), complex_error);
  }
  SUBCASE("corrupted census fails the torus check") {
    PeripheralCurve mu{{1, -1}}, lam{{2, 1}};
    CHECK_THROWS_WITH_AS(build_complex(rotated_pairing(), {{mu, lam}}),
                         doctest::Contains("torus"), complex_error);
  }
  SUBCASE("orientation override must match gluing parity") {
    auto cx = census_figure_eight();
    CHECK_THROWS_AS(build_complex(cx.pairing(),
                                  {{cx.cusp(0).meridian, cx.cusp(0).longitude}},
                                  std::vector<int>{1, 1}),
                    complex_error);
    auto flipped = build_complex(cx.pairing(),
                                 {{cx.cusp(0).meridian, cx.cusp(0).longitude}},
                                 std::vector<int>{-1, 1});
    CHECK(flipped.orientation(0) == -1);
  }
  SUBCASE("peripheral path must close") {
    auto cx = census_figure_eight();
    PeripheralCurve open_path{{2, 1}, {5, -1}};
    CHECK_THROWS_WITH_AS(
        build_complex(cx.pairing(), {{cx.cusp(0).meridian, open_path}}),
        doctest::Contains("closed"), complex_error);
  }
}

TEST_CASE("save/load round trip") {
  auto cx = census_figure_eight();
  auto bytes = save_complex(cx);
  auto cx2 = load_complex(bytes);
  CHECK(save_complex(cx2) == bytes);
  CHECK(cx2.name() == "fig8");
  CHECK(cx2.num_edge_classes() == 2);
  CHECK(cx2.has_template());
  CHECK(cx2.cusp(0).meridian == cx.cusp(0).meridian);
  CHECK(cx2.cusp(0).longitude == cx.cusp(0).longitude);

  SUBCASE("truncated document") {
    CHECK_THROWS_WITH_AS(load_complex(bytes.substr(0, bytes.size() / 2)),
                         doctest::Contains("malformed"), complex_error);
  }
  SUBCASE("version mismatch") {
    auto bad = bytes;
    bad.replace(bad.find("\"format_version\": 1"),
                std::string("\"format_version\": 1").size(),
                "\"format_version\": 99");
    CHECK_THROWS_WITH_AS(load_complex(bad), doctest::Contains("format_version"),
                         complex_error);
  }
  SUBCASE("duplicate long-edge class id") {
    auto bad = bytes;
    auto pos = bad.find("\"id\": 1");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 7, "\"id\": 0");
    CHECK_THROWS_WITH_AS(load_complex(bad), doctest::Contains("duplicate"),
                         complex_error);
  }
}

TEST_CASE("peripheral curves must span the cusp homology") {
  auto cx = census_figure_eight();
  CHECK_THROWS_WITH_AS(
      build_complex(cx.pairing(), {{cx.cusp(0).meridian, cx.cusp(0).meridian}},
                    std::vector<int>{1, -1}),
      doctest::Contains("homology basis"), complex_error);
}
