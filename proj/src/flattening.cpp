#include "dehnvol/flattening.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "dehnvol/dilog.hpp"

namespace dehnvol {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kIPi(0, kPi);

// a-term patterns of the three log-parameter slots: (i, j->k) per vertex
const int kSlotA[3][4][3] = {
    {{0, 2, 1}, {1, 3, 0}, {2, 0, 3}, {3, 1, 2}},  // slot 0, pair {03},{12}
    {{0, 1, 3}, {1, 0, 2}, {2, 3, 1}, {3, 2, 0}},  // slot 1, pair {02},{13}
    {{0, 3, 2}, {1, 2, 3}, {2, 1, 0}, {3, 0, 1}},  // slot 2, pair {01},{23}
};
// log c incidences per slot: (plus pair, minus pair) as edge indices
const int kSlotC[3][2][2] = {
    {{1, 4}, {0, 5}},  // slot0: + {02},{13}  - {01},{23}
    {{0, 5}, {2, 3}},  // slot1: + {01},{23}  - {03},{12}
    {{2, 3}, {1, 4}},  // slot2: + {03},{12}  - {02},{13}
};

int perm_sign4(int a, int b, int c, int d) {
  int p[4] = {a, b, c, d};
  int s = 1;
  for (int x = 0; x < 4; ++x)
    for (int y = x + 1; y < 4; ++y)
      if (p[x] > p[y]) s = -s;
  return s;
}

}  // namespace

std::array<cplx, 3> FlatteningSet::log_params(int t) const {
  const auto& ft = tets[t];
  cplx lz = std::log(ft.z), l1z = std::log(1.0 - ft.z);
  return {lz + double(ft.p) * kIPi, -l1z + double(ft.q) * kIPi,
          -lz + l1z - double(ft.p + ft.q) * kIPi};
}

double FlatteningSet::sum_residual() const {
  double worst = 0;
  for (const auto& t : tets)
    worst = std::max(worst, std::abs(t.alpha[0] + t.alpha[1] + t.alpha[2]));
  return worst;
}

double FlatteningSet::congruence_residual() const {
  double worst = 0;
  for (const auto& t : tets) {
    cplx logs[3] = {std::log(t.z), std::log(1.0 / (1.0 - t.z)),
                    std::log(1.0 - 1.0 / t.z)};
    for (int s = 0; s < 3; ++s) {
      cplx r = (t.alpha[s] - logs[s]) / kIPi;
      worst = std::max(worst, std::abs(r - cplx(std::round(r.real()), 0)));
    }
  }
  return worst;
}

FlatteningSet build_flattenings(const PtolemyAssignment& c, const LogCocycle& a,
                                const MultiplicativeCocycle& sigma,
                                bool strict) {
  const auto& cx = sigma.complex();
  auto crs = cross_ratios(c, sigma);  // throws on degenerate shapes
  std::vector<cplx> logc(cx.num_edge_classes());
  for (int cl = 0; cl < cx.num_edge_classes(); ++cl) logc[cl] = std::log(c.c[cl]);

  FlatteningSet out;
  for (int t = 0; t < cx.size(); ++t) {
    FlatteningSet::Tet ft;
    ft.eps = cx.orientation(t);
    ft.z = crs.z[t][0];
    for (int s = 0; s < 3; ++s) {
      cplx al = 0;
      for (const auto& jk : kSlotA[s]) al += a.value(t, jk[0], jk[1], jk[2]);
      for (int m = 0; m < 2; ++m) {
        auto [i, j] = edge_vertices(kSlotC[s][0][m]);
        al += logc[cx.edge_class(t, i, j)];
      }
      for (int m = 0; m < 2; ++m) {
        auto [i, j] = edge_vertices(kSlotC[s][1][m]);
        al -= logc[cx.edge_class(t, i, j)];
      }
      ft.alpha[s] = al;
    }
    cplx pr = (ft.alpha[0] - std::log(ft.z)) / kIPi;
    cplx qr = (ft.alpha[1] + std::log(1.0 - ft.z)) / kIPi;
    ft.p = std::lround(pr.real());
    ft.q = std::lround(qr.real());
    if (strict && (std::abs(pr - cplx(double(ft.p), 0)) > 1e-6 ||
                   std::abs(qr - cplx(double(ft.q), 0)) > 1e-6))
      throw flattening_error(
          "branch integers not integral (log-cocycle mismatched with sigma?)");
    out.tets.push_back(ft);
  }
  return out;
}

double edge_condition_check(const FlatteningSet& fl, const TruncatedComplex& cx) {
  double worst = 0;
  for (int cl = 0; cl < cx.num_edge_classes(); ++cl) {
    cplx sum = 0;
    for (auto [t, e] : cx.class_members(cl)) {
      auto [i, j] = edge_vertices(e);
      sum += double(cx.orientation(t)) * fl.log_params(t)[edge_slot(i, j)];
    }
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

namespace {

// ccw order of the corners of triangle (t,i): permutation (j1,j2,j3) of the
// complement with sgn(i,j1,j2,j3) = -eps(t)
std::array<int, 3> ccw_order(const TruncatedComplex& cx, int t, int i) {
  std::array<int, 3> rest;
  int r = 0;
  for (int v = 0; v < 4; ++v)
    if (v != i) rest[r++] = v;
  if (perm_sign4(i, rest[0], rest[1], rest[2]) != -cx.orientation(t))
    std::swap(rest[1], rest[2]);
  return rest;
}

bool is_ccw_arc(const TruncatedComplex& cx, int t, int i, int a, int b) {
  auto o = ccw_order(cx, t, i);
  for (int r = 0; r < 3; ++r)
    if (o[r] == a && o[(r + 1) % 3] == b) return true;
  return false;
}

// member instance of the oriented edge whose triangle lies to its right
std::array<int, 4> right_instance(const TruncatedComplex& cx, int orbit, int dir) {
  for (const auto& [t, i, f] : cx.orbit_members(orbit)) {
    int j = -1, k = -1;
    for (int v = 0; v < 4; ++v)
      if (v != i && v != f) (j < 0 ? j : k) = v;
    if (dir < 0) std::swap(j, k);
    if (is_ccw_arc(cx, t, i, k, j)) return {t, i, j, k};
  }
  throw flattening_error("no right-side instance (non-oriented cusp?)");
}

}  // namespace

NormalPath normal_path_from_edge_path(const TruncatedComplex& cx, int cusp,
                                      const PeripheralCurve& path) {
  NormalPath np;
  np.cusp = cusp;
  const size_t n = path.size();
  for (size_t idx = 0; idx < n; ++idx) {
    auto [o_in, d_in] = path[idx];
    auto [o_out, d_out] = path[(idx + 1) % n];
    auto in = right_instance(cx, o_in, d_in);    // (t,i,j,k), j->k
    auto outi = right_instance(cx, o_out, d_out);
    int t = in[0], i = in[1], corner = in[3];
    int f_entry = 6 - i - in[2] - in[3];
    int t_star = outi[0], i_star = outi[1], c_star = outi[2];
    int s_star = 6 - i_star - outi[2] - outi[3];
    int guard = 0;
    for (;;) {
      np.corners.push_back({t, i, corner});
      int f_exit = -1;
      for (int v = 0; v < 4; ++v)
        if (v != i && v != corner && v != f_entry) f_exit = v;
      if (t == t_star && i == i_star && corner == c_star && f_exit == s_star)
        break;
      const auto& g = cx.gluing(t, f_exit);
      int ni = g.perm[i], nc = g.perm[corner];
      t = g.nbr_tet;
      f_entry = g.nbr_face;
      i = ni;
      corner = nc;
      if (++guard > 4 * cx.size() * 12)
        throw flattening_error("normal-path fan did not close");
    }
  }
  return np;
}

cplx normal_path_sum(const FlatteningSet& fl, const TruncatedComplex& cx,
                     const NormalPath& np) {
  cplx sum = 0;
  for (const auto& [t, i, c] : np.corners) {
    if (i == c) throw flattening_error("normal path corner is degenerate");
    sum += double(cx.orientation(t)) * fl.log_params(t)[edge_slot(i, c)];
  }
  return sum;
}

cplx cusp_condition_check(const FlatteningSet& fl, const LogCocycle& a, int cusp,
                          const PeripheralCurve& gamma) {
  const auto& cx = a.complex();
  cplx b = induced_hom(a, cusp, gamma);  // validates the path
  auto np = normal_path_from_edge_path(cx, cusp, gamma);
  return normal_path_sum(fl, cx, np) - 2.0 * b;
}

cplx psi_of(const PtolemyAssignment& c, const MultiplicativeCocycle& sigma,
            const PeripheralLog& b) {
  auto a = lift_log_cocycle(sigma, b);
  auto fl = build_flattenings(c, a, sigma);
  std::vector<FlatTriple> fts;
  for (const auto& t : fl.tets) fts.push_back({t.z, t.p, t.q, t.eps});
  return psi_sum(fts);
}

double psi_independence_test(const PtolemyAssignment& c,
                             const MultiplicativeCocycle& sigma,
                             const PeripheralLog& b, int trials, unsigned seed) {
  const auto& cx = sigma.complex();
  auto a0 = lift_log_cocycle(sigma, b);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(-3, 3);
  std::vector<cplx> psis;
  for (int tr = 0; tr < trials; ++tr) {
    LogCocycle a = a0;
    if (tr > 0) {
      std::vector<cplx> theta(cx.num_corners());
      for (auto& th : theta) th = cplx(0, kPi * pick(rng));
      a = act_tau(a0, theta);
    }
    auto fl = build_flattenings(c, a, sigma);
    std::vector<FlatTriple> fts;
    for (const auto& t : fl.tets) fts.push_back({t.z, t.p, t.q, t.eps});
    psis.push_back(psi_sum(fts));
  }
  double worst = 0;
  const double pi2 = kPi * kPi;
  for (size_t i = 0; i < psis.size(); ++i)
    for (size_t j = i + 1; j < psis.size(); ++j) {
      cplx d = psis[i] - psis[j];
      double re = reduce_mod(d.real(), pi2);
      re = std::min(re, pi2 - re);
      worst = std::max(worst, re + std::abs(d.imag()));
    }
  return worst;
}

}  // namespace dehnvol
