#include "dehnvol/ptolemy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <set>

namespace dehnvol {

namespace {

// the sigma factors of the tetrahedron relation, per tet:
//   KY = s(1,3->0)/s(3,0->1)
//   KW = s(0,1->2) s(2,3->0)/s(3,0->2)
//   KX = s(0,3->2) s(1,2->0)/s(2,0->1)
struct KFactor {
  int i, j, k;  // sigma(t, i, j->k)
  int sign;     // exponent +-1
};
const KFactor kKY[] = {{1, 3, 0, +1}, {3, 0, 1, -1}};
const KFactor kKW[] = {{0, 1, 2, +1}, {2, 3, 0, +1}, {3, 0, 2, -1}};
const KFactor kKX[] = {{0, 3, 2, +1}, {1, 2, 0, +1}, {2, 0, 1, -1}};

// slot 0 cross-ratio sigma monomial: s(0,2->1) s(1,3->0) s(2,0->3) s(3,1->2)
const int kSlot0Sigma[4][3] = {{0, 2, 1}, {1, 3, 0}, {2, 0, 3}, {3, 1, 2}};

cplx eval_factors(const MultiplicativeCocycle& sigma, int t, const KFactor* f,
                  int nf) {
  cplx v = 1;
  for (int a = 0; a < nf; ++a) {
    cplx s = sigma.value(t, f[a].i, f[a].j, f[a].k);
    v *= f[a].sign > 0 ? s : 1.0 / s;
  }
  return v;
}

Monomial eval_factors_symbolic(const TruncatedComplex& cx, int t,
                               const KFactor* f, int nf) {
  Monomial v(cx.num_cusps());
  const auto& tpl = cx.sigma_template();
  for (int a = 0; a < nf; ++a) {
    auto [o, d] = cx.oriented_short(t, f[a].i, f[a].j, f[a].k);
    Monomial s = d > 0 ? tpl.values[o] : tpl.values[o].inverse();
    v *= f[a].sign > 0 ? s : s.inverse();
  }
  return v;
}

void fill_pairs(const TruncatedComplex& cx, int t, TetEquation& eq) {
  eq.y0 = cx.edge_class(t, 0, 2);
  eq.y1 = cx.edge_class(t, 1, 3);
  eq.w0 = cx.edge_class(t, 0, 1);
  eq.w1 = cx.edge_class(t, 2, 3);
  eq.x0 = cx.edge_class(t, 0, 3);
  eq.x1 = cx.edge_class(t, 1, 2);
}

std::vector<int> pick_gauge_classes(const TruncatedComplex& cx) {
  std::vector<int> gauge;
  std::set<int> used;
  for (int j = 0; j < cx.num_cusps(); ++j) {
    int pick = -1;
    for (int c = 0; c < cx.num_edge_classes() && pick < 0; ++c) {
      auto [a, b] = cx.class_end_cusps(c);
      if ((a == j || b == j) && !used.count(c)) pick = c;
    }
    for (int c = 0; c < cx.num_edge_classes() && pick < 0; ++c)
      if (!used.count(c)) pick = c;
    if (pick < 0) throw ptolemy_error("cannot gauge-fix: too few edge classes");
    used.insert(pick);
    gauge.push_back(pick);
  }
  return gauge;
}

}  // namespace

PtolemySystem build_system(const TruncatedComplex& cx,
                           const MultiplicativeCocycle& sigma) {
  PtolemySystem sys;
  sys.cx = &cx;
  for (int t = 0; t < cx.size(); ++t) {
    TetEquation eq;
    eq.KY = eval_factors(sigma, t, kKY, 2);
    eq.KW = eval_factors(sigma, t, kKW, 3);
    eq.KX = eval_factors(sigma, t, kKX, 3);
    if (!std::isfinite(std::abs(eq.KY)) || !std::isfinite(std::abs(eq.KW)) ||
        !std::isfinite(std::abs(eq.KX)) || eq.KY == cplx(0) ||
        eq.KW == cplx(0) || eq.KX == cplx(0))
      throw ptolemy_error("degenerate sigma coefficient in tetrahedron equation");
    fill_pairs(cx, t, eq);
    sys.equations.push_back(eq);
  }
  sys.gauge_classes = pick_gauge_classes(cx);
  return sys;
}

PtolemySystem build_symbolic_system(const TruncatedComplex& cx) {
  if (!cx.has_template())
    throw ptolemy_error("complex carries no sigma template");
  PtolemySystem sys;
  sys.cx = &cx;
  for (int t = 0; t < cx.size(); ++t) {
    TetEquation eq;
    eq.monomials = {eval_factors_symbolic(cx, t, kKY, 2),
                    eval_factors_symbolic(cx, t, kKW, 3),
                    eval_factors_symbolic(cx, t, kKX, 3)};
    fill_pairs(cx, t, eq);
    sys.equations.push_back(eq);
  }
  sys.gauge_classes = pick_gauge_classes(cx);
  return sys;
}

double system_residual(const PtolemySystem& sys, const std::vector<cplx>& c) {
  double worst = 0;
  for (const auto& eq : sys.equations) {
    cplx r = eq.KY * c[eq.y0] * c[eq.y1] - eq.KW * c[eq.w0] * c[eq.w1] -
             eq.KX * c[eq.x0] * c[eq.x1];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

std::vector<PtolemyAssignment> solve(const PtolemySystem& sys,
                                     const MultiplicativeCocycle& sigma,
                                     int starts, unsigned seed, double tol) {
  const auto& cx = *sys.cx;
  const int nc = cx.num_edge_classes();
  std::vector<int> var_of_class(nc, -1);
  std::vector<int> class_of_var;
  std::set<int> gauged(sys.gauge_classes.begin(), sys.gauge_classes.end());
  for (int c = 0; c < nc; ++c)
    if (!gauged.count(c)) {
      var_of_class[c] = int(class_of_var.size());
      class_of_var.push_back(c);
    }
  const int nv = int(class_of_var.size());
  const int ne = int(sys.equations.size());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<PtolemyAssignment> found;
  auto crossvec = [&](const std::vector<cplx>& c) {
    PtolemyAssignment tmp{c, sigma.targets()};
    auto crs = cross_ratios(tmp, sigma, false);
    std::vector<cplx> v;
    for (auto& t : crs.z) v.insert(v.end(), t.begin(), t.end());
    return v;
  };

  for (int s = 0; s < starts; ++s) {
    std::vector<cplx> c(nc, 1.0);
    for (int v = 0; v < nv; ++v) {
      double mod = std::pow(10.0, -1.0 + 2.0 * unif(rng));  // log-uniform [0.1,10]
      double ph = 2 * M_PI * unif(rng);
      c[class_of_var[v]] = std::polar(mod, ph);
    }
    bool ok = false;
    for (int it = 0; it < 200; ++it) {
      Eigen::VectorXcd f(ne);
      Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(ne, nv);
      for (int e = 0; e < ne; ++e) {
        const auto& eq = sys.equations[e];
        f(e) = eq.KY * c[eq.y0] * c[eq.y1] - eq.KW * c[eq.w0] * c[eq.w1] -
               eq.KX * c[eq.x0] * c[eq.x1];
        auto add = [&](int c0, int c1, cplx k) {
          if (var_of_class[c0] >= 0) J(e, var_of_class[c0]) += k * c[c1];
          if (var_of_class[c1] >= 0) J(e, var_of_class[c1]) += k * c[c0];
        };
        add(eq.y0, eq.y1, eq.KY);
        add(eq.w0, eq.w1, -eq.KW);
        add(eq.x0, eq.x1, -eq.KX);
      }
      Eigen::VectorXcd dx = J.colPivHouseholderQr().solve(-f);
      double step = 0, scale = 0;
      for (int v = 0; v < nv; ++v) {
        step = std::max(step, std::abs(dx(v)));
        scale = std::max(scale, std::abs(c[class_of_var[v]]));
        c[class_of_var[v]] += dx(v);
      }
      if (!std::isfinite(step)) break;
      if (step < 1e-14 * std::max(1.0, scale) &&
          system_residual(sys, c) < tol) {
        ok = true;
        break;
      }
    }
    if (!ok) continue;
    bool sane = true;
    for (const cplx& v : c)
      if (!std::isfinite(std::abs(v)) || std::abs(v) < 1e-10 || std::abs(v) > 1e10)
        sane = false;
    if (!sane) continue;
    // dedupe against previous solutions (coordinates or cross-ratios)
    auto zv = crossvec(c);
    bool dup = false;
    for (const auto& prev : found) {
      double dc = 0;
      for (int i = 0; i < nc; ++i) dc = std::max(dc, std::abs(prev.c[i] - c[i]));
      if (dc < 1e-8) { dup = true; break; }
      auto zp = crossvec(prev.c);
      double dz = 0;
      for (size_t i = 0; i < zv.size(); ++i)
        dz = std::max(dz, std::abs(zp[i] - zv[i]));
      if (dz < 1e-8) { dup = true; break; }
    }
    if (!dup) found.push_back({c, sigma.targets()});
  }
  // deterministic order: lexicographic on coordinates rounded to 1e-9
  auto key = [&](const PtolemyAssignment& a) {
    std::vector<long long> k;
    for (const cplx& v : a.c) {
      k.push_back(std::llround(v.real() * 1e9));
      k.push_back(std::llround(v.imag() * 1e9));
    }
    return k;
  };
  std::sort(found.begin(), found.end(),
            [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return found;
}

cplx short_edge_param(const PtolemyAssignment& ca, const MultiplicativeCocycle& sigma,
                      int t, int i, int j, int k) {
  const auto& cx = sigma.complex();
  auto co = [&](int a, int b) {
    cplx v = ca.c[cx.edge_class(t, a, b)];
    return a < b ? v : -v;
  };
  return -(sigma.value(t, j, k, i) / sigma.value(t, k, i, j)) * co(k, j) /
         (co(j, i) * co(i, k));
}

NaturalCocycle natural_cocycle(const PtolemyAssignment& c,
                               const MultiplicativeCocycle& sigma) {
  return NaturalCocycle{&sigma.complex(), c, sigma};
}

NaturalCocycle::Mat NaturalCocycle::long_edge(int t, int i, int j) const {
  cplx v = this->c.c[cx->edge_class(t, i, j)];
  if (i > j) v = -v;
  return {0.0, -1.0 / v, v, 0.0};
}

NaturalCocycle::Mat NaturalCocycle::short_edge(int t, int i, int j, int k) const {
  cplx s = sigma.value(t, i, j, k);
  cplx p = short_edge_param(c, sigma, t, i, j, k);
  return {s, p, 0.0, 1.0 / s};
}

namespace {
NaturalCocycle::Mat matmul(const NaturalCocycle::Mat& A,
                           const NaturalCocycle::Mat& B) {
  return {A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3],
          A[2] * B[0] + A[3] * B[2], A[2] * B[1] + A[3] * B[3]};
}
double matdist(const NaturalCocycle::Mat& A, const NaturalCocycle::Mat& B) {
  double d = 0;
  for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(A[i] - B[i]));
  return d;
}
const NaturalCocycle::Mat kId{1.0, 0.0, 0.0, 1.0};
}  // namespace

double NaturalCocycle::face_residual() const {
  double worst = 0;
  for (int t = 0; t < cx->size(); ++t) {
    for (int i = 0; i < 4; ++i) {  // boundary triangles
      int rest[3], r = 0;
      for (int v = 0; v < 4; ++v)
        if (v != i) rest[r++] = v;
      auto P = matmul(short_edge(t, i, rest[0], rest[1]),
                      short_edge(t, i, rest[1], rest[2]));
      worst = std::max(worst, matdist(P, short_edge(t, i, rest[0], rest[2])));
    }
    for (int f = 0; f < 4; ++f) {  // hexagonal faces
      int v[3], r = 0;
      for (int x = 0; x < 4; ++x)
        if (x != f) v[r++] = x;
      auto P = kId;
      for (int a = 0; a < 3; ++a) {
        int x = v[a], y = v[(a + 1) % 3], z = v[(a + 2) % 3];
        // long x->y then short at y from x to z
        auto lm = long_edge(t, x, y);
        if (x > y) { /* long_edge already handles orientation */ }
        P = matmul(P, lm);
        P = matmul(P, short_edge(t, y, x, z));
      }
      worst = std::max(worst, matdist(P, kId));
    }
  }
  return worst;
}

NaturalCocycle::Mat NaturalCocycle::boundary_product(
    const PeripheralCurve& path) const {
  auto P = kId;
  for (auto [e, d] : path) {
    auto [t, i, f] = cx->orbit_members(e)[0];
    int j = -1, k = -1;
    for (int v = 0; v < 4; ++v)
      if (v != i && v != f) (j < 0 ? j : k) = v;
    if (d < 0) std::swap(j, k);
    P = matmul(P, short_edge(t, i, j, k));
  }
  return P;
}

FillingCheck check_filling_representation(const PtolemyAssignment& c,
                                          const MultiplicativeCocycle& sigma,
                                          const FillingVector& filling,
                                          double tol) {
  const auto& cx = sigma.complex();
  if (int(filling.size()) != cx.num_cusps())
    throw ptolemy_error("filling vector has wrong cusp count");
  auto nat = natural_cocycle(c, sigma);
  FillingCheck out;
  for (int j = 0; j < cx.num_cusps(); ++j) {
    double res;
    if (filling[j].filled) {
      auto path = peripheral_power_path(cx, j, filling[j].r, filling[j].s);
      auto P = nat.boundary_product(path);
      NaturalCocycle::Mat mI{-1.0, 0.0, 0.0, -1.0};
      res = std::min(matdist(P, kId), matdist(P, mI));
    } else {
      auto trace = [&](const PeripheralCurve& p) {
        auto P = nat.boundary_product(p);
        cplx tr = P[0] + P[3];
        return std::min(std::abs(tr - 2.0), std::abs(tr + 2.0));
      };
      res = std::max(trace(cx.cusp(j).meridian), trace(cx.cusp(j).longitude));
    }
    out.residuals.push_back(res);
    if (res > tol) out.pass = false;
  }
  return out;
}

CrossRatios cross_ratios(const PtolemyAssignment& ca,
                         const MultiplicativeCocycle& sigma,
                         bool throw_on_degenerate) {
  const auto& cx = sigma.complex();
  CrossRatios out;
  for (int t = 0; t < cx.size(); ++t) {
    cplx m = 1;
    for (const auto& s : kSlot0Sigma) m *= sigma.value(t, s[0], s[1], s[2]);
    cplx z = m * (ca.c[cx.edge_class(t, 0, 2)] * ca.c[cx.edge_class(t, 1, 3)]) /
             (ca.c[cx.edge_class(t, 0, 1)] * ca.c[cx.edge_class(t, 2, 3)]);
    if (std::abs(z) < 1e-10 || std::abs(z - 1.0) < 1e-10) {
      if (throw_on_degenerate)
        throw ptolemy_error("degenerate cross-ratio in tetrahedron " +
                            std::to_string(t));
      out.degenerate = true;
      if (out.degenerate_tet < 0) out.degenerate_tet = t;
    }
    out.z.push_back({z, 1.0 / (1.0 - z), 1.0 - 1.0 / z});
  }
  return out;
}

double gluing_check(const CrossRatios& crs, const TruncatedComplex& cx) {
  double worst = 0;
  for (int c = 0; c < cx.num_edge_classes(); ++c) {
    cplx prod = 1;
    for (auto [t, e] : cx.class_members(c)) {
      auto [i, j] = edge_vertices(e);
      cplx z = crs.z[t][edge_slot(i, j)];
      prod *= cx.orientation(t) > 0 ? z : 1.0 / z;
    }
    worst = std::max(worst, std::abs(prod - 1.0));
  }
  return worst;
}

PtolemyAssignment act_diagonal(const TruncatedComplex& cx,
                               const PtolemyAssignment& c,
                               const std::vector<cplx>& z) {
  if (int(z.size()) != cx.num_cusps())
    throw ptolemy_error("diagonal action has wrong cusp count");
  PtolemyAssignment out = c;
  for (int cl = 0; cl < cx.num_edge_classes(); ++cl) {
    auto [a, b] = cx.class_end_cusps(cl);
    out.c[cl] *= z[a] * z[b];
  }
  return out;
}

PtolemyAssignment act_tau(const TruncatedComplex& cx, const PtolemyAssignment& c,
                          const std::vector<cplx>& tau) {
  if (int(tau.size()) != cx.num_corners())
    throw ptolemy_error("tau has wrong vertex count");
  PtolemyAssignment out = c;
  for (int cl = 0; cl < cx.num_edge_classes(); ++cl) {
    auto [a, b] = cx.class_end_corners(cl);
    out.c[cl] *= tau[a] * tau[b];
  }
  return out;
}

namespace {

int path_tail(const TruncatedComplex& cx, std::pair<int, int> ed) {
  auto [t, h] = cx.orbit_endpoints(ed.first);
  return ed.second > 0 ? t : h;
}

PeripheralCurve reversed(const PeripheralCurve& p) {
  PeripheralCurve r;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r.push_back({it->first, -it->second});
  return r;
}

PeripheralCurve rotate_to_vertex(const TruncatedComplex& cx,
                                 const PeripheralCurve& p, int v) {
  for (size_t i = 0; i < p.size(); ++i)
    if (path_tail(cx, p[i]) == v) {
      PeripheralCurve r(p.begin() + i, p.end());
      r.insert(r.end(), p.begin(), p.begin() + i);
      return r;
    }
  throw ptolemy_error("path does not visit the requested vertex");
}

void cancel_backtracks(PeripheralCurve& p) {
  bool changed = true;
  while (changed && p.size() >= 2) {
    changed = false;
    for (size_t i = 0; i < p.size(); ++i) {
      size_t j = (i + 1) % p.size();
      if (j == i) break;
      if (p[i].first == p[j].first && p[i].second == -p[j].second) {
        if (j > i) {
          p.erase(p.begin() + j);
          p.erase(p.begin() + i);
        } else {
          p.erase(p.begin() + i);
          p.erase(p.begin() + j);
        }
        changed = true;
        break;
      }
    }
  }
}

PeripheralCurve tree_path(const TruncatedComplex& cx, int cusp, int from, int to) {
  const auto& cd = cx.cusp(cusp);
  std::map<int, std::pair<int, std::pair<int, int>>> prev;
  std::queue<int> q;
  q.push(from);
  prev[from] = {from, {-1, 0}};
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    if (x == to) break;
    for (int e : cd.spanning_tree) {
      auto [a, b] = cx.orbit_endpoints(e);
      int nxt = -1, d = 0;
      if (a == x) { nxt = b; d = +1; }
      else if (b == x) { nxt = a; d = -1; }
      if (nxt >= 0 && !prev.count(nxt)) {
        prev[nxt] = {x, {e, d}};
        q.push(nxt);
      }
    }
  }
  if (!prev.count(to)) throw ptolemy_error("cusp tree is not connected");
  PeripheralCurve back;
  for (int x = to; x != from; x = prev[x].first) back.push_back(prev[x].second);
  std::reverse(back.begin(), back.end());
  return back;
}

}  // namespace

PeripheralCurve peripheral_power_path(const TruncatedComplex& cx, int cusp,
                                      long r, long s) {
  const auto& cd = cx.cusp(cusp);
  PeripheralCurve mu = cd.meridian, lam = cd.longitude;
  PeripheralCurve out;
  auto append_power = [&](const PeripheralCurve& p, long n) {
    PeripheralCurve body = n >= 0 ? p : reversed(p);
    for (long i = 0; i < std::labs(n); ++i)
      out.insert(out.end(), body.begin(), body.end());
  };
  if (r == 0 && s == 0) return out;
  if (r == 0) { append_power(lam, s); cancel_backtracks(out); return out; }
  if (s == 0) { append_power(mu, r); cancel_backtracks(out); return out; }
  int base = path_tail(cx, mu[0]);
  // rebase lambda at a vertex shared with mu, or connect through the tree
  std::set<int> muverts;
  for (auto& ed : mu) muverts.insert(path_tail(cx, ed));
  int shared = -1;
  for (auto& ed : lam)
    if (muverts.count(path_tail(cx, ed))) { shared = path_tail(cx, ed); break; }
  PeripheralCurve conn;
  if (shared >= 0) {
    mu = rotate_to_vertex(cx, mu, shared);
    lam = rotate_to_vertex(cx, lam, shared);
  } else {
    conn = tree_path(cx, cusp, base, path_tail(cx, lam[0]));
  }
  append_power(mu, r);
  out.insert(out.end(), conn.begin(), conn.end());
  append_power(lam, s);
  auto rc = reversed(conn);
  out.insert(out.end(), rc.begin(), rc.end());
  cancel_backtracks(out);
  return out;
}

}  // namespace dehnvol
