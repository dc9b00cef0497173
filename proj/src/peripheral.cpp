#include "dehnvol/peripheral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "dehnvol/dilog.hpp"

namespace dehnvol {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kTwoPiI(0, 2 * kPi);
}

// ---- LaurentPoly2 ----------------------------------------------------------

LaurentPoly2 LaurentPoly2::monomial(long long coeff, int em, int el) {
  LaurentPoly2 p;
  if (coeff != 0) p.terms[{em, el}] = coeff;
  return p;
}

LaurentPoly2 LaurentPoly2::operator+(const LaurentPoly2& o) const {
  LaurentPoly2 r = *this;
  for (auto& [e, c] : o.terms) {
    auto it = r.terms.find(e);
    if (it == r.terms.end()) {
      r.terms[e] = c;
    } else {
      it->second += c;
      if (it->second == 0) r.terms.erase(it);
    }
  }
  return r;
}

LaurentPoly2 LaurentPoly2::operator-(const LaurentPoly2& o) const {
  LaurentPoly2 neg;
  for (auto& [e, c] : o.terms) neg.terms[e] = -c;
  return *this + neg;
}

LaurentPoly2 LaurentPoly2::operator*(const LaurentPoly2& o) const {
  LaurentPoly2 r;
  for (auto& [e1, c1] : terms)
    for (auto& [e2, c2] : o.terms) {
      auto key = std::pair{e1.first + e2.first, e1.second + e2.second};
      r.terms[key] += c1 * c2;
      if (r.terms[key] == 0) r.terms.erase(key);
    }
  return r;
}

LaurentPoly2 LaurentPoly2::normalized() const {
  if (terms.empty()) return *this;
  int minM = terms.begin()->first.first, minL = terms.begin()->first.second;
  for (auto& [e, c] : terms) {
    minM = std::min(minM, e.first);
    minL = std::min(minL, e.second);
  }
  LaurentPoly2 r;
  for (auto& [e, c] : terms) r.terms[{e.first - minM, e.second - minL}] = c;
  if (r.terms.begin()->second < 0) {  // leading sign positive (smallest (M,L))
    for (auto& [e, c] : r.terms) c = -c;
  }
  return r;
}

cplx LaurentPoly2::eval(cplx M, cplx L) const {
  cplx v = 0;
  for (auto& [e, c] : terms)
    v += double(c) * std::pow(M, e.first) * std::pow(L, e.second);
  return v;
}

std::map<int, long long> LaurentPoly2::at_m_one() const {
  std::map<int, long long> r;
  for (auto& [e, c] : terms) {
    r[e.second] += c;
    if (r[e.second] == 0) r.erase(e.second);
  }
  return r;
}

std::string LaurentPoly2::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : terms) {  // map order: ascending (expM, expL)
    long long a = c;
    if (first) {
      if (a < 0) { os << "-"; a = -a; }
    } else {
      os << (a < 0 ? " - " : " + ");
      a = std::llabs(a);
    }
    std::vector<std::string> factors;
    if (a != 1 || (e.first == 0 && e.second == 0))
      factors.push_back(std::to_string(a));
    if (e.second != 0)
      factors.push_back(e.second == 1 ? "L" : "L^" + std::to_string(e.second));
    if (e.first != 0)
      factors.push_back(e.first == 1 ? "M" : "M^" + std::to_string(e.first));
    for (size_t i = 0; i < factors.size(); ++i)
      os << (i ? "*" : "") << factors[i];
    first = false;
  }
  return os.str();
}

LaurentPoly2 resultant_quadratics(const std::array<LaurentPoly2, 3>& f,
                                  const std::array<LaurentPoly2, 3>& g) {
  if (f[2].zero() || g[2].zero())
    throw peripheral_error("resultant: leading coefficient identically zero");
  // Sylvester matrix rows: (f2 f1 f0 0), (0 f2 f1 f0), (g2 g1 g0 0), (0 g2 g1 g0)
  LaurentPoly2 Z;
  LaurentPoly2 S[4][4] = {{f[2], f[1], f[0], Z},
                          {Z, f[2], f[1], f[0]},
                          {g[2], g[1], g[0], Z},
                          {Z, g[2], g[1], g[0]}};
  // 4x4 determinant by cofactor expansion (exact integer arithmetic)
  auto det3 = [&](int r[3], int c[3]) {
    auto m = [&](int i, int j) -> LaurentPoly2& { return S[r[i]][c[j]]; };
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  };
  LaurentPoly2 det;
  int rows[3] = {1, 2, 3};
  for (int j = 0; j < 4; ++j) {
    int cols[3], cc = 0;
    for (int x = 0; x < 4; ++x)
      if (x != j) cols[cc++] = x;
    LaurentPoly2 minor = det3(rows, cols);
    LaurentPoly2 term = S[0][j] * minor;
    det = (j % 2 == 0) ? det + term : det - term;
  }
  return det;
}

LaurentPoly2 apoly_two_tet(const TruncatedComplex& cx) {
  if (cx.size() != 2 || cx.num_cusps() != 1 || cx.num_edge_classes() != 2)
    throw peripheral_error(
        "unsupported shape: need a two-tetrahedron, one-cusp census with two "
        "edge classes");
  auto sys = build_symbolic_system(cx);
  int gauge = sys.gauge_classes[0];
  int var = 1 - gauge;
  std::array<std::array<LaurentPoly2, 3>, 2> quads;
  for (int t = 0; t < 2; ++t) {
    auto& eq = sys.equations[t];
    auto put = [&](const Monomial& mono, int c0, int c1, long long sign,
                   std::array<LaurentPoly2, 3>& q) {
      int deg = (c0 == var) + (c1 == var);
      auto [em, el] = mono.exps[0];
      q[deg] = q[deg] + LaurentPoly2::monomial(sign, em, el);
    };
    auto& m = *eq.monomials;
    put(m[0], eq.y0, eq.y1, +1, quads[t]);
    put(m[1], eq.w0, eq.w1, -1, quads[t]);
    put(m[2], eq.x0, eq.x1, -1, quads[t]);
  }
  return resultant_quadratics(quads[0], quads[1]).normalized();
}

// ---- solve_filling ---------------------------------------------------------

namespace {

SigmaTemplate effective_template(const TruncatedComplex& cx) {
  if (cx.has_template()) return cx.sigma_template();
  SigmaTemplate tpl;
  tpl.values.assign(cx.num_short_orbits(), Monomial(cx.num_cusps()));
  for (int j = 0; j < cx.num_cusps(); ++j)
    for (auto& [e0, pq] : cx.cusp(j).cycle_classes) {
      Monomial m(cx.num_cusps());
      m.exps[j] = {pq.first, pq.second};
      tpl.values[e0] = m;
    }
  return tpl;
}

}  // namespace

std::vector<HolonomyCandidate> solve_filling(const TruncatedComplex& cx,
                                             const FillingVector& filling,
                                             std::pair<long, long> k_range,
                                             int starts, unsigned seed,
                                             double tol) {
  if (int(filling.size()) != cx.num_cusps())
    throw peripheral_error("filling vector has wrong cusp count");
  const int h = cx.num_cusps();
  SigmaTemplate tpl = effective_template(cx);

  // symbolic equations with the template
  struct SymEq {
    Monomial mY, mW, mX;
    int y0, y1, w0, w1, x0, x1;
  };
  std::vector<SymEq> eqs;
  for (int t = 0; t < cx.size(); ++t) {
    SymEq e;
    auto fac = [&](const std::vector<std::array<int, 4>>& lst) {
      Monomial v(h);
      for (const auto& a : lst) {
        auto [o, d] = cx.oriented_short(t, a[0], a[1], a[2]);
        Monomial s = d > 0 ? tpl.values[o] : tpl.values[o].inverse();
        v *= a[3] > 0 ? s : s.inverse();
      }
      return v;
    };
    e.mY = fac({{1, 3, 0, +1}, {3, 0, 1, -1}});
    e.mW = fac({{0, 1, 2, +1}, {2, 3, 0, +1}, {3, 0, 2, -1}});
    e.mX = fac({{0, 3, 2, +1}, {1, 2, 0, +1}, {2, 0, 1, -1}});
    e.y0 = cx.edge_class(t, 0, 2);
    e.y1 = cx.edge_class(t, 1, 3);
    e.w0 = cx.edge_class(t, 0, 1);
    e.w1 = cx.edge_class(t, 2, 3);
    e.x0 = cx.edge_class(t, 0, 3);
    e.x1 = cx.edge_class(t, 1, 2);
    eqs.push_back(e);
  }

  std::vector<int> filled, unfilled;
  for (int j = 0; j < h; ++j)
    (filling[j].filled ? filled : unfilled).push_back(j);

  // variable layout: free c classes, then (m_j, l_j) per filled cusp
  std::vector<int> gauge;
  {
    auto sigma1 = sigma_from_holonomy(
        cx, std::vector<std::pair<cplx, cplx>>(h, {1.0, 1.0}));
    gauge = build_system(cx, sigma1).gauge_classes;
  }
  std::set<int> gauged(gauge.begin(), gauge.end());
  const int nc = cx.num_edge_classes();
  std::vector<int> var_of_class(nc, -1), class_of_var;
  for (int c = 0; c < nc; ++c)
    if (!gauged.count(c)) {
      var_of_class[c] = int(class_of_var.size());
      class_of_var.push_back(c);
    }
  const int ncv = int(class_of_var.size());
  const int nv = ncv + 2 * int(filled.size());
  const int ne = cx.size() + int(filled.size());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<HolonomyCandidate> cands;
  std::vector<std::vector<cplx>> zcache;  // cross-ratio vectors, for dedupe

  // enumerate parabolic sign lifts for unfilled cusps
  int nlifts = 1;
  for (size_t i = 0; i < unfilled.size(); ++i) nlifts *= 4;
  // enumerate k vectors
  std::vector<std::vector<long>> kvecs{{}};
  for (size_t i = 0; i < filled.size(); ++i) {
    std::vector<std::vector<long>> next;
    for (auto& kv : kvecs)
      for (long k = k_range.first; k <= k_range.second; ++k) {
        auto kk = kv;
        kk.push_back(k);
        next.push_back(kk);
      }
    kvecs = next;
  }

  for (int lift = 0; lift < nlifts; ++lift) {
    std::vector<std::pair<cplx, cplx>> logs(h, {0.0, 0.0});
    int code = lift;
    for (int uj : unfilled) {
      logs[uj].first = cplx(0, kPi * (code % 2));
      code /= 2;
      logs[uj].second = cplx(0, kPi * (code % 2));
      code /= 2;
    }
    for (const auto& kvec : kvecs) {
      for (int s = 0; s < starts; ++s) {
        // initial point
        std::vector<cplx> c(nc, 1.0);
        for (int v = 0; v < ncv; ++v)
          c[class_of_var[v]] =
              std::polar(std::pow(10.0, -1.0 + 2.0 * unif(rng)), 2 * kPi * unif(rng));
        auto wlogs = logs;
        for (size_t fi = 0; fi < filled.size(); ++fi) {
          wlogs[filled[fi]] = {cplx(unif(rng) - 0.5, kPi * (2 * unif(rng) - 1)),
                               cplx(unif(rng) - 0.5, kPi * (2 * unif(rng) - 1))};
        }
        bool ok = false;
        for (int it = 0; it < 200; ++it) {
          Eigen::VectorXcd f(ne);
          Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(ne, nv);
          for (int t = 0; t < cx.size(); ++t) {
            const auto& e = eqs[t];
            cplx KY = std::exp(e.mY.eval_log(wlogs));
            cplx KW = std::exp(e.mW.eval_log(wlogs));
            cplx KX = std::exp(e.mX.eval_log(wlogs));
            cplx TY = KY * c[e.y0] * c[e.y1], TW = KW * c[e.w0] * c[e.w1],
                 TX = KX * c[e.x0] * c[e.x1];
            f(t) = TY - TW - TX;
            auto addc = [&](int c0, int c1, cplx kprod) {
              if (var_of_class[c0] >= 0) J(t, var_of_class[c0]) += kprod * c[c1];
              if (var_of_class[c1] >= 0) J(t, var_of_class[c1]) += kprod * c[c0];
            };
            addc(e.y0, e.y1, KY);
            addc(e.w0, e.w1, -KW);
            addc(e.x0, e.x1, -KX);
            for (size_t fi = 0; fi < filled.size(); ++fi) {
              int j = filled[fi];
              auto dm = double(e.mY.exps[j].first) * TY -
                        double(e.mW.exps[j].first) * TW -
                        double(e.mX.exps[j].first) * TX;
              auto dl = double(e.mY.exps[j].second) * TY -
                        double(e.mW.exps[j].second) * TW -
                        double(e.mX.exps[j].second) * TX;
              J(t, ncv + 2 * fi) += dm;
              J(t, ncv + 2 * fi + 1) += dl;
            }
          }
          for (size_t fi = 0; fi < filled.size(); ++fi) {
            int j = filled[fi];
            f(cx.size() + fi) = double(filling[j].r) * wlogs[j].first +
                                double(filling[j].s) * wlogs[j].second -
                                kTwoPiI * double(kvec[fi]);
            J(cx.size() + fi, ncv + 2 * fi) = double(filling[j].r);
            J(cx.size() + fi, ncv + 2 * fi + 1) = double(filling[j].s);
          }
          Eigen::VectorXcd dx = J.colPivHouseholderQr().solve(-f);
          double step = 0;
          for (int v = 0; v < ncv; ++v) {
            step = std::max(step, std::abs(dx(v)));
            c[class_of_var[v]] += dx(v);
          }
          for (size_t fi = 0; fi < filled.size(); ++fi) {
            step = std::max({step, std::abs(dx(ncv + 2 * fi)),
                             std::abs(dx(ncv + 2 * fi + 1))});
            wlogs[filled[fi]].first += dx(ncv + 2 * fi);
            wlogs[filled[fi]].second += dx(ncv + 2 * fi + 1);
          }
          if (!std::isfinite(step)) break;
          if (step < 1e-13) {
            double res = 0;
            for (int e2 = 0; e2 < ne; ++e2) res = std::max(res, std::abs(f(e2)));
            if (res < tol * 10) ok = true;  // f is pre-step; confirmed below
            break;
          }
        }
        if (!ok) continue;
        bool sane = true;
        for (const cplx& v : c)
          if (!std::isfinite(std::abs(v)) || std::abs(v) < 1e-10 ||
              std::abs(v) > 1e10)
            sane = false;
        if (!sane) continue;
        std::vector<std::pair<cplx, cplx>> targets(h);
        for (int j = 0; j < h; ++j)
          targets[j] = {std::exp(wlogs[j].first), std::exp(wlogs[j].second)};
        // canonical branch integer from principal logs
        std::vector<long> kcanon;
        for (size_t fi = 0; fi < filled.size(); ++fi) {
          int j = filled[fi];
          cplx kc = (double(filling[j].r) * std::log(targets[j].first) +
                     double(filling[j].s) * std::log(targets[j].second)) /
                    kTwoPiI;
          kcanon.push_back(std::lround(kc.real()));
        }
        MultiplicativeCocycle sigma = sigma_from_holonomy(cx, targets);
        PtolemyAssignment pa{c, targets};
        auto sys = build_system(cx, sigma);
        if (system_residual(sys, c) > tol) continue;
        auto crs = cross_ratios(pa, sigma, false);
        HolonomyCandidate cand;
        cand.targets = targets;
        cand.c = pa;
        cand.k = kcanon;
        cand.degenerate = crs.degenerate;
        if (!crs.degenerate) {
          std::vector<std::pair<cplx, int>> shapes;
          for (int t = 0; t < cx.size(); ++t)
            shapes.push_back({crs.z[t][0], cx.orientation(t)});
          cand.volume = volume_bw(shapes);
          cand.check = check_filling_representation(pa, sigma, filling);
          if (!cand.check.pass) continue;
        } else {
          cand.volume = -1e300;
        }
        // dedupe on targets + cross-ratios
        std::vector<cplx> zv;
        for (int t = 0; t < cx.size(); ++t)
          zv.insert(zv.end(), crs.z[t].begin(), crs.z[t].end());
        bool dup = false;
        for (size_t pi = 0; pi < cands.size(); ++pi) {
          const auto& prev = cands[pi];
          double d = 0;
          for (int j = 0; j < h; ++j)
            d = std::max({d, std::abs(prev.targets[j].first - targets[j].first),
                          std::abs(prev.targets[j].second - targets[j].second)});
          for (size_t i2 = 0; i2 < zv.size() && d < 1e-8; ++i2)
            d = std::max(d, std::abs(zcache[pi][i2] - zv[i2]));
          if (d < 1e-8) { dup = true; break; }
        }
        if (!dup) {
          cands.push_back(std::move(cand));
          zcache.push_back(std::move(zv));
        }
      }
    }
  }
  // deterministic order: by (-volume, rounded targets)
  auto key = [](const HolonomyCandidate& a) {
    std::vector<long long> k{-std::llround(a.volume * 1e9)};
    for (auto& [M, L] : a.targets) {
      k.push_back(std::llround(M.real() * 1e9));
      k.push_back(std::llround(M.imag() * 1e9));
      k.push_back(std::llround(L.real() * 1e9));
      k.push_back(std::llround(L.imag() * 1e9));
    }
    return k;
  };
  std::sort(cands.begin(), cands.end(),
            [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return cands;
}

const HolonomyCandidate& select_geometric(
    const std::vector<HolonomyCandidate>& candidates) {
  if (candidates.empty()) throw peripheral_error("no holonomy candidates");
  // volume ties happen between the SL(2,C) lifts of one geometric
  // representation; order them on rounded M values, preferring the
  // closed-upper-half-plane lift with the largest real part
  auto tiekey = [](const HolonomyCandidate& c) {
    std::vector<long long> k;
    for (auto& [M, L] : c.targets) {
      long long im = std::llround(M.imag() * 1e9);
      k.push_back(im < 0 ? 1 : 0);
      k.push_back(-std::llround(M.real() * 1e9));
      k.push_back(-im);
    }
    return k;
  };
  const HolonomyCandidate* best = nullptr;
  for (const auto& c : candidates) {
    if (c.degenerate) continue;
    if (!best || c.volume > best->volume + 1e-12 ||
        (std::abs(c.volume - best->volume) <= 1e-12 &&
         tiekey(c) < tiekey(*best)))
      best = &c;
  }
  if (!best) throw peripheral_error("all candidates degenerate");
  return *best;
}

}  // namespace dehnvol
