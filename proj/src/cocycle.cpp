#include "dehnvol/cocycle.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

namespace dehnvol {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kIPi(0, kPi);
}

// ---- Monomial ------------------------------------------------------------

Monomial& Monomial::operator*=(const Monomial& o) {
  if (exps.size() < o.exps.size()) exps.resize(o.exps.size(), {0, 0});
  for (size_t j = 0; j < o.exps.size(); ++j) {
    exps[j].first += o.exps[j].first;
    exps[j].second += o.exps[j].second;
  }
  return *this;
}

Monomial Monomial::inverse() const {
  Monomial r = *this;
  for (auto& [x, y] : r.exps) {
    x = -x;
    y = -y;
  }
  return r;
}

bool Monomial::is_one() const {
  for (auto& [x, y] : exps)
    if (x || y) return false;
  return true;
}

cplx Monomial::eval(const std::vector<std::pair<cplx, cplx>>& targets) const {
  cplx v = 1;
  for (size_t j = 0; j < exps.size(); ++j) {
    v *= std::pow(targets[j].first, exps[j].first);
    v *= std::pow(targets[j].second, exps[j].second);
  }
  return v;
}

cplx Monomial::eval_log(const std::vector<std::pair<cplx, cplx>>& logs) const {
  cplx v = 0;
  for (size_t j = 0; j < exps.size(); ++j)
    v += double(exps[j].first) * logs[j].first +
         double(exps[j].second) * logs[j].second;
  return v;
}

std::string Monomial::str() const {
  std::ostringstream os;
  bool first = true;
  bool multi = exps.size() > 1;
  for (size_t j = 0; j < exps.size(); ++j) {
    for (auto [sym, e] : {std::pair{'M', exps[j].first}, {'L', exps[j].second}}) {
      if (!e) continue;
      if (!first) os << '*';
      os << sym;
      if (multi) os << (j + 1);
      if (e != 1) os << '^' << e;
      first = false;
    }
  }
  return first ? "1" : os.str();
}

Monomial Monomial::parse(const std::string& text, int cusps) {
  Monomial m(cusps);
  size_t p = 0;
  auto skip = [&] {
    while (p < text.size() && std::isspace((unsigned char)text[p])) ++p;
  };
  skip();
  if (p < text.size() && text[p] == '1') {
    ++p;
    skip();
    if (p == text.size()) return m;
    throw cocycle_error("bad monomial: " + text);
  }
  while (p < text.size()) {
    skip();
    char sym = text[p];
    if (sym != 'M' && sym != 'L') throw cocycle_error("bad monomial: " + text);
    ++p;
    int cusp = 1;
    if (p < text.size() && std::isdigit((unsigned char)text[p])) {
      cusp = 0;
      while (p < text.size() && std::isdigit((unsigned char)text[p]))
        cusp = 10 * cusp + (text[p++] - '0');
    }
    int e = 1;
    if (p < text.size() && text[p] == '^') {
      ++p;
      int sign = 1;
      if (text[p] == '-') { sign = -1; ++p; }
      else if (text[p] == '+') ++p;
      e = 0;
      if (p >= text.size() || !std::isdigit((unsigned char)text[p]))
        throw cocycle_error("bad monomial exponent: " + text);
      while (p < text.size() && std::isdigit((unsigned char)text[p]))
        e = 10 * e + (text[p++] - '0');
      e *= sign;
    }
    if (cusp < 1 || cusp > cusps) throw cocycle_error("bad cusp index in: " + text);
    (sym == 'M' ? m.exps[cusp - 1].first : m.exps[cusp - 1].second) += e;
    skip();
    if (p < text.size()) {
      if (text[p] != '*') throw cocycle_error("bad monomial: " + text);
      ++p;
    }
  }
  return m;
}

// ---- FillingVector -------------------------------------------------------

FillingVector parse_filling(const std::string& text) {
  FillingVector out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    FillingSlot slot;
    if (tok == "inf" || tok == "Inf" || tok == "INF") {
      slot.filled = false;
    } else {
      auto pos = tok.find('/');
      if (pos == std::string::npos)
        throw std::invalid_argument("bad filling token: " + tok);
      slot.filled = true;
      slot.r = std::stol(tok.substr(0, pos));
      slot.s = std::stol(tok.substr(pos + 1));
      if (std::gcd(std::abs(slot.r), std::abs(slot.s)) != 1)
        throw std::invalid_argument("filling coefficients not coprime: " + tok);
    }
    out.push_back(slot);
  }
  if (out.empty()) throw std::invalid_argument("empty filling string");
  return out;
}

// ---- cocycles ------------------------------------------------------------

MultiplicativeCocycle::MultiplicativeCocycle(
    const TruncatedComplex& cx, std::vector<cplx> vals,
    std::vector<std::pair<cplx, cplx>> targets)
    : cx_(&cx), vals_(std::move(vals)), targets_(std::move(targets)) {
  if (int(vals_.size()) != cx.num_short_orbits())
    throw cocycle_error("sigma value count mismatch");
  for (const cplx& v : vals_)
    if (v == cplx(0)) throw cocycle_error("sigma value is zero");
}

double MultiplicativeCocycle::triangle_residual() const {
  double worst = 0;
  for (int t = 0; t < cx_->size(); ++t)
    for (int i = 0; i < 4; ++i) {
      int rest[3], r = 0;
      for (int v = 0; v < 4; ++v)
        if (v != i) rest[r++] = v;
      cplx prod = value(t, i, rest[0], rest[1]) * value(t, i, rest[1], rest[2]) *
                  value(t, i, rest[2], rest[0]);
      worst = std::max(worst, std::abs(prod - 1.0));
    }
  return worst;
}

LogCocycle::LogCocycle(const TruncatedComplex& cx, std::vector<cplx> vals)
    : cx_(&cx), vals_(std::move(vals)) {
  if (int(vals_.size()) != cx.num_short_orbits())
    throw cocycle_error("log-cocycle value count mismatch");
}

double LogCocycle::triangle_residual() const {
  double worst = 0;
  for (int t = 0; t < cx_->size(); ++t)
    for (int i = 0; i < 4; ++i) {
      int rest[3], r = 0;
      for (int v = 0; v < 4; ++v)
        if (v != i) rest[r++] = v;
      cplx sum = value(t, i, rest[0], rest[1]) + value(t, i, rest[1], rest[2]) +
                 value(t, i, rest[2], rest[0]);
      worst = std::max(worst, std::abs(sum));
    }
  return worst;
}

MultiplicativeCocycle sigma_from_holonomy(
    const TruncatedComplex& cx,
    const std::vector<std::pair<cplx, cplx>>& targets) {
  if (int(targets.size()) != cx.num_cusps())
    throw cocycle_error("need one (M, L) target per cusp");
  for (auto& [M, L] : targets)
    if (M == cplx(0) || L == cplx(0)) throw cocycle_error("holonomy target is zero");

  std::vector<cplx> vals(cx.num_short_orbits(), 1.0);
  if (cx.has_template()) {
    const auto& tpl = cx.sigma_template();
    // template must induce exactly M_j along mu_j and L_j along lambda_j
    for (int j = 0; j < cx.num_cusps(); ++j) {
      Monomial mu(cx.num_cusps()), lam(cx.num_cusps());
      for (auto [e, d] : cx.cusp(j).meridian)
        mu *= d > 0 ? tpl.values[e] : tpl.values[e].inverse();
      for (auto [e, d] : cx.cusp(j).longitude)
        lam *= d > 0 ? tpl.values[e] : tpl.values[e].inverse();
      Monomial mwant(cx.num_cusps()), lwant(cx.num_cusps());
      mwant.exps[j].first = 1;
      lwant.exps[j].second = 1;
      if (!(mu == mwant) || !(lam == lwant))
        throw cocycle_error("sigma template inconsistent with holonomy targets");
    }
    for (int e = 0; e < cx.num_short_orbits(); ++e)
      vals[e] = tpl.values[e].eval(targets);
  } else {
    for (int j = 0; j < cx.num_cusps(); ++j) {
      const auto& cd = cx.cusp(j);
      for (auto& [e0, pq] : cd.cycle_classes) {
        vals[e0] = std::pow(targets[j].first, pq.first) *
                   std::pow(targets[j].second, pq.second);
      }
    }
  }
  return MultiplicativeCocycle(cx, std::move(vals), targets);
}

namespace {

template <typename Cocycle, typename Fold>
cplx fold_path(const Cocycle& c, int cusp, const PeripheralCurve& path,
               cplx unit, Fold fold) {
  const auto& cx = c.complex();
  if (path.empty()) return unit;
  for (size_t a = 0; a < path.size(); ++a) {
    auto [e, d] = path[a];
    if (e < 0 || e >= cx.num_short_orbits() || cx.cusp_of_orbit(e) != cusp)
      throw cocycle_error("path edge not on the requested cusp");
    auto [e2, d2] = path[(a + 1) % path.size()];
    auto [t1, h1] = cx.orbit_endpoints(e);
    auto [t2, h2] = cx.orbit_endpoints(e2);
    if ((d > 0 ? h1 : t1) != (d2 > 0 ? t2 : h2))
      throw cocycle_error("path is not closed");
  }
  cplx acc = unit;
  for (auto [e, d] : path) acc = fold(acc, c.value(e, d));
  return acc;
}

}  // namespace

cplx induced_hom(const MultiplicativeCocycle& sigma, int cusp,
                 const PeripheralCurve& path) {
  return fold_path(sigma, cusp, path, cplx(1),
                   [](cplx a, cplx b) { return a * b; });
}

cplx induced_hom(const LogCocycle& a, int cusp, const PeripheralCurve& path) {
  return fold_path(a, cusp, path, cplx(0),
                   [](cplx x, cplx y) { return x + y; });
}

PeripheralLog select_b(
    const MultiplicativeCocycle& sigma, const FillingVector& filling,
    const std::optional<std::vector<std::pair<long, long>>>& uv_override) {
  const auto& cx = sigma.complex();
  if (int(filling.size()) != cx.num_cusps())
    throw cocycle_error("filling vector has wrong cusp count");
  if (uv_override && int(uv_override->size()) != cx.num_cusps())
    throw cocycle_error("uv override has wrong cusp count");
  constexpr double kTol = 1e-8;
  PeripheralLog out;
  for (int j = 0; j < cx.num_cusps(); ++j) {
    auto [M, L] = sigma.targets()[j];
    PeripheralLog::Entry ent;
    cplx logM = std::log(M), logL = std::log(L);
    if (filling[j].filled) {
      long r = filling[j].r, s = filling[j].s;
      if (std::gcd(std::abs(r), std::abs(s)) != 1)
        throw cocycle_error("filling coefficients not coprime");
      if (std::abs(std::pow(M, double(r)) * std::pow(L, double(s)) - 1.0) > kTol)
        throw cocycle_error("holonomy violates M^r L^s = 1");
      cplx kc = (double(r) * logM + double(s) * logL) / (2.0 * kIPi);
      long k = std::lround(kc.real());
      if (std::abs(kc - cplx(double(k), 0)) > kTol)
        throw cocycle_error("log-branch integer k is not integral");
      long target = -2 * k;
      // one solution of r u + s v = target by extended Euclid, then scan
      long x0, y0, g;
      std::function<long(long, long, long&, long&)> egcd =
          [&](long a, long b, long& x, long& y) -> long {
        if (b == 0) { x = 1; y = 0; return a; }
        long x1, y1;
        long d = egcd(b, a % b, x1, y1);
        x = y1;
        y = x1 - (a / b) * y1;
        return d;
      };
      g = egcd(std::abs(r), std::abs(s), x0, y0);
      if (r < 0) x0 = -x0;
      if (s < 0) y0 = -y0;
      (void)g;  // == 1 by the coprimality check
      long u0 = x0 * target, v0 = y0 * target;
      long best_u = u0, best_v = v0;
      long span = std::abs(u0) + std::abs(v0) + 2;
      for (long t = -span; t <= span; ++t) {
        long u = u0 + s * t, v = v0 - r * t;
        long cost = std::abs(u) + std::abs(v);
        long bcost = std::abs(best_u) + std::abs(best_v);
        if (cost < bcost || (cost == bcost && u < best_u)) {
          best_u = u;
          best_v = v;
        }
      }
      ent.u = best_u;
      ent.v = best_v;
      if (uv_override) {
        auto [u, v] = (*uv_override)[j];
        if (r * u + s * v != target)
          throw cocycle_error("uv override violates the filling equation");
        ent.u = u;
        ent.v = v;
      }
    } else {
      if (std::min(std::abs(M - 1.0), std::abs(M + 1.0)) > kTol ||
          std::min(std::abs(L - 1.0), std::abs(L + 1.0)) > kTol)
        throw cocycle_error("unfilled cusp requires M, L = +-1");
      ent.u = -std::lround((logM / kIPi).real());
      ent.v = -std::lround((logL / kIPi).real());
      if (uv_override) {
        auto [u, v] = (*uv_override)[j];
        if (u != ent.u || v != ent.v)
          throw cocycle_error("uv override incompatible with unfilled cusp");
      }
    }
    ent.b_mu = logM + double(ent.u) * kIPi;
    ent.b_lambda = logL + double(ent.v) * kIPi;
    out.entries.push_back(ent);
  }
  return out;
}

LogCocycle lift_log_cocycle(const MultiplicativeCocycle& sigma,
                            const PeripheralLog& b) {
  const auto& cx = sigma.complex();
  if (int(b.entries.size()) != cx.num_cusps())
    throw cocycle_error("peripheral log has wrong cusp count");
  std::vector<cplx> a(cx.num_short_orbits(), 0.0);
  for (int j = 0; j < cx.num_cusps(); ++j) {
    const auto& cd = cx.cusp(j);
    for (int e : cd.spanning_tree) a[e] = std::log(sigma.value(e, +1));
    for (auto& [e0, pq] : cd.cycle_classes) {
      cplx bg = double(pq.first) * b.entries[j].b_mu +
                double(pq.second) * b.entries[j].b_lambda;
      // subtract the tree contributions along the fundamental cycle
      auto [tail, head] = cx.orbit_endpoints(e0);
      // walk tree from head to tail accumulating a (small graphs, BFS each time)
      std::map<int, std::pair<int, std::pair<int, int>>> prev;
      std::vector<int> queue{head};
      prev[head] = {head, {-1, 0}};
      for (size_t qi = 0; qi < queue.size(); ++qi) {
        int x = queue[qi];
        if (x == tail) break;
        for (int e : cd.spanning_tree) {
          auto [p, q] = cx.orbit_endpoints(e);
          int to = -1, d = 0;
          if (p == x) { to = q; d = +1; }
          else if (q == x) { to = p; d = -1; }
          if (to >= 0 && !prev.count(to)) {
            prev[to] = {x, {e, d}};
            queue.push_back(to);
          }
        }
      }
      cplx tree_sum = 0;
      for (int x = tail; x != head; x = prev[x].first)
        tree_sum += a[prev[x].second.first] * double(prev[x].second.second);
      a[e0] = bg - tree_sum;
    }
  }
  // congruence check: a == log sigma (mod pi i)
  for (int e = 0; e < cx.num_short_orbits(); ++e) {
    cplx res = (a[e] - std::log(sigma.value(e, +1))) / kIPi;
    if (std::abs(res - cplx(std::round(res.real()), 0)) > 1e-9)
      throw cocycle_error("b incompatible with sigma mod pi i");
  }
  return LogCocycle(cx, std::move(a));
}

MultiplicativeCocycle act_tau(const MultiplicativeCocycle& sigma,
                              const std::vector<cplx>& tau) {
  const auto& cx = sigma.complex();
  if (int(tau.size()) != cx.num_corners())
    throw cocycle_error("tau has wrong vertex count");
  for (const cplx& t : tau)
    if (t == cplx(0)) throw cocycle_error("tau value is zero");
  std::vector<cplx> vals(cx.num_short_orbits());
  for (int e = 0; e < cx.num_short_orbits(); ++e) {
    auto [v1, v2] = cx.orbit_endpoints(e);
    vals[e] = sigma.value(e, +1) * tau[v2] / tau[v1];
  }
  return MultiplicativeCocycle(cx, std::move(vals), sigma.targets());
}

LogCocycle act_tau(const LogCocycle& a, const std::vector<cplx>& theta) {
  const auto& cx = a.complex();
  if (int(theta.size()) != cx.num_corners())
    throw cocycle_error("theta has wrong vertex count");
  std::vector<cplx> vals(cx.num_short_orbits());
  for (int e = 0; e < cx.num_short_orbits(); ++e) {
    auto [v1, v2] = cx.orbit_endpoints(e);
    vals[e] = a.value(e, +1) + theta[v2] - theta[v1];
  }
  return LogCocycle(cx, std::move(vals));
}

}  // namespace dehnvol
