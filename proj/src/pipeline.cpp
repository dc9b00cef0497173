#include "dehnvol/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dehnvol {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

double rounded(double x, int prec) {
  double s = std::pow(10.0, prec);
  double r = std::round(x * s) / s;
  return r == 0.0 ? 0.0 : r;  // normalize -0
}

json jc(cplx z, int prec) {
  return json::array({rounded(z.real(), prec), rounded(z.imag(), prec)});
}

std::string fmt(double x, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, x);
  return buf;
}

std::string fmtc(cplx z, int prec) {
  std::string s = fmt(z.real(), prec);
  s += (z.imag() < 0 ? " - " : " + ");
  s += fmt(std::abs(z.imag()), prec) + " i";
  return s;
}

}  // namespace

TruncatedComplex load_from_config(const RunConfig& config) {
  if (!config.census.empty()) {
    if (config.census == "fig8" || config.census == "figure-eight" ||
        config.census == "m004")
      return census_figure_eight();
    throw config_error("unknown census: " + config.census);
  }
  if (config.triangulation_path.empty())
    throw config_error("need --census or a triangulation file");
  std::ifstream in(config.triangulation_path);
  if (!in) throw config_error("cannot open " + config.triangulation_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_complex(ss.str());
}

VolumeRun run_volume(const RunConfig& config) {
  VolumeRun run;
  run.cx = load_from_config(config);
  const auto& cx = run.cx;
  run.filling = parse_filling(config.fill);
  if (int(run.filling.size()) != cx.num_cusps())
    throw config_error("filling vector does not match the cusp count");
  if (config.uv_override &&
      int(config.uv_override->size()) != cx.num_cusps())
    throw config_error("uv override does not match the cusp count");

  if (config.explicit_ml) {
    if (int(config.explicit_ml->size()) != cx.num_cusps())
      throw config_error("explicit (M,L) list does not match the cusp count");
    auto sigma = sigma_from_holonomy(cx, *config.explicit_ml);
    auto sys = build_system(cx, sigma);
    auto sols = solve(sys, sigma, config.starts, config.seed, config.tol);
    for (auto& s : sols) {
      auto crs = cross_ratios(s, sigma, false);
      HolonomyCandidate cand;
      cand.targets = *config.explicit_ml;
      cand.c = s;
      cand.degenerate = crs.degenerate;
      if (!crs.degenerate) {
        std::vector<std::pair<cplx, int>> shapes;
        for (int t = 0; t < cx.size(); ++t)
          shapes.push_back({crs.z[t][0], cx.orientation(t)});
        cand.volume = volume_bw(shapes);
        cand.check = check_filling_representation(s, sigma, run.filling);
      }
      run.candidates.push_back(std::move(cand));
    }
  } else {
    run.candidates = solve_filling(cx, run.filling, config.k_range,
                                   config.starts, config.seed, config.tol);
  }
  if (run.candidates.empty())
    throw std::runtime_error("no holonomy candidate found");
  run.selected = select_geometric(run.candidates);

  auto sigma = sigma_from_holonomy(cx, run.selected.targets);
  run.b = select_b(sigma, run.filling, config.uv_override);
  auto a = lift_log_cocycle(sigma, run.b);
  if (config.corrupt_a) {
    // damage the first log-cocycle value whose perturbation corrupts the
    // rounded branch data
    for (int e = 0; e < cx.num_short_orbits(); ++e) {
      auto vals = a.values();
      vals[e] += cplx(0, kPi / 2);
      LogCocycle bad(cx, std::move(vals));
      auto flb = build_flattenings(run.selected.c, bad, sigma, false);
      if (edge_condition_check(flb, cx) > 1e-10) {
        a = std::move(bad);
        break;
      }
    }
  }
  auto fl = build_flattenings(run.selected.c, a, sigma, !config.corrupt_a);
  auto crs = cross_ratios(run.selected.c, sigma);

  run.checks.gluing = gluing_check(crs, cx);
  run.checks.edge = edge_condition_check(fl, cx);
  double cuspres = 0;
  for (int j = 0; j < cx.num_cusps(); ++j) {
    if (run.filling[j].filled) {
      auto path = peripheral_power_path(cx, j, run.filling[j].r, run.filling[j].s);
      cuspres = std::max(cuspres,
                         std::abs(normal_path_sum(
                             fl, cx, normal_path_from_edge_path(cx, j, path))));
    } else {
      for (const auto& p : {cx.cusp(j).meridian, cx.cusp(j).longitude})
        cuspres = std::max(cuspres, std::abs(cusp_condition_check(fl, a, j, p)));
    }
  }
  run.checks.cusp = cuspres;
  {
    auto fc = check_filling_representation(run.selected.c, sigma, run.filling);
    double worst = 0;
    for (double r : fc.residuals) worst = std::max(worst, r);
    run.checks.filling = worst;
  }
  run.checks.psi_independence =
      psi_independence_test(run.selected.c, sigma, run.b, 10, config.seed);

  std::vector<FlatTriple> fts;
  for (const auto& t : fl.tets) fts.push_back({t.z, t.p, t.q, t.eps});
  run.psi = psi_sum(fts);
  run.report = complex_volume(run.psi, config.link_exterior);
  // consistency: Im Psi against the Bloch-Wigner volume
  std::vector<std::pair<cplx, int>> shapes;
  for (int t = 0; t < cx.size(); ++t)
    shapes.push_back({crs.z[t][0], cx.orientation(t)});
  double vbw = volume_bw(shapes);
  if (!config.corrupt_a && std::abs(vbw - run.report.volume) > 1e-9)
    throw std::runtime_error("Im Psi disagrees with the Bloch-Wigner volume");
  run.report.gluing_residual = run.checks.gluing;
  run.report.edge_residual = run.checks.edge;
  run.report.cusp_residual = run.checks.cusp;
  run.report.filling_residual = run.checks.filling;
  run.report.psi_independence = run.checks.psi_independence;
  return run;
}

std::string volume_json(const VolumeRun& run, const RunConfig& config) {
  const int prec = config.precision;
  json doc;
  doc["input"] = {{"manifold", run.cx.name()},
                  {"fill", config.fill},
                  {"link_exterior", config.link_exterior},
                  {"starts", config.starts},
                  {"seed", config.seed}};
  json cands = json::array();
  for (const auto& c : run.candidates) {
    json jcand;
    json ms = json::array(), ls = json::array();
    for (auto& [M, L] : c.targets) {
      ms.push_back(jc(M, prec));
      ls.push_back(jc(L, prec));
    }
    jcand["M"] = ms;
    jcand["L"] = ls;
    jcand["k"] = c.k;
    jcand["volume"] = rounded(c.volume, prec);
    jcand["degenerate"] = c.degenerate;
    cands.push_back(jcand);
  }
  doc["candidates"] = cands;
  json sel;
  {
    json ms = json::array(), ls = json::array(), uv = json::array();
    for (auto& [M, L] : run.selected.targets) {
      ms.push_back(jc(M, prec));
      ls.push_back(jc(L, prec));
    }
    for (auto& e : run.b.entries) uv.push_back(json::array({e.u, e.v}));
    sel["M"] = ms;
    sel["L"] = ls;
    sel["k"] = run.selected.k;
    sel["uv"] = uv;
    sel["psi"] = jc(run.report.psi, prec);
    sel["volume"] = rounded(run.report.volume, prec);
    sel["cs"] = rounded(run.report.cs, prec);
    sel["modulus"] = run.report.link_exterior ? "pi^2" : "pi^2/2";
  }
  doc["selected"] = sel;
  doc["checks"] = {{"gluing", run.checks.gluing},
                   {"edge", run.checks.edge},
                   {"cusp", run.checks.cusp},
                   {"filling", run.checks.filling},
                   {"psi_independence", run.checks.psi_independence},
                   {"pass", run.checks.pass()}};
  return doc.dump(2) + "\n";
}

std::string volume_text(const VolumeRun& run, const RunConfig& config) {
  const int prec = config.precision;
  std::ostringstream os;
  os << run.cx.name() << " fill " << config.fill << "\n";
  for (size_t j = 0; j < run.selected.targets.size(); ++j) {
    os << "  cusp " << j << ": M = " << fmtc(run.selected.targets[j].first, prec)
       << ", L = " << fmtc(run.selected.targets[j].second, prec);
    os << ", (u,v) = (" << run.b.entries[j].u << "," << run.b.entries[j].v << ")";
    if (j < run.selected.k.size()) os << ", k = " << run.selected.k[j];
    os << "\n";
  }
  os << "  Psi = " << fmtc(run.report.psi, prec) << "  (mod "
     << (run.report.link_exterior ? "pi^2" : "pi^2/2") << ")\n";
  os << "  Vol = " << fmt(run.report.volume, prec)
     << "  CS = " << fmt(run.report.cs, prec) << "\n";
  return os.str();
}

std::pair<std::string, bool> run_check(const RunConfig& config) {
  VolumeRun run = run_volume(config);
  std::ostringstream os;
  auto row = [&](const char* name, double v, double tol) {
    os << "  " << name << ": " << (v < tol ? "ok  " : "FAIL") << "  " << v
       << "  (tol " << tol << ")\n";
  };
  os << "checks for " << run.cx.name() << " fill " << config.fill << "\n";
  row("gluing          ", run.checks.gluing, 1e-10);
  row("edge            ", run.checks.edge, 1e-10);
  row("cusp            ", run.checks.cusp, 1e-9);
  row("filling         ", run.checks.filling, 1e-8);
  row("psi-independence", run.checks.psi_independence, 1e-8);
  return {os.str(), run.checks.pass()};
}

std::string run_apoly(const RunConfig& config, bool at_m_one) {
  auto cx = load_from_config(config);
  auto poly = apoly_two_tet(cx);
  if (!at_m_one) return poly.str();
  auto pl = poly.at_m_one();
  // factorization hint for a perfect square (up to sign)
  if (!pl.empty()) {
    int deg = pl.rbegin()->first, low = pl.begin()->first;
    long long lead = pl.rbegin()->second;
    if (low == 0 && deg == 2 && lead < 0) {
      long long a = -lead;
      long long b = pl.count(1) ? -pl.at(1) : 0;
      long long c0 = pl.count(0) ? -pl.at(0) : 0;
      // -(x L + y)^2 with x^2 = a, 2xy = b, y^2 = c0
      long long x = std::llround(std::sqrt(double(a)));
      long long y = std::llround(std::sqrt(double(c0)));
      if (x * x == a && y * y == c0 && 2 * x * y == b) {
        std::ostringstream os;
        os << "-(";
        if (y != 0) os << y << (x != 0 ? "+" : "");
        if (x != 0) os << (x == 1 ? "" : std::to_string(x) + "*") << "L";
        os << ")^2";
        return os.str();
      }
    }
  }
  // no hint: print the substituted polynomial in L
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : pl) {
    long long a = c;
    if (first) {
      if (a < 0) { os << "-"; a = -a; }
    } else {
      os << (a < 0 ? " - " : " + ");
      a = std::llabs(a);
    }
    if (a != 1 || e == 0) os << a;
    if (e != 0) os << (a != 1 ? "*" : "") << "L" << (e == 1 ? "" : "^" + std::to_string(e));
    first = false;
  }
  return first ? "0" : os.str();
}

}  // namespace dehnvol
