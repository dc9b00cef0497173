#include "dehnvol/complex.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace dehnvol {

namespace {

const int kEdgePairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

int perm_sign(const std::array<int, 4>& p) {
  int s = 1;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (p[a] > p[b]) s = -s;
  return s;
}

bool monotone_on_face(const FaceGluing& g) {
  // orderings agree on the common face: the gluing maps the face's vertices
  // in increasing label order
  std::vector<int> src;
  for (int v = 0; v < 4; ++v)
    if (v != g.face) src.push_back(v);
  for (size_t a = 0; a + 1 < src.size(); ++a)
    if (g.perm[src[a]] >= g.perm[src[a + 1]]) return false;
  return true;
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void join(int a, int b) { p[find(a)] = find(b); }
};

// exact rational arithmetic for the small homology solves
struct Frac {
  long long n = 0, d = 1;
  Frac() = default;
  Frac(long long v) : n(v) {}
  Frac(long long nn, long long dd) : n(nn), d(dd) { norm(); }
  void norm() {
    if (d < 0) { n = -n; d = -d; }
    long long g = std::gcd(std::abs(n), d);
    if (g > 1) { n /= g; d /= g; }
    if (n == 0) d = 1;
  }
  Frac operator*(const Frac& o) const { return Frac(n * o.n, d * o.d); }
  Frac operator/(const Frac& o) const { return Frac(n * o.d, d * o.n); }
  Frac operator-(const Frac& o) const { return Frac(n * o.d - o.n * d, d * o.d); }
  bool zero() const { return n == 0; }
  bool is_int() const { return d == 1; }
};

// Solve A x = b exactly; returns false if inconsistent.
bool solve_rational(std::vector<std::vector<Frac>> A, std::vector<Frac> b,
                    std::vector<Frac>& x) {
  int rows = int(A.size()), cols = rows ? int(A[0].size()) : 0;
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (!A[i][c].zero()) { sel = i; break; }
    if (sel < 0) continue;
    std::swap(A[sel], A[r]);
    std::swap(b[sel], b[r]);
    Frac inv = A[r][c];
    for (int j = c; j < cols; ++j) A[r][j] = A[r][j] / inv;
    b[r] = b[r] / inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || A[i][c].zero()) continue;
      Frac f = A[i][c];
      for (int j = c; j < cols; ++j) A[i][j] = A[i][j] - f * A[r][j];
      b[i] = b[i] - f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (!b[i].zero()) return false;
  x.assign(cols, Frac(0));
  for (int i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return true;
}

}  // namespace

int edge_index(int i, int j) {
  if (i > j) std::swap(i, j);
  for (int k = 0; k < 6; ++k)
    if (kEdgePairs[k][0] == i && kEdgePairs[k][1] == j) return k;
  throw std::logic_error("bad edge pair");
}

std::pair<int, int> edge_vertices(int idx) {
  return {kEdgePairs[idx][0], kEdgePairs[idx][1]};
}

int edge_slot(int i, int j) {
  int e = edge_index(i, j);
  switch (e) {
    case 2: case 3: return 0;  // {03},{12}
    case 1: case 4: return 1;  // {02},{13}
    default: return 2;         // {01},{23}
  }
}

std::pair<int, int> TruncatedComplex::class_end_corners(int c) const {
  auto [t, e] = class_members_[c][0];
  auto [i, j] = edge_vertices(e);
  return {corner_orbit(t, i, j), corner_orbit(t, j, i)};
}

std::pair<int, int> TruncatedComplex::class_end_cusps(int c) const {
  auto [a, b] = class_end_corners(c);
  return {corner_cusp_[a], corner_cusp_[b]};
}

std::pair<int, int> TruncatedComplex::orbit_endpoints(int e) const {
  auto [t, i, f] = orbit_members_[e][0];
  int j = -1, k = -1;
  for (int v = 0; v < 4; ++v)
    if (v != i && v != f) (j < 0 ? j : k) = v;
  return {corner_orbit(t, i, j), corner_orbit(t, i, k)};
}

std::pair<int, int> TruncatedComplex::labeled_edge(const std::string& label) const {
  for (const auto& [lb, sid] : labels_)
    if (lb == label) return {std::abs(sid) - 1, sid > 0 ? +1 : -1};
  throw complex_error("unknown short-edge label: " + label);
}

TruncatedComplex build_complex(
    const FacePairingData& gluing,
    const std::vector<std::pair<PeripheralCurve, PeripheralCurve>>& peripheral,
    const std::optional<std::vector<int>>& orientation_signs, std::string name) {
  const int n = gluing.tetrahedron_count;
  if (n <= 0) throw complex_error("no tetrahedra");
  TruncatedComplex cx;
  cx.n_ = n;
  cx.name_ = std::move(name);
  cx.pairing_ = gluing;
  cx.glu_.assign(4 * n, FaceGluing{});

  for (const auto& g : gluing.gluings) {
    if (g.tet < 0 || g.tet >= n || g.face < 0 || g.face > 3 || g.nbr_tet < 0 ||
        g.nbr_tet >= n || g.nbr_face < 0 || g.nbr_face > 3)
      throw complex_error("face gluing out of range");
    std::array<int, 4> seen{0, 0, 0, 0};
    for (int v : g.perm) {
      if (v < 0 || v > 3) throw complex_error("gluing permutation not a permutation");
      seen[v]++;
    }
    if (seen != std::array<int, 4>{1, 1, 1, 1})
      throw complex_error("gluing permutation not a permutation");
    if (g.perm[g.face] != g.nbr_face)
      throw complex_error("gluing permutation does not map face to face");
    if (cx.glu_[4 * g.tet + g.face].tet >= 0)
      throw complex_error("face glued twice");
    cx.glu_[4 * g.tet + g.face] = g;
  }
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f)
      if (cx.glu_[4 * t + f].tet < 0)
        throw complex_error("unglued face (" + std::to_string(t) + "," +
                            std::to_string(f) + ")");
  // involutivity
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = cx.glu_[4 * t + f];
      const auto& h = cx.glu_[4 * g.nbr_tet + g.nbr_face];
      if (h.nbr_tet != t || h.nbr_face != f)
        throw complex_error("gluing not involutive");
      for (int v = 0; v < 4; ++v)
        if (h.perm[g.perm[v]] != v) throw complex_error("gluing not involutive");
    }
  // vertex orderings agree on common faces
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f)
      if (!monotone_on_face(cx.glu_[4 * t + f]))
        throw complex_error("vertex orderings inconsistent on a shared face");

  // orientation signs: eps(t') = -eps(t) sgn(perm)
  cx.eps_.assign(n, 0);
  cx.eps_[0] = 1;
  std::queue<int> bfs;
  bfs.push(0);
  while (!bfs.empty()) {
    int t = bfs.front();
    bfs.pop();
    for (int f = 0; f < 4; ++f) {
      const auto& g = cx.glu_[4 * t + f];
      int e = -cx.eps_[t] * perm_sign(g.perm);
      if (cx.eps_[g.nbr_tet] == 0) {
        cx.eps_[g.nbr_tet] = e;
        bfs.push(g.nbr_tet);
      } else if (cx.eps_[g.nbr_tet] != e) {
        throw complex_error("orientation signs inconsistent (ordering not orientable)");
      }
    }
  }
  for (int t = 0; t < n; ++t)
    if (cx.eps_[t] == 0) throw complex_error("complex not connected");
  if (orientation_signs) {
    if (int(orientation_signs->size()) != n)
      throw complex_error("orientation override has wrong length");
    for (int t = 0; t < n; ++t) {
      int e = (*orientation_signs)[t];
      if (e != 1 && e != -1) throw complex_error("orientation sign must be +-1");
      if (e * (*orientation_signs)[0] != cx.eps_[t] * cx.eps_[0])
        throw complex_error("orientation override inconsistent with gluing parity");
    }
    cx.eps_ = *orientation_signs;
  }

  // long-edge classes: orbits of (t, edge) under the face identifications
  UnionFind ue(6 * n);
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = cx.glu_[4 * t + f];
      for (int e = 0; e < 6; ++e) {
        auto [i, j] = edge_vertices(e);
        if (i == f || j == f) continue;
        ue.join(6 * t + e, 6 * g.nbr_tet + edge_index(g.perm[i], g.perm[j]));
      }
    }
  std::map<int, std::vector<std::pair<int, int>>> eclasses;
  for (int t = 0; t < n; ++t)
    for (int e = 0; e < 6; ++e)
      eclasses[ue.find(6 * t + e)].push_back({t, e});
  cx.edge_class_.assign(6 * n, -1);
  std::vector<std::pair<std::pair<int, int>, int>> ereps;
  for (auto& [root, mem] : eclasses) {
    std::sort(mem.begin(), mem.end());
    ereps.push_back({mem[0], root});
  }
  std::sort(ereps.begin(), ereps.end());
  for (auto& [lead, root] : ereps) {
    int cid = int(cx.class_members_.size());
    cx.class_members_.push_back(eclasses[root]);
    for (auto [t, e] : eclasses[root]) cx.edge_class_[6 * t + e] = cid;
  }

  // short-edge orbits: (t, i, f), f != i, glued to (t', perm(i), f')
  auto spack = [](int t, int i, int f) { return 12 * t + 3 * i + (f > i ? f - 1 : f); };
  UnionFind us(12 * n);
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < 4; ++i)
      for (int f = 0; f < 4; ++f) {
        if (f == i) continue;
        const auto& g = cx.glu_[4 * t + f];
        us.join(spack(t, i, f), spack(g.nbr_tet, g.perm[i], g.nbr_face));
      }
  std::map<int, std::vector<std::array<int, 3>>> sclasses;
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < 4; ++i)
      for (int f = 0; f < 4; ++f)
        if (f != i) sclasses[us.find(spack(t, i, f))].push_back({t, i, f});
  cx.short_orbit_.assign(12 * n, -1);
  std::vector<std::pair<std::array<int, 3>, int>> sreps;
  for (auto& [root, mem] : sclasses) {
    std::sort(mem.begin(), mem.end());
    sreps.push_back({mem[0], root});
  }
  std::sort(sreps.begin(), sreps.end());
  for (auto& [lead, root] : sreps) {
    int oid = int(cx.orbit_members_.size());
    cx.orbit_members_.push_back(sclasses[root]);
    for (auto [t, i, f] : sclasses[root]) cx.short_orbit_[spack(t, i, f)] = oid;
  }

  // corner orbits: (t, i, j) glued across both faces containing {i,j}
  auto cpack = [](int t, int i, int j) { return 12 * t + 3 * i + (j > i ? j - 1 : j); };
  UnionFind uc(12 * n);
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (j == i) continue;
        for (int f = 0; f < 4; ++f) {
          if (f == i || f == j) continue;
          const auto& g = cx.glu_[4 * t + f];
          uc.join(cpack(t, i, j), cpack(g.nbr_tet, g.perm[i], g.perm[j]));
        }
      }
  std::map<int, std::vector<std::array<int, 3>>> cclasses;
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (j != i) cclasses[uc.find(cpack(t, i, j))].push_back({t, i, j});
  cx.corner_orbit_.assign(12 * n, -1);
  std::vector<std::pair<std::array<int, 3>, int>> creps;
  for (auto& [root, mem] : cclasses) {
    std::sort(mem.begin(), mem.end());
    creps.push_back({mem[0], root});
  }
  std::sort(creps.begin(), creps.end());
  for (auto& [lead, root] : creps) {
    int vid = int(cx.corner_members_.size());
    cx.corner_members_.push_back(cclasses[root]);
    for (auto [t, i, j] : cclasses[root]) cx.corner_orbit_[cpack(t, i, j)] = vid;
  }

  // cusps: connected components of truncation triangles (t,i) through
  // short-edge orbits
  UnionFind ut(4 * n);
  for (const auto& mem : cx.orbit_members_) {
    for (size_t a = 1; a < mem.size(); ++a)
      ut.join(4 * mem[0][0] + mem[0][1], 4 * mem[a][0] + mem[a][1]);
  }
  std::map<int, std::vector<std::pair<int, int>>> tclasses;
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < 4; ++i) tclasses[ut.find(4 * t + i)].push_back({t, i});
  std::vector<std::pair<std::pair<int, int>, int>> treps;
  for (auto& [root, mem] : tclasses) {
    std::sort(mem.begin(), mem.end());
    treps.push_back({mem[0], root});
  }
  std::sort(treps.begin(), treps.end());
  cx.orbit_cusp_.assign(cx.orbit_members_.size(), -1);
  cx.corner_cusp_.assign(cx.corner_members_.size(), -1);
  for (auto& [lead, root] : treps) {
    CuspData cd;
    cd.triangles = tclasses[root];
    int cid = int(cx.cusps_.size());
    std::set<int> edges, verts;
    for (auto [t, i] : cd.triangles)
      for (int f = 0; f < 4; ++f) {
        if (f == i) continue;
        edges.insert(cx.short_orbit(t, i, f));
        verts.insert(cx.corner_orbit(t, i, f));
      }
    cd.edges.assign(edges.begin(), edges.end());
    cd.vertices.assign(verts.begin(), verts.end());
    for (int e : cd.edges) cx.orbit_cusp_[e] = cid;
    for (int v : cd.vertices) cx.corner_cusp_[v] = cid;
    // torus checks
    int V = int(cd.vertices.size()), E = int(cd.edges.size()),
        F = int(cd.triangles.size());
    if ((3 * F) % 2 != 0 || E != (3 * F) / 2)
      throw complex_error("cusp link fails torus check (edge count)");
    if (V - E + F != 0)
      throw complex_error("cusp link fails torus check (Euler characteristic " +
                          std::to_string(V - E + F) + ")");
    cx.cusps_.push_back(std::move(cd));
  }

  // peripheral curves
  if (peripheral.size() != cx.cusps_.size())
    throw complex_error("expected peripheral curves for " +
                        std::to_string(cx.cusps_.size()) + " cusp(s)");
  for (size_t j = 0; j < peripheral.size(); ++j) {
    auto check_path = [&](const PeripheralCurve& p, const char* what) {
      if (p.empty()) throw complex_error(std::string(what) + " empty");
      for (auto [e, d] : p) {
        if (e < 0 || e >= cx.num_short_orbits() || (d != 1 && d != -1))
          throw complex_error(std::string(what) + " references a bad short edge");
        if (cx.orbit_cusp_[e] != int(j))
          throw complex_error(std::string(what) + " leaves its cusp");
      }
      for (size_t a = 0; a < p.size(); ++a) {
        auto [e1, d1] = p[a];
        auto [e2, d2] = p[(a + 1) % p.size()];
        auto [t1, h1] = cx.orbit_endpoints(e1);
        auto [t2, h2] = cx.orbit_endpoints(e2);
        int head = d1 > 0 ? h1 : t1;
        int tail = d2 > 0 ? t2 : h2;
        if (head != tail)
          throw complex_error(std::string(what) + " is not a closed edge-path");
      }
    };
    check_path(peripheral[j].first, "meridian");
    check_path(peripheral[j].second, "longitude");
    cx.cusps_[j].meridian = peripheral[j].first;
    cx.cusps_[j].longitude = peripheral[j].second;
  }

  // spanning tree and fundamental-cycle homology classes per cusp
  for (auto& cd : cx.cusps_) {
    std::set<int> seen{cd.vertices.empty() ? 0 : cd.vertices[0]};
    bool grew = true;
    while (grew) {
      grew = false;
      for (int e : cd.edges) {
        auto [a, b] = cx.orbit_endpoints(e);
        bool ia = seen.count(a), ib = seen.count(b);
        if (ia != ib) {
          cd.spanning_tree.push_back(e);
          seen.insert(a);
          seen.insert(b);
          grew = true;
        }
      }
    }
    std::sort(cd.spanning_tree.begin(), cd.spanning_tree.end());
    // cycle space: solve cycle = p mu + q lambda + boundary
    std::map<int, int> erow;
    for (size_t r = 0; r < cd.edges.size(); ++r) erow[cd.edges[r]] = int(r);
    int R = int(cd.edges.size());
    auto path_vec = [&](const PeripheralCurve& p) {
      std::vector<Frac> v(R, Frac(0));
      for (auto [e, d] : p) v[erow[e]] = v[erow[e]] - Frac(-d);
      return v;
    };
    std::vector<std::vector<Frac>> cols;
    cols.push_back(path_vec(cd.meridian));
    cols.push_back(path_vec(cd.longitude));
    for (auto [t, i] : cd.triangles) {
      // boundary of the triangle: corners j1->j2->j3->j1 (sorted rest)
      int rest[3], r = 0;
      for (int v = 0; v < 4; ++v)
        if (v != i) rest[r++] = v;
      std::vector<Frac> col(R, Frac(0));
      for (int a = 0; a < 3; ++a) {
        auto [o, d] = cx.oriented_short(t, i, rest[a], rest[(a + 1) % 3]);
        col[erow[o]] = col[erow[o]] - Frac(-d);
      }
      cols.push_back(col);
    }
    std::set<int> treeset(cd.spanning_tree.begin(), cd.spanning_tree.end());
    for (int e0 : cd.edges) {
      if (treeset.count(e0)) continue;
      // fundamental cycle: e0 then tree path head -> tail
      PeripheralCurve cyc{{e0, +1}};
      auto [tail, head] = cx.orbit_endpoints(e0);
      // BFS in tree from head to tail
      std::map<int, std::pair<int, std::pair<int, int>>> prev;  // vertex -> (from, (edge,dir))
      std::queue<int> q;
      q.push(head);
      prev[head] = {head, {-1, 0}};
      while (!q.empty()) {
        int x = q.front();
        q.pop();
        if (x == tail) break;
        for (int e : cd.spanning_tree) {
          auto [a, b] = cx.orbit_endpoints(e);
          int to = -1, d = 0;
          if (a == x) { to = b; d = +1; }
          else if (b == x) { to = a; d = -1; }
          if (to >= 0 && !prev.count(to)) {
            prev[to] = {x, {e, d}};
            q.push(to);
          }
        }
      }
      std::vector<std::pair<int, int>> back;
      for (int x = tail; x != head; x = prev[x].first) back.push_back(prev[x].second);
      std::reverse(back.begin(), back.end());
      for (auto ed : back) cyc.push_back(ed);
      auto rhs = path_vec(cyc);
      std::vector<std::vector<Frac>> A(R, std::vector<Frac>(cols.size()));
      for (int i2 = 0; i2 < R; ++i2)
        for (size_t j2 = 0; j2 < cols.size(); ++j2) A[i2][j2] = cols[j2][i2];
      std::vector<Frac> x;
      if (!solve_rational(A, rhs, x) || !x[0].is_int() || !x[1].is_int())
        throw complex_error(
            "peripheral curves do not form a homology basis of the cusp");
      cd.cycle_classes.push_back({e0, {int(x[0].n), int(x[1].n)}});
    }
    // coherence: tree edges carry class (0,0), so summing the classes along
    // the curves themselves must give the unit vectors
    auto class_sum = [&](const PeripheralCurve& p) {
      std::pair<int, int> s{0, 0};
      for (auto [e, d] : p)
        for (auto& [e0, pq] : cd.cycle_classes)
          if (e0 == e) {
            s.first += d * pq.first;
            s.second += d * pq.second;
          }
      return s;
    };
    if (class_sum(cd.meridian) != std::pair{1, 0} ||
        class_sum(cd.longitude) != std::pair{0, 1})
      throw complex_error(
          "peripheral curves do not form a homology basis of the cusp");
  }
  return cx;
}

void attach_template(TruncatedComplex& cx, SigmaTemplate tpl,
                     std::vector<std::pair<std::string, int>> labels) {
  if (!tpl.empty() && int(tpl.values.size()) != cx.num_short_orbits())
    throw complex_error("sigma template size mismatch");
  cx.template_ = std::move(tpl);
  cx.labels_ = std::move(labels);
}

TruncatedComplex census_figure_eight() {
  FacePairingData fp;
  fp.tetrahedron_count = 2;
  auto add = [&](int t, int f, int nt, int nf, std::array<int, 4> p) {
    fp.gluings.push_back({t, f, nt, nf, p});
  };
  add(0, 0, 1, 2, {2, 0, 1, 3});
  add(0, 1, 1, 3, {0, 3, 1, 2});
  add(0, 2, 1, 0, {1, 2, 0, 3});
  add(0, 3, 1, 1, {0, 2, 3, 1});
  add(1, 0, 0, 2, {2, 0, 1, 3});
  add(1, 1, 0, 3, {0, 3, 1, 2});
  add(1, 2, 0, 0, {1, 2, 0, 3});
  add(1, 3, 0, 1, {0, 2, 3, 1});
  PeripheralCurve mu{{1, -1}};
  PeripheralCurve lam{{2, +1}, {5, -1}, {11, +1}, {7, +1}};
  auto cx = build_complex(fp, {{mu, lam}}, std::vector<int>{+1, -1}, "fig8");
  SigmaTemplate tpl;
  const char* vals[12] = {"1", "M^-1", "M^-1", "M^-1", "M^-2*L^-1", "M^-1*L^-1",
                          "M^-1", "1",    "M",    "M",    "M",         "1"};
  for (const char* v : vals) tpl.values.push_back(Monomial::parse(v, 1));
  std::vector<std::pair<std::string, int>> labels = {
      {"s1", +5}, {"s2", -2}, {"s3", -6}, {"s4", +1},  {"s5", +9},  {"s6", +3},
      {"s7", +8}, {"s8", +10}, {"s9", +4}, {"s10", +12}, {"s11", +11}, {"s12", +7}};
  attach_template(cx, std::move(tpl), std::move(labels));
  return cx;
}

}  // namespace dehnvol
