#pragma once

#include <array>
#include <optional>

#include "dehnvol/cocycle.hpp"

namespace dehnvol {

struct ptolemy_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One sigma-deformed Ptolemy equation per tetrahedron,
///   KY c(y0) c(y1) = KW c(w0) c(w1) + KX c(x0) c(x1),
/// in long-edge class variables; the pairs are the {02}{13}, {01}{23} and
/// {03}{12} opposite-edge pairs of the tetrahedron.
struct TetEquation {
  cplx KY = 1, KW = 1, KX = 1;
  int y0, y1, w0, w1, x0, x1;
  // symbolic coefficients, present when built from a sigma template
  std::optional<std::array<Monomial, 3>> monomials;  // (KY, KW, KX)
};

struct PtolemySystem {
  std::vector<TetEquation> equations;
  std::vector<int> gauge_classes;  // one long-edge class per cusp, fixed to 1
  const TruncatedComplex* cx = nullptr;
};

/// A solution of the deformed Ptolemy system: one value per long-edge class.
struct PtolemyAssignment {
  std::vector<cplx> c;
  std::vector<std::pair<cplx, cplx>> targets;  // sigma holonomy it solves for
};

PtolemySystem build_system(const TruncatedComplex& cx,
                           const MultiplicativeCocycle& sigma);

/// Symbolic variant from the bundled sigma template (coefficients as
/// monomials in the M_j, L_j).
PtolemySystem build_symbolic_system(const TruncatedComplex& cx);

double system_residual(const PtolemySystem& sys, const std::vector<cplx>& c);

/// Multistart Newton over the gauge slice; deduplicated, deterministically
/// sorted solutions with residual < tol.
std::vector<PtolemyAssignment> solve(const PtolemySystem& sys,
                                     const MultiplicativeCocycle& sigma,
                                     int starts = 64, unsigned seed = 1,
                                     double tol = 1e-12);

/// Short-edge parameter c(t, i, j->k) recovered from the hexagon relation.
cplx short_edge_param(const PtolemyAssignment& c, const MultiplicativeCocycle& sigma,
                      int t, int i, int j, int k);

/// The natural SL(2,C) cocycle: counter-diagonal on long edges,
/// upper-triangular on short edges.
struct NaturalCocycle {
  using Mat = std::array<cplx, 4>;  // row major [a b; c d]
  const TruncatedComplex* cx;
  // long-edge matrix for the ascending orientation of (t, {i,j})
  Mat long_edge(int t, int i, int j) const;
  // short-edge matrix for (t, i, j->k)
  Mat short_edge(int t, int i, int j, int k) const;
  /// max deviation from the cocycle conditions (triangles and hexagons)
  double face_residual() const;
  /// product along a closed path of oriented short edges
  Mat boundary_product(const PeripheralCurve& path) const;

  PtolemyAssignment c;
  MultiplicativeCocycle sigma;
};

NaturalCocycle natural_cocycle(const PtolemyAssignment& c,
                               const MultiplicativeCocycle& sigma);

struct FillingCheck {
  bool pass = true;
  std::vector<double> residuals;  // per cusp
};

/// rho_c(mu^r lambda^s) = +-I for filled cusps, parabolic traces for
/// unfilled ones.
FillingCheck check_filling_representation(const PtolemyAssignment& c,
                                          const MultiplicativeCocycle& sigma,
                                          const FillingVector& filling,
                                          double tol = 1e-8);

/// Cross-ratio triples (z, z', z'') per tetrahedron.
struct CrossRatios {
  std::vector<std::array<cplx, 3>> z;
  bool degenerate = false;
  int degenerate_tet = -1;
};

CrossRatios cross_ratios(const PtolemyAssignment& c,
                         const MultiplicativeCocycle& sigma,
                         bool throw_on_degenerate = true);

/// max |prod z^eps - 1| over long-edge classes (gluing equations).
double gluing_check(const CrossRatios& crs, const TruncatedComplex& cx);

/// Diagonal action (z_1,...,z_h) . c and the Ptolemy gauge action c^tau.
PtolemyAssignment act_diagonal(const TruncatedComplex& cx,
                               const PtolemyAssignment& c,
                               const std::vector<cplx>& z);
PtolemyAssignment act_tau(const TruncatedComplex& cx, const PtolemyAssignment& c,
                          const std::vector<cplx>& tau);

/// Concatenate r*mu + s*lambda as a closed edge-path (with connectors and
/// backtrack cancellation).
PeripheralCurve peripheral_power_path(const TruncatedComplex& cx, int cusp,
                                      long r, long s);

}  // namespace dehnvol
