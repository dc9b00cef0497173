#pragma once

#include "dehnvol/ptolemy.hpp"

namespace dehnvol {

struct flattening_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-tetrahedron flattening data: cross-ratio z, log-parameters
/// (alpha0, alpha1, alpha2) with alpha0+alpha1+alpha2 = 0, branch integers
/// (p, q) and the orientation sign.
struct FlatteningSet {
  struct Tet {
    std::array<cplx, 3> alpha;
    cplx z;
    long p = 0, q = 0;
    int eps = 1;
  };
  std::vector<Tet> tets;

  /// log-parameters reconstructed from the (z; p, q) data per tetrahedron:
  /// (log z + p pi i, -log(1-z) + q pi i, -log z + log(1-z) - (p+q) pi i)
  std::array<cplx, 3> log_params(int t) const;

  /// max |alpha0+alpha1+alpha2| over tetrahedra
  double sum_residual() const;
  /// max distance of (alpha - log)/(pi i) residues from integers
  double congruence_residual() const;
};

/// strict: fail when the branch integers are not integral (a not in the
/// set A for this sigma); the diagnostic path disables it.
FlatteningSet build_flattenings(const PtolemyAssignment& c, const LogCocycle& a,
                                const MultiplicativeCocycle& sigma,
                                bool strict = true);

/// Claim 1: eps-weighted sum of log-parameters around each long-edge class;
/// returns the maximum modulus over classes.
double edge_condition_check(const FlatteningSet& fl, const TruncatedComplex& cx);

/// A normal path near a cusp, as the sequence of passed corners (t, i, c):
/// the path crosses triangle (t,i) passing the long edge {i,c}.
struct NormalPath {
  int cusp = -1;
  std::vector<std::array<int, 3>> corners;
};

/// Push a closed edge-path off to its right side.
NormalPath normal_path_from_edge_path(const TruncatedComplex& cx, int cusp,
                                      const PeripheralCurve& path);

/// Claim 2: signed sum of log-parameters along the normal path minus
/// 2 b_j(gamma), where b_j(gamma) is the value of the log-cocycle a along
/// the underlying edge-path.
cplx cusp_condition_check(const FlatteningSet& fl, const LogCocycle& a, int cusp,
                          const PeripheralCurve& gamma);

/// Signed sum of log-parameters along an explicit normal path.
cplx normal_path_sum(const FlatteningSet& fl, const TruncatedComplex& cx,
                     const NormalPath& np);

/// Psi over several log-cocycle lifts with the same induced b: max pairwise
/// difference mod pi^2.
double psi_independence_test(const PtolemyAssignment& c,
                             const MultiplicativeCocycle& sigma,
                             const PeripheralLog& b, int trials,
                             unsigned seed = 7);

/// Psi value of a solution for the given b (tree lift internally).
cplx psi_of(const PtolemyAssignment& c, const MultiplicativeCocycle& sigma,
            const PeripheralLog& b);

}  // namespace dehnvol
