#pragma once

#include <complex>
#include <vector>

namespace dehnvol {

using cplx = std::complex<double>;

/// Dilogarithm Li2 with principal branch, cut along [1,inf) continuous
/// from below. Relative accuracy ~1e-14 for |z| <= 10.
cplx li2(cplx z);

/// Bloch-Wigner function D(z) = Im Li2(z) + arg(1-z) log|z|.
double bloch_wigner(cplx z);

/// Extended Rogers dilogarithm
///   R(z;p,q) = Li2(z) + (pi i/2)(p log(1-z) + q log z)
///              + log(1-z) log z / 2 - pi^2/2.
cplx rogers_extended(cplx z, long p, long q);

struct VolumeReport {
  cplx psi = 0;          // representative, Re in [0, modulus)
  double volume = 0;     // Im psi
  double cs = 0;         // -Re psi reduced into [0, modulus)
  bool link_exterior = false;  // true: modulus pi^2, false: pi^2/2
  double modulus = 0;
  // residual diagnostics, filled by the pipeline when available
  double gluing_residual = -1;
  double edge_residual = -1;
  double cusp_residual = -1;
  double filling_residual = -1;
  double psi_independence = -1;
};

/// Reduce x into [0, m).
double reduce_mod(double x, double m);

/// Sum eps_j R(z_j;p_j,q_j) with the real part reduced into [0, pi^2).
struct FlatTriple {
  cplx z;
  long p, q;
  int eps;
};
cplx psi_sum(const std::vector<FlatTriple>& flats);

/// Vol + i CS report from a psi value.
VolumeReport complex_volume(cplx psi_value, bool link_exterior);

/// Independent volume formula: sum eps_j D(z_j).
double volume_bw(const std::vector<std::pair<cplx, int>>& shapes);

}  // namespace dehnvol
