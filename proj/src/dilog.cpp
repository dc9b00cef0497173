#include "dehnvol/dilog.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dehnvol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2_6 = kPi * kPi / 6.0;

// power series, valid for |z| <= ~0.6
cplx li2_series(cplx z) {
  cplx term = z, sum = z;
  for (int n = 2; n < 60; ++n) {
    term *= z;
    cplx add = term / double(n * n);
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Bernoulli coefficients B_k/(k+1)! of the series Li2(z) = sum c_k w^{k+1},
// w = -log(1-z); converges for |w| < 2 pi, fast for |w| <= ~1.5
constexpr double kBern[] = {
    1.0,                          // k=0
    -0.25,                        // k=1
    0.027777777777777777778,      // k=2
    -0.00027777777777777777778,   // k=4
    4.7241118669690098262e-6,     // k=6
    -9.1857730746619635509e-8,    // k=8
    1.8978869988970999072e-9,     // k=10
    -4.0647616451442255268e-11,   // k=12
    8.9216910204564525552e-13,    // k=14
    -1.9939295860721075687e-14,   // k=16
    4.5189800296199181917e-16,    // k=18
    -1.0356517612181247014e-17,   // k=20
    2.3952186210261867457e-19,    // k=22
    -5.5817858743250093363e-21,   // k=24
    1.3091507554183212858e-22,    // k=26
    -3.0874198024267402932e-24,   // k=28
};

// log series around z = 1-e^{-w}; needs |w| not too large
cplx li2_logseries(cplx z) {
  cplx w = -std::log(1.0 - z);
  cplx w2 = w * w;
  cplx sum = kBern[0] * w + kBern[1] * w2;
  cplx pw = w * w2;  // w^{k+1} for k=2
  for (int i = 2; i < int(sizeof(kBern) / sizeof(kBern[0])); ++i) {
    sum += kBern[i] * pw;
    pw *= w2;
  }
  return sum;
}

}  // namespace

cplx li2(cplx z) {
  // principal branch, continuous from below on the cut [1, inf)
  if (z.imag() == 0.0 && !std::signbit(z.imag()) && z.real() > 1.0)
    z = cplx(z.real(), -0.0);
  double az = std::abs(z);
  if (az <= 0.5) return li2_series(z);
  if (z == cplx(1.0)) return cplx(kPi2_6);
  if (std::abs(1.0 - z) <= 0.5)  // reflection
    return kPi2_6 - std::log(z) * std::log(1.0 - z) - li2_series(1.0 - z);
  if (az > 2.0) {  // inversion
    cplx lz = std::log(-z);
    return -kPi2_6 - 0.5 * lz * lz - li2(1.0 / z);
  }
  // annulus 0.5 < |z| <= 2 away from 1: one inversion if outside the unit
  // circle, then the log series (|log(1-z)| stays moderate there)
  if (az > 1.0) {
    cplx lz = std::log(-z);
    return -kPi2_6 - 0.5 * lz * lz - li2(1.0 / z);
  }
  return li2_logseries(z);
}

double bloch_wigner(cplx z) {
  if (z == cplx(0.0) || z == cplx(1.0))
    throw std::domain_error("bloch_wigner: z in {0,1}");
  if (z.imag() == 0.0) {
    // D vanishes on the real axis; avoid arg/log noise at the cut
    return 0.0;
  }
  return li2(z).imag() + std::arg(1.0 - z) * std::log(std::abs(z));
}

cplx rogers_extended(cplx z, long p, long q) {
  if (z == cplx(0.0) || z == cplx(1.0))
    throw std::domain_error("rogers_extended: z in {0,1}");
  cplx l1z = std::log(1.0 - z), lz = std::log(z);
  return li2(z) + cplx(0, kPi / 2) * (double(p) * l1z + double(q) * lz) +
         0.5 * l1z * lz - kPi * kPi / 2.0;
}

double reduce_mod(double x, double m) {
  double r = std::fmod(x, m);
  if (r < 0) r += m;
  if (r >= m) r -= m;          // fmod edge case
  if (m - r < 1e-12) r = 0.0;  // snap the domain boundary
  return r == 0.0 ? 0.0 : r;   // normalize -0
}

cplx psi_sum(const std::vector<FlatTriple>& flats) {
  cplx s = 0;
  for (const auto& f : flats) s += double(f.eps) * rogers_extended(f.z, f.p, f.q);
  return cplx(reduce_mod(s.real(), kPi * kPi), s.imag());
}

VolumeReport complex_volume(cplx psi_value, bool link_exterior) {
  VolumeReport r;
  r.link_exterior = link_exterior;
  r.modulus = link_exterior ? kPi * kPi : kPi * kPi / 2.0;
  r.psi = cplx(reduce_mod(psi_value.real(), r.modulus), psi_value.imag());
  r.volume = psi_value.imag();
  r.cs = reduce_mod(-psi_value.real(), r.modulus);
  return r;
}

double volume_bw(const std::vector<std::pair<cplx, int>>& shapes) {
  double v = 0;
  for (const auto& [z, eps] : shapes) v += double(eps) * bloch_wigner(z);
  return v;
}

}  // namespace dehnvol
