#pragma once

#include <optional>
#include <vector>

#include "dehnvol/complex.hpp"
#include "dehnvol/monomial.hpp"

namespace dehnvol {

struct cocycle_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dehn-filling coefficients: coprime (r,s) per cusp, or unfilled.
struct FillingSlot {
  bool filled = false;
  long r = 0, s = 0;
};
using FillingVector = std::vector<FillingSlot>;

FillingVector parse_filling(const std::string& text);  // "1/5,inf,..."

/// Multiplicative boundary cocycle sigma: values on short-edge orbits
/// (canonical orientation), with per-cusp holonomy targets (M_j, L_j).
class MultiplicativeCocycle {
 public:
  MultiplicativeCocycle(const TruncatedComplex& cx, std::vector<cplx> vals,
                        std::vector<std::pair<cplx, cplx>> targets);

  cplx value(int orbit, int dir) const {
    return dir > 0 ? vals_[orbit] : 1.0 / vals_[orbit];
  }
  cplx value(int t, int i, int j, int k) const {
    auto [o, d] = cx_->oriented_short(t, i, j, k);
    return value(o, d);
  }
  const std::vector<cplx>& values() const { return vals_; }
  const std::vector<std::pair<cplx, cplx>>& targets() const { return targets_; }
  const TruncatedComplex& complex() const { return *cx_; }

  /// max |triangle product - 1| over all boundary triangles
  double triangle_residual() const;

 private:
  const TruncatedComplex* cx_;
  std::vector<cplx> vals_;
  std::vector<std::pair<cplx, cplx>> targets_;
};

/// Additive log-cocycle a with a == log sigma (mod pi i) edge-wise.
class LogCocycle {
 public:
  LogCocycle(const TruncatedComplex& cx, std::vector<cplx> vals);
  cplx value(int orbit, int dir) const {
    return dir > 0 ? vals_[orbit] : -vals_[orbit];
  }
  cplx value(int t, int i, int j, int k) const {
    auto [o, d] = cx_->oriented_short(t, i, j, k);
    return value(o, d);
  }
  const std::vector<cplx>& values() const { return vals_; }
  const TruncatedComplex& complex() const { return *cx_; }
  double triangle_residual() const;

 private:
  const TruncatedComplex* cx_;
  std::vector<cplx> vals_;
};

/// Peripheral log data b: per cusp b(mu) = log M + u pi i, b(lambda) =
/// log L + v pi i.
struct PeripheralLog {
  struct Entry {
    cplx b_mu = 0, b_lambda = 0;
    long u = 0, v = 0;
  };
  std::vector<Entry> entries;
};

/// Build sigma with induced holonomy (M_j, L_j): from the bundled template
/// when the complex carries one, otherwise by the spanning-tree
/// fundamental-cycle construction (tree edges get 1).
MultiplicativeCocycle sigma_from_holonomy(
    const TruncatedComplex& cx, const std::vector<std::pair<cplx, cplx>>& targets);

/// Product (resp. sum) of cocycle values along a closed edge-path on cusp j.
cplx induced_hom(const MultiplicativeCocycle& sigma, int cusp,
                 const PeripheralCurve& path);
cplx induced_hom(const LogCocycle& a, int cusp, const PeripheralCurve& path);

/// Choose (u_j, v_j) satisfying the filling equation b_j(mu^r lambda^s) = 0
/// (filled) or b_j = 0 (unfilled). Default: minimal |u|+|v|, ties by smaller
/// u; explicit overrides accepted.
PeripheralLog select_b(
    const MultiplicativeCocycle& sigma, const FillingVector& filling,
    const std::optional<std::vector<std::pair<long, long>>>& uv_override =
        std::nullopt);

/// Spanning-tree lift: a in the set A with induced homomorphisms b.
LogCocycle lift_log_cocycle(const MultiplicativeCocycle& sigma,
                            const PeripheralLog& b);

/// C^0 gauge action. tau (resp. theta) is indexed by corner orbits.
MultiplicativeCocycle act_tau(const MultiplicativeCocycle& sigma,
                              const std::vector<cplx>& tau);
LogCocycle act_tau(const LogCocycle& a, const std::vector<cplx>& theta);

}  // namespace dehnvol
