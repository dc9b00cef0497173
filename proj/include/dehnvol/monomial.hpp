#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace dehnvol {

using cplx = std::complex<double>;

/// Monomial in the holonomy eigenvalues, prod_j M_j^{x_j} L_j^{y_j}.
/// Stored as one (x, y) exponent pair per cusp.
struct Monomial {
  std::vector<std::pair<int, int>> exps;

  explicit Monomial(int cusps = 0) : exps(cusps, {0, 0}) {}

  Monomial& operator*=(const Monomial& o);
  Monomial inverse() const;
  bool is_one() const;
  bool operator==(const Monomial& o) const { return exps == o.exps; }

  /// Evaluate at per-cusp targets (M_j, L_j).
  cplx eval(const std::vector<std::pair<cplx, cplx>>& targets) const;
  /// Exponent sum of logs: sum x_j m_j + y_j l_j.
  cplx eval_log(const std::vector<std::pair<cplx, cplx>>& logs) const;

  /// "M^-2*L^-1", "M2*L2" for cusp 1, "1" when trivial. Single-cusp
  /// templates may omit the index.
  std::string str() const;
  static Monomial parse(const std::string& text, int cusps);
};

/// Sigma template: one monomial per short-edge orbit, on the orbit's
/// canonical orientation.
struct SigmaTemplate {
  std::vector<Monomial> values;
  bool empty() const { return values.empty(); }
};

}  // namespace dehnvol
