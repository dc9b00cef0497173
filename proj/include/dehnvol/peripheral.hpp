#pragma once

#include <map>

#include "dehnvol/ptolemy.hpp"

namespace dehnvol {

struct peripheral_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integer Laurent polynomial in (M, L); exponents may be negative.
struct LaurentPoly2 {
  std::map<std::pair<int, int>, long long> terms;  // (expM, expL) -> coeff

  static LaurentPoly2 monomial(long long coeff, int em, int el);
  LaurentPoly2 operator+(const LaurentPoly2& o) const;
  LaurentPoly2 operator-(const LaurentPoly2& o) const;
  LaurentPoly2 operator*(const LaurentPoly2& o) const;
  bool zero() const { return terms.empty(); }
  bool operator==(const LaurentPoly2& o) const { return terms == o.terms; }

  /// divide by the minimal monomial and normalize the leading sign positive
  LaurentPoly2 normalized() const;
  cplx eval(cplx M, cplx L) const;
  /// substitute M = 1, returning coefficients of powers of L
  std::map<int, long long> at_m_one() const;
  std::string str() const;  // "L - L*M^2 - M^4 - ..."
};

/// Exact Sylvester resultant of two quadratics in z; f[k], g[k] are the
/// coefficients of z^k.
LaurentPoly2 resultant_quadratics(const std::array<LaurentPoly2, 3>& f,
                                  const std::array<LaurentPoly2, 3>& g);

/// The reduced-variable eliminant of a two-tetrahedron, one-cusp census
/// (the figure-eight A-polynomial path).
LaurentPoly2 apoly_two_tet(const TruncatedComplex& cx);

struct HolonomyCandidate {
  std::vector<std::pair<cplx, cplx>> targets;  // (M_j, L_j)
  PtolemyAssignment c;
  std::vector<long> k;     // branch integer per filled cusp
  double volume = 0;       // sum eps_j D(z_j)
  bool degenerate = false; // some cross-ratio at {0,1}
  FillingCheck check;
};

/// Couple the deformed Ptolemy system with the filling constraints
/// r_j m_j + s_j l_j = 2 pi i k_j (and parabolic sign lifts for unfilled
/// cusps); multistart Newton over c and the holonomy logs.
std::vector<HolonomyCandidate> solve_filling(
    const TruncatedComplex& cx, const FillingVector& filling,
    std::pair<long, long> k_range = {-8, 8}, int starts = 32,
    unsigned seed = 1, double tol = 1e-12);

/// Maximum-volume candidate; ties broken lexicographically on rounded M_j.
const HolonomyCandidate& select_geometric(
    const std::vector<HolonomyCandidate>& candidates);

}  // namespace dehnvol
