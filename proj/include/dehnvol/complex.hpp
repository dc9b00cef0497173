#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dehnvol/monomial.hpp"

namespace dehnvol {

/// Combinatorial / validation failure while assembling a complex.
struct complex_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FaceGluing {
  int tet = -1, face = -1, nbr_tet = -1, nbr_face = -1;
  std::array<int, 4> perm{0, 1, 2, 3};  // vertex labels of tet -> labels of nbr
};

struct FacePairingData {
  int tetrahedron_count = 0;
  std::vector<FaceGluing> gluings;  // one entry per (tet, face)
};

/// Edge index of the pair {i,j}: {01,02,03,12,13,23} -> 0..5.
int edge_index(int i, int j);
std::pair<int, int> edge_vertices(int idx);

/// Log-parameter slot of a tet edge: {03},{12} -> 0; {02},{13} -> 1;
/// {01},{23} -> 2.
int edge_slot(int i, int j);

/// Signed short-edge references: orbit id with +-1 direction relative to
/// the orbit's canonical (ascending) orientation.
using PeripheralCurve = std::vector<std::pair<int, int>>;

struct CuspData {
  std::vector<std::pair<int, int>> triangles;  // (tet, vertex)
  std::vector<int> vertices;                   // corner-orbit ids
  std::vector<int> edges;                      // short-edge orbit ids
  PeripheralCurve meridian, longitude;
  std::vector<int> spanning_tree;              // subset of `edges`
  // homology class of the fundamental cycle of each non-tree edge,
  // in the (meridian, longitude) basis
  std::vector<std::pair<int, std::pair<int, int>>> cycle_classes;
};

class TruncatedComplex {
 public:
  int size() const { return n_; }
  const std::string& name() const { return name_; }
  int orientation(int t) const { return eps_[t]; }

  const FaceGluing& gluing(int t, int f) const { return glu_[4 * t + f]; }

  int num_edge_classes() const { return int(class_members_.size()); }
  int edge_class(int t, int i, int j) const {
    return edge_class_[6 * t + edge_index(i, j)];
  }
  const std::vector<std::pair<int, int>>& class_members(int c) const {
    return class_members_[c];  // (tet, edge index)
  }
  /// Corner orbits at the two ends of a long-edge class.
  std::pair<int, int> class_end_corners(int c) const;
  /// Cusps touched by a long-edge class (at its two ends).
  std::pair<int, int> class_end_cusps(int c) const;

  int num_short_orbits() const { return int(orbit_members_.size()); }
  int short_orbit(int t, int i, int f) const {
    return short_orbit_[12 * t + 3 * i + (f > i ? f - 1 : f)];
  }
  const std::vector<std::array<int, 3>>& orbit_members(int e) const {
    return orbit_members_[e];  // (tet, vertex, face)
  }
  /// Oriented short edge (t, i, j->k) as (orbit, direction); the canonical
  /// orientation of every orbit is ascending (j < k) on its members.
  std::pair<int, int> oriented_short(int t, int i, int j, int k) const {
    int f = 6 - i - j - k;
    return {short_orbit(t, i, f), j < k ? +1 : -1};
  }
  /// Tail and head corner orbits of an orbit's canonical orientation.
  std::pair<int, int> orbit_endpoints(int e) const;

  int num_corners() const { return int(corner_members_.size()); }
  int corner_orbit(int t, int i, int j) const {
    return corner_orbit_[12 * t + 3 * i + (j > i ? j - 1 : j)];
  }
  const std::vector<std::array<int, 3>>& corner_members(int v) const {
    return corner_members_[v];
  }

  int num_cusps() const { return int(cusps_.size()); }
  const CuspData& cusp(int j) const { return cusps_[j]; }
  int cusp_of_orbit(int e) const { return orbit_cusp_[e]; }
  int cusp_of_corner(int v) const { return corner_cusp_[v]; }

  const SigmaTemplate& sigma_template() const { return template_; }
  bool has_template() const { return !template_.empty(); }
  const std::vector<std::pair<std::string, int>>& short_edge_labels() const {
    return labels_;  // (label, signed 1-based orbit id)
  }
  /// Resolve a bundled label such as "s3" to (orbit, direction).
  std::pair<int, int> labeled_edge(const std::string& label) const;

  const FacePairingData& pairing() const { return pairing_; }

 private:
  friend TruncatedComplex build_complex(const FacePairingData&,
                                        const std::vector<std::pair<PeripheralCurve, PeripheralCurve>>&,
                                        const std::optional<std::vector<int>>&,
                                        std::string);
  friend void attach_template(TruncatedComplex&, SigmaTemplate,
                              std::vector<std::pair<std::string, int>>);

  int n_ = 0;
  std::string name_;
  FacePairingData pairing_;
  std::vector<int> eps_;
  std::vector<FaceGluing> glu_;                 // indexed 4t+f
  std::vector<int> edge_class_;                 // 6t + edge index
  std::vector<std::vector<std::pair<int, int>>> class_members_;
  std::vector<int> short_orbit_;                // 12t + 3i + packed f
  std::vector<std::vector<std::array<int, 3>>> orbit_members_;
  std::vector<int> corner_orbit_;               // 12t + 3i + packed j
  std::vector<std::vector<std::array<int, 3>>> corner_members_;
  std::vector<int> orbit_cusp_, corner_cusp_;
  std::vector<CuspData> cusps_;
  SigmaTemplate template_;
  std::vector<std::pair<std::string, int>> labels_;
};

/// Assemble the truncated complex from face pairings and per-cusp
/// peripheral curves (signed 1-based short-edge ids resolved after orbit
/// numbering). Orientation signs are propagated from tetrahedron 0 unless
/// an explicit override is given.
TruncatedComplex build_complex(
    const FacePairingData& gluing,
    const std::vector<std::pair<PeripheralCurve, PeripheralCurve>>& peripheral,
    const std::optional<std::vector<int>>& orientation_signs = std::nullopt,
    std::string name = "");

void attach_template(TruncatedComplex& cx, SigmaTemplate tpl,
                     std::vector<std::pair<std::string, int>> labels);

/// The bundled two-tetrahedron figure-eight knot exterior with its sigma
/// template, meridian and longitude.
TruncatedComplex census_figure_eight();

/// Versioned JSON serialization.
std::string save_complex(const TruncatedComplex& cx);
TruncatedComplex load_complex(const std::string& bytes);

}  // namespace dehnvol
