#pragma once

#include "dehnvol/dilog.hpp"
#include "dehnvol/flattening.hpp"
#include "dehnvol/peripheral.hpp"

namespace dehnvol {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string census;              // "fig8", or empty with a file path
  std::string triangulation_path;  // JSON triangulation
  std::string fill = "inf";        // "r/s,..." or "inf"
  std::optional<std::vector<std::pair<long, long>>> uv_override;
  std::optional<std::vector<std::pair<cplx, cplx>>> explicit_ml;
  int starts = 32;
  unsigned seed = 1;
  double tol = 1e-12;
  std::pair<long, long> k_range{-8, 8};
  bool link_exterior = false;
  int precision = 9;
  bool corrupt_a = false;  // debug: damage one log-cocycle value
};

struct CheckResults {
  double gluing = -1, edge = -1, cusp = -1, filling = -1, psi_independence = -1;
  bool pass() const {
    return gluing < 1e-10 && edge < 1e-10 && cusp < 1e-9 && filling < 1e-8 &&
           psi_independence < 1e-8;
  }
};

struct VolumeRun {
  TruncatedComplex cx;
  FillingVector filling;
  std::vector<HolonomyCandidate> candidates;
  HolonomyCandidate selected;
  PeripheralLog b;
  cplx psi = 0;
  VolumeReport report;
  CheckResults checks;
};

/// Full pipeline: build -> sigma -> solve_filling -> select_geometric -> b
/// -> a -> flattenings -> checks -> Psi -> report.
VolumeRun run_volume(const RunConfig& config);

/// JSON document of a completed run (numbers rounded to config.precision).
std::string volume_json(const VolumeRun& run, const RunConfig& config);
/// Short human-readable form.
std::string volume_text(const VolumeRun& run, const RunConfig& config);

/// Residual table; second element false when some residual exceeds its
/// tolerance.
std::pair<std::string, bool> run_check(const RunConfig& config);

/// A-polynomial text for two-tetrahedron one-cusp censuses; at_m_one
/// substitutes M = 1 and prints a factorization hint when applicable.
std::string run_apoly(const RunConfig& config, bool at_m_one = false);

TruncatedComplex load_from_config(const RunConfig& config);

}  // namespace dehnvol
