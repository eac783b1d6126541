#pragma once

#include "chemorep/cli/config.hpp"

#include <iosfwd>

namespace chemorep::cli {

/// MMS run on the first mesh: per-step CSV `run_m<m>.csv` and VTK snapshots.
int cmd_run(const RunConfig& config, std::ostream& log);

/// MMS sweep over all meshes: one CSV per table plus a least-squares order per norm.
/// Returns 0 iff every run converged; tables of completed runs are written either way.
int cmd_converge(const RunConfig& config, std::ostream& log);

/// Unforced run from the manufactured initial data. Writes `stability.csv`; returns 0 iff the
/// energy never increases and the mass drift stays within mass_tolerance.
int cmd_stability(const RunConfig& config, std::ostream& log);

int dispatch(const RunConfig& config, std::ostream& log);

} // namespace chemorep::cli
