#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "stobif/bifurcation.hpp"
#include "stobif/density.hpp"
#include "stobif/equilibria.hpp"
#include "stobif/mean_orbit.hpp"
#include "stobif/montecarlo.hpp"

namespace stobif {

/// Effective configuration echoed into CSV headers as "# key = value" lines.
using Provenance = std::vector<std::pair<std::string, std::string>>;

std::string format_double(double v);

void write_provenance(std::ostream& os, const Provenance& prov);

/// Header r,x0,t,mean,mass
void write_orbit_csv(std::ostream& os, const MeanOrbit& orbit, const Provenance& prov);

/// Header r,x0,t,mean,mass,stderr
void write_ensemble_csv(std::ostream& os, const EnsembleOrbit& ens, const Provenance& prov);

/// Header r,location,stability,residual,mode; empty scans emit one
/// location=NaN,stability=escape row.
void write_scan_csv(std::ostream& os, const EquilibriumScan& scan, Mode mode,
                    const Provenance& prov);

/// Diagram rows for every scan of a sweep, same schema as write_scan_csv.
void write_diagram_csv(std::ostream& os, const BifurcationDiagram& diagram,
                       const Provenance& prov);

/// Header r_lo,r_hi,signature_before,signature_after
void write_summary_csv(std::ostream& os, const BifurcationDiagram& diagram,
                       const Provenance& prov);

/// Header t,x,p, one row per (snapshot, node).
void write_density_csv(std::ostream& os, const std::vector<DensityField>& snapshots,
                       const Provenance& prov);

} // namespace stobif
