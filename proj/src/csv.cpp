#include "stobif/csv.hpp"

#include <cmath>
#include <cstdio>

namespace stobif {

std::string format_double(double v) {
    if (std::isnan(v))
        return "NaN";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_provenance(std::ostream& os, const Provenance& prov) {
    for (const auto& [key, value] : prov)
        os << "# " << key << " = " << value << "\n";
}

void write_orbit_csv(std::ostream& os, const MeanOrbit& orbit, const Provenance& prov) {
    write_provenance(os, prov);
    os << "r,x0,t,mean,mass\n";
    for (std::size_t i = 0; i < orbit.times.size(); ++i)
        os << format_double(orbit.r) << ',' << format_double(orbit.x0) << ','
           << format_double(orbit.times[i]) << ',' << format_double(orbit.means[i])
           << ',' << format_double(orbit.surviving_mass[i]) << '\n';
}

void write_ensemble_csv(std::ostream& os, const EnsembleOrbit& ens,
                        const Provenance& prov) {
    write_provenance(os, prov);
    const MeanOrbit& orbit = ens.orbit;
    os << "r,x0,t,mean,mass,stderr\n";
    for (std::size_t i = 0; i < orbit.times.size(); ++i)
        os << format_double(orbit.r) << ',' << format_double(orbit.x0) << ','
           << format_double(orbit.times[i]) << ',' << format_double(orbit.means[i])
           << ',' << format_double(orbit.surviving_mass[i]) << ','
           << format_double(ens.std_error[i]) << '\n';
}

namespace {

void write_scan_rows(std::ostream& os, const EquilibriumScan& scan, Mode mode) {
    const std::string mode_str = to_string(mode);
    if (scan.equilibria.empty()) {
        os << format_double(scan.r) << ",NaN,escape,NaN," << mode_str << '\n';
        return;
    }
    for (const MeanEquilibrium& eq : scan.equilibria)
        os << format_double(scan.r) << ',' << format_double(eq.location) << ','
           << to_string(eq.stability) << ',' << format_double(eq.residual) << ','
           << mode_str << '\n';
}

} // namespace

void write_scan_csv(std::ostream& os, const EquilibriumScan& scan, Mode mode,
                    const Provenance& prov) {
    write_provenance(os, prov);
    if (!scan.diagnostic.empty())
        os << "# diagnostic = " << scan.diagnostic << "\n";
    os << "r,location,stability,residual,mode\n";
    write_scan_rows(os, scan, mode);
}

void write_diagram_csv(std::ostream& os, const BifurcationDiagram& diagram,
                       const Provenance& prov) {
    write_provenance(os, prov);
    os << "r,location,stability,residual,mode\n";
    for (const EquilibriumScan& scan : diagram.scans)
        write_scan_rows(os, scan, diagram.mode);
}

void write_summary_csv(std::ostream& os, const BifurcationDiagram& diagram,
                       const Provenance& prov) {
    write_provenance(os, prov);
    os << "r_lo,r_hi,signature_before,signature_after\n";
    for (const BifurcationInterval& b : diagram.bifurcations)
        os << format_double(b.r_lo) << ',' << format_double(b.r_hi) << ','
           << b.signature_before << ',' << b.signature_after << '\n';
}

void write_density_csv(std::ostream& os, const std::vector<DensityField>& snapshots,
                       const Provenance& prov) {
    write_provenance(os, prov);
    os << "t,x,p\n";
    for (const DensityField& field : snapshots)
        for (int i = 0; i < field.grid.n; ++i)
            os << format_double(field.time) << ',' << format_double(field.grid.node(i))
               << ',' << format_double(field.values[static_cast<std::size_t>(i)])
               << '\n';
}

} // namespace stobif
