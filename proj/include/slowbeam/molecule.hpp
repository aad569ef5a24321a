#pragma once

#include <string>
#include <vector>

namespace slowbeam {

// The particle under study. All fields SI.
struct Molecule {
    std::string name;
    double mass = 0.0;        // kg
    double alpha_vol = 0.0;   // volumetric polarizability, m^3
    double sigma_abs = 0.0;   // optical absorption cross-section, m^2
    double sigma_ion = 0.0;   // electron-impact ionization cross-section, m^2
    double dipole = 0.0;      // permanent dipole moment, C m (informational)

    // Throws std::invalid_argument on violated invariants.
    void validate() const;
};

// Builder taking the customary user-facing units.
Molecule make_molecule(std::string name, double mass_amu, double alpha_A3,
                       double sigma_abs_m2, double sigma_ion_m2, double dipole_D = 0.0);

// Built-in perfluoroalkylated nanosphere family, side-chain counts n = 1..9.
// Masses follow the 619 amu per side-chain series anchored on the measured
// n = 5..9 values; polarizabilities follow 84 A^3 + 18 A^3 per additional
// chain, with the directly computed 194 A^3 for n = 7.
const std::vector<Molecule>& catalogue();

// Throws std::invalid_argument when the name is not in the catalogue.
const Molecule& find_molecule(const std::string& name);

}  // namespace slowbeam
