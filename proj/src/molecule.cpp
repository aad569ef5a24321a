#include "slowbeam/molecule.hpp"

#include <stdexcept>

#include "slowbeam/constants.hpp"

namespace slowbeam {

void Molecule::validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("molecule '" + name + "': mass must be > 0");
    if (alpha_vol < 0.0)
        throw std::invalid_argument("molecule '" + name + "': alpha_vol must be >= 0");
    if (sigma_abs < 0.0)
        throw std::invalid_argument("molecule '" + name + "': sigma_abs must be >= 0");
    if (sigma_ion < 0.0)
        throw std::invalid_argument("molecule '" + name + "': sigma_ion must be >= 0");
}

Molecule make_molecule(std::string name, double mass_amu, double alpha_A3,
                       double sigma_abs_m2, double sigma_ion_m2, double dipole_D) {
    Molecule m;
    m.name = std::move(name);
    m.mass = units::amu_to_kg(mass_amu);
    m.alpha_vol = units::A3_to_m3(alpha_A3);
    m.sigma_abs = sigma_abs_m2;
    m.sigma_ion = sigma_ion_m2;
    m.dipole = units::debye_to_Cm(dipole_D);
    m.validate();
    return m;
}

const std::vector<Molecule>& catalogue() {
    static const std::vector<Molecule> cat = [] {
        constexpr double sigma_abs = 3e-23;   // m^2, NIR (1064 nm), family value
        constexpr double sigma_ion = 2.7e-18; // m^2, family value
        std::vector<Molecule> v;
        for (int n = 1; n <= 9; ++n) {
            double mass_amu = 3815.0 + 619.0 * (n - 5);
            double alpha_A3 = (n == 7) ? 194.0 : 84.0 + 18.0 * (n - 1);
            double dipole_D = (n == 7) ? 6.0 : 0.0;
            v.push_back(make_molecule("perfluoroC60-n" + std::to_string(n), mass_amu,
                                      alpha_A3, sigma_abs, sigma_ion, dipole_D));
        }
        return v;
    }();
    return cat;
}

const Molecule& find_molecule(const std::string& name) {
    for (const auto& m : catalogue())
        if (m.name == name) return m;
    throw std::invalid_argument("unknown molecule '" + name + "'");
}

}  // namespace slowbeam
