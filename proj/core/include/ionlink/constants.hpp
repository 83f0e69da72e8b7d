#pragma once

// Physical constants (SI) and reference data for the ion species used
// throughout the library.  All internal computation is in SI units; the
// lab-unit helpers below convert once at the boundary.

namespace ionlink::constants {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double elementary_charge = 1.602176634e-19;   // C (exact)
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double seconds_per_year = 365.25 * 86400.0;   // Julian year

// Unit helpers: accept the units quoted in lab notebooks (amu, MHz, mm,
// ns, eV) and return SI.
inline constexpr double amu_to_kg(double amu) { return amu * atomic_mass_unit; }
inline constexpr double mm_to_m(double mm) { return mm * 1e-3; }
inline constexpr double um_to_m(double um) { return um * 1e-6; }
inline constexpr double nm_to_m(double nm) { return nm * 1e-9; }
inline constexpr double ns_to_s(double ns) { return ns * 1e-9; }
inline constexpr double mhz_to_rad_per_s(double mhz) { return 2.0 * pi * mhz * 1e6; }
inline constexpr double khz_to_hz(double khz) { return khz * 1e3; }
inline constexpr double joule_to_ev(double joule) { return joule / elementary_charge; }
inline constexpr double ev_to_joule(double ev) { return ev * elementary_charge; }

// 171Yb+ reference values used by the default configurations.
namespace yb171 {
inline constexpr double mass_amu = 171.0;
inline constexpr double mass_kg = mass_amu * atomic_mass_unit;
// 2P1/2 excited state
inline constexpr double p12_lifetime_s = 8.12e-9;
inline constexpr double p12_linewidth_hz = 19.6e6;  // 1/(2 pi tau)
inline constexpr double p12_branching_to_d32 = 0.005;
// Hyperfine qubit: 2S1/2 |F=0,mF=0> and |F=1,mF=0| clock states
inline constexpr double qubit_splitting_hz = 12.6e9;
// Frequency-qubit photon modes: sum of S1/2 and P1/2 hyperfine splittings
inline constexpr double photon_mode_splitting_hz = 14.7e9;
inline constexpr double s12_p12_wavelength_nm = 369.5;
inline constexpr double d32_repump_wavelength_nm = 935.2;
inline constexpr double hyperfine_coherence_time_s = 2.5;
}  // namespace yb171

// Hydrogen-like ion qubit candidates, shipped as reference data only.
struct IonSpecies {
  const char* symbol;
  double isotope_amu;
  double s12_hyperfine_ghz;      // ground-state hyperfine splitting
  double p_fine_structure_thz;   // P level fine structure
  double s12_p12_wavelength_nm;  // main cycling transition
};

inline constexpr IonSpecies ion_species_table[] = {
    {"Be+", 9, 1.25, 0.2, 313.2},    {"Mg+", 25, 1.8, 2.75, 280.4},
    {"Ca+", 43, 3.2, 6.7, 397.0},    {"Zn+", 67, 7.2, 26.2, 206.3},
    {"Sr+", 87, 5.0, 24.0, 421.7},   {"Cd+", 111, 14.5, 75.0, 226.5},
    {"Ba+", 137, 8.0, 50.7, 493.5},  {"Yb+", 171, 12.6, 100.0, 369.5},
    {"Hg+", 199, 40.5, 274.0, 194.2},
};

}  // namespace ionlink::constants
