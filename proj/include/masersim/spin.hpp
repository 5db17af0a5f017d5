// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#ifndef MASERSIM_SPIN_HPP
#define MASERSIM_SPIN_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "masersim/constants.hpp"
#include "masersim/errors.hpp"

namespace masersim {

using Vec3 = Eigen::Vector3d;
using Matrix3c = Eigen::Matrix3cd;

// Photo-excited triplet described by its zero-field splitting and the
// sublevel populations produced by intersystem crossing.
//
// Internal units throughout: frequencies in MHz (energies stored as E/h),
// magnetic fields in mT, times in us.
struct SpinSystem {
  double d_mhz = 1395.57;              // zero-field splitting D, > 0
  double e_mhz = -53.35;               // zero-field splitting E, sign carried
  double gamma_e_mhz_per_mt = constants::gamma_e_mhz_per_mt_rounded;
  std::array<double, 3> zero_field_populations{0.76, 0.16, 0.08};  // (p_X, p_Y, p_Z)

  // Throws ValidationError when an invariant is violated.
  void validate() const;
};

// Spin-1 operator matrices in the Cartesian zero-field basis {T_X, T_Y, T_Z}:
// (S_k)_ij = -i eps_kij.
const Matrix3c& spin1_sx();
const Matrix3c& spin1_sy();
const Matrix3c& spin1_sz();

// Eigen-decomposition of a spin Hamiltonian, eigenvalues ascending (MHz),
// eigenvectors columns in the zero-field basis.
struct EnergyLevels {
  std::array<double, 3> eigenvalues_mhz{};
  Matrix3c eigenvectors;          // column k <-> eigenvalues_mhz[k]
  Vec3 field_vector_molecular;    // mT, the field the levels were computed at
};

struct Transition {
  int lower_index = 0;            // index into EnergyLevels (ascending energy)
  int upper_index = 0;
  double frequency_mhz = 0.0;
  double matrix_element_sq = 0.0;           // |<upper| S.b1 |lower>|^2
  double population_difference = 0.0;       // p_lower - p_upper; > 0 absorptive
};

using TransitionSet = std::vector<Transition>;

// H = D (Sz^2 - S^2/3) + E (Sx^2 - Sy^2) + (gamma_e/2pi) B0 . S, in MHz,
// for B0 given in the molecular frame in mT. Hermitian and traceless.
Matrix3c build_hamiltonian(const SpinSystem& system, const Vec3& b0_molecular_mt);

// Throws NonHermitianInput when the symmetry check fails (1e-10 relative).
EnergyLevels diagonalize(const Matrix3c& h_mhz);

// Convenience: Hamiltonian + diagonalization in one call.
EnergyLevels levels_at(const SpinSystem& system, const Vec3& b0_molecular_mt);

// Closed-form eigenvalues for B0 along the molecular X axis, returned as
// (E_+1, E_0, E_-1) in MHz with E_0 = D/3 - E field-independent.
struct CanonicalLevelsX {
  double e_plus1_mhz;
  double e_zero_mhz;
  double e_minus1_mhz;
};
CanonicalLevelsX canonical_levels_x(const SpinSystem& system, double b0_mag_mt);

// Sudden-projection populations of the field-dressed eigenstates:
// P_k = sum_i P_i |<k|T_i>|^2. Reduces to the canonical high-field rule
// P_0 = P_X, P_+-1 = (P_Y + P_Z)/2 when B0 lies along a molecular axis and
// the Zeeman energy dominates the zero-field splitting.
std::array<double, 3> high_field_populations(const SpinSystem& system,
                                             const EnergyLevels& levels);

// Magnetic-dipole transitions for a drive field along unit vector b1
// (molecular frame). All level pairs are reported, lower index first.
TransitionSet transitions(const EnergyLevels& levels,
                          const std::array<double, 3>& populations,
                          const Vec3& b1_direction_molecular);

}  // namespace masersim

#endif
