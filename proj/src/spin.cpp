// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#include "masersim/spin.hpp"

#include <cmath>

namespace masersim {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

Matrix3c make_sx() {
  Matrix3c m = Matrix3c::Zero();
  m(1, 2) = -kI;
  m(2, 1) = kI;
  return m;
}
Matrix3c make_sy() {
  Matrix3c m = Matrix3c::Zero();
  m(2, 0) = -kI;
  m(0, 2) = kI;
  return m;
}
Matrix3c make_sz() {
  Matrix3c m = Matrix3c::Zero();
  m(0, 1) = -kI;
  m(1, 0) = kI;
  return m;
}
}  // namespace

const Matrix3c& spin1_sx() {
  static const Matrix3c m = make_sx();
  return m;
}
const Matrix3c& spin1_sy() {
  static const Matrix3c m = make_sy();
  return m;
}
const Matrix3c& spin1_sz() {
  static const Matrix3c m = make_sz();
  return m;
}

void SpinSystem::validate() const {
  if (!(d_mhz > 0)) throw ValidationError("spin: D must be positive");
  if (!(gamma_e_mhz_per_mt > 0))
    throw ValidationError("spin: gyromagnetic ratio must be positive");
  double sum = 0;
  for (double p : zero_field_populations) {
    if (p < 0.0 || p > 1.0)
      throw ValidationError("spin: populations must lie in [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ValidationError("spin: zero-field populations must sum to 1");
}

Matrix3c build_hamiltonian(const SpinSystem& system, const Vec3& b0_molecular_mt) {
  if (!b0_molecular_mt.allFinite())
    throw ValidationError("build_hamiltonian: field vector must be finite");
  const Matrix3c& sx = spin1_sx();
  const Matrix3c& sy = spin1_sy();
  const Matrix3c& sz = spin1_sz();
  const double g = system.gamma_e_mhz_per_mt;
  Matrix3c h = system.d_mhz * (sz * sz - (2.0 / 3.0) * Matrix3c::Identity()) +
               system.e_mhz * (sx * sx - sy * sy) +
               g * (b0_molecular_mt.x() * sx + b0_molecular_mt.y() * sy +
                    b0_molecular_mt.z() * sz);
  return h;
}

EnergyLevels diagonalize(const Matrix3c& h_mhz) {
  const double scale = h_mhz.norm();
  const double asym = (h_mhz - h_mhz.adjoint()).norm();
  if (scale > 0 && asym > 1e-10 * scale)
    throw NonHermitianInput("diagonalize: matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Matrix3c> solver(h_mhz);
  EnergyLevels out;
  Eigen::Vector3d ev = solver.eigenvalues();
  Matrix3c vec = solver.eigenvectors();

  // Ascending order is what SelfAdjointEigenSolver produces; keep the
  // labeling stable near degeneracies by ordering ties by descending |<T_X|v>|.
  std::array<int, 3> order{0, 1, 2};
  for (int i = 0; i < 2; ++i) {
    if (std::abs(ev(order[i]) - ev(order[i + 1])) < 1e-9 * std::max(1.0, scale) &&
        std::abs(vec(0, order[i])) < std::abs(vec(0, order[i + 1]))) {
      std::swap(order[i], order[i + 1]);
    }
  }
  for (int k = 0; k < 3; ++k) {
    out.eigenvalues_mhz[k] = ev(order[k]);
    Eigen::Vector3cd v = vec.col(order[k]);
    // Deterministic global phase: largest component real and positive.
    int imax = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
    if (std::abs(v(imax)) > 0) v *= std::conj(v(imax)) / std::abs(v(imax));
    out.eigenvectors.col(k) = v;
  }
  return out;
}

EnergyLevels levels_at(const SpinSystem& system, const Vec3& b0_molecular_mt) {
  EnergyLevels lv = diagonalize(build_hamiltonian(system, b0_molecular_mt));
  lv.field_vector_molecular = b0_molecular_mt;
  return lv;
}

CanonicalLevelsX canonical_levels_x(const SpinSystem& system, double b0_mag_mt) {
  if (b0_mag_mt < 0)
    throw ValidationError("canonical_levels_x: field magnitude must be >= 0");
  const double d = system.d_mhz;
  const double e = system.e_mhz;
  const double zeeman = system.gamma_e_mhz_per_mt * b0_mag_mt;
  const double mean = -0.5 * (d / 3.0 - e);
  const double half_gap = std::sqrt(0.25 * (d + e) * (d + e) + zeeman * zeeman);
  return CanonicalLevelsX{mean + half_gap, d / 3.0 - e, mean - half_gap};
}

std::array<double, 3> high_field_populations(const SpinSystem& system,
                                             const EnergyLevels& levels) {
  std::array<double, 3> pops{};
  for (int k = 0; k < 3; ++k) {
    double p = 0.0;
    for (int i = 0; i < 3; ++i)
      p += system.zero_field_populations[i] * std::norm(levels.eigenvectors(i, k));
    pops[k] = p;
  }
  return pops;
}

TransitionSet transitions(const EnergyLevels& levels,
                          const std::array<double, 3>& populations,
                          const Vec3& b1_direction_molecular) {
  if (std::abs(b1_direction_molecular.norm() - 1.0) > 1e-9)
    throw ValidationError("transitions: b1 direction must be unit length");
  const Matrix3c op = b1_direction_molecular.x() * spin1_sx() +
                      b1_direction_molecular.y() * spin1_sy() +
                      b1_direction_molecular.z() * spin1_sz();
  TransitionSet set;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const std::complex<double> me =
          levels.eigenvectors.col(j).adjoint() * op * levels.eigenvectors.col(i);
      Transition tr;
      tr.lower_index = i;
      tr.upper_index = j;
      tr.frequency_mhz = levels.eigenvalues_mhz[j] - levels.eigenvalues_mhz[i];
      tr.matrix_element_sq = std::norm(me);
      tr.population_difference = populations[i] - populations[j];
      set.push_back(tr);
    }
  }
  return set;
}

}  // namespace masersim
