#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "masersim/metrics.hpp"

using namespace masersim;

namespace {
GainMedium preset_medium() {
  GainMedium m;
  m.delta_n_per_m3 = 3.3e20;
  m.sigma_sq = 0.5;
  m.eta = 0.027;
  m.t2_us = 4.24;
  return m;
}
}  // namespace

TEST_CASE("magnetic quality factor") {
  const GainMedium m = preset_medium();
  const double qm = magnetic_q(m, 28.0);
  CHECK(qm == doctest::Approx(1.3e4).epsilon(0.02));

  GainMedium m2 = m;
  m2.delta_n_per_m3 *= 2.0;
  CHECK(magnetic_q(m2, 28.0) == doctest::Approx(qm / 2.0).epsilon(1e-12));

  GainMedium m3 = m;
  m3.t2_us = 1e-9;
  CHECK(magnetic_q(m3, 28.0) > 1e10);  // no gain in the T2 -> 0 limit
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(1.3e4, 2.2e4, 2.2e4) == MaserRegime::amplifier);
  CHECK(classify_regime(2.2e4, 2.2e4, 1.0e5) == MaserRegime::subthreshold);  // tie
  CHECK(classify_regime(1e-6, 2.2e4, 2.2e4) == MaserRegime::oscillator);
  CHECK(classify_regime(1.1e4, 2.2e4, 2.2e4) == MaserRegime::oscillator);  // boundary
  CHECK(classify_regime(5.0e4, 2.2e4, 2.2e4) == MaserRegime::subthreshold);
}

TEST_CASE("calculated gain") {
  CHECK(calculated_gain_db(1.3e4, 2.2e4, 2.2e4) == doctest::Approx(14.8).epsilon(0.02));
  CHECK(std::abs(calculated_gain_db(1.3e4, 2.2e4, 2.2e4) - 14.8) < 0.2);

  // Qm = Q0 gives exactly 0 dB for any Qe
  for (double qe : {5.0e3, 2.2e4, 9.9e5})
    CHECK(calculated_gain_db(2.2e4, 2.2e4, qe) == doctest::Approx(0.0).epsilon(1e-12));

  // no inversion, critical coupling: perfect absorber
  CHECK(calculated_gain_db(1e17, 2.2e4, 2.2e4) < -100.0);

  CHECK_THROWS_AS(calculated_gain_db(1.1e4, 2.2e4, 2.2e4), AtOrAboveOscillation);
}

TEST_CASE("calculated bandwidth") {
  const double bw = calculated_bandwidth_mhz(1.3e4, 2.2e4, 2.2e4, 9.4056);
  CHECK(std::abs(bw - 0.13) < 0.05 * 0.13 + 1e-3);
  CHECK(bw == doctest::Approx(0.13155).epsilon(1e-3));

  // no gain limit: the loaded-cavity bandwidth
  CHECK(calculated_bandwidth_mhz(1e18, 2.2e4, 2.2e4, 9.4) ==
        doctest::Approx(0.8545).epsilon(1e-3));

  CHECK_THROWS_AS(calculated_bandwidth_mhz(1.1e4, 2.2e4, 2.2e4, 9.4056),
                  AtOrAboveOscillation);
}

TEST_CASE("spin temperature") {
  const double ts = spin_temperature_k(0.76, 0.12, 9.4056);
  CHECK(std::abs(ts - (-0.24)) < 0.01);
  CHECK(ts == doctest::Approx(-0.24455).epsilon(1e-3));

  SUBCASE("thermal populations round-trip") {
    for (double t : {1.0, 10.0, 290.0, 1000.0}) {
      const double x = constants::hbar * 2.0 * constants::pi * 9.4056e9 /
                       (constants::k_boltzmann * t);
      const double p_up = std::exp(-x);
      const double back = spin_temperature_k(p_up / (1 + p_up), 1.0 / (1 + p_up), 9.4056);
      CHECK(back == doctest::Approx(t).epsilon(1e-3));
    }
  }

  SUBCASE("swapping the populations flips the sign") {
    CHECK(spin_temperature_k(0.12, 0.76, 9.4056) ==
          doctest::Approx(-ts).epsilon(1e-12));
  }

  CHECK_THROWS_AS(spin_temperature_k(0.4, 0.4, 9.4056), InfiniteTemperature);
}

TEST_CASE("noise temperature and figure") {
  const NoiseResult room = noise_temperature(-0.24, 1.3e4, 2.2e4, 290.0);
  CHECK(std::abs(room.t_noise_k - 172.0) < 3.0);
  CHECK(std::abs(room.noise_figure_db - 2.02) < 0.05);

  const NoiseResult cold = noise_temperature(-0.24, 1.3e4, 2.2e4, 50.0);
  CHECK(std::abs(cold.t_noise_k - 30.0) < 1.0);
  CHECK(std::abs(cold.noise_figure_db - 0.43) < 0.03);

  const NoiseResult zero = noise_temperature(-0.24, 1.3e4, 2.2e4, 0.0);
  CHECK(zero.t_noise_k == doctest::Approx(0.24).epsilon(1e-12));

  // monotone in the bath temperature
  CHECK(noise_temperature(-0.24, 1.3e4, 2.2e4, 300.0).t_noise_k > room.t_noise_k);
}

TEST_CASE("resonator rise time") {
  CHECK(std::abs(rise_time_us(5.0e5, 9.4043139) - 17.0) < 0.5);
  CHECK(rise_time_us(5.0e5, 9.4043139) == doctest::Approx(16.9236).epsilon(1e-4));
  CHECK(rise_time_us(1.1e4, 9.4056) == doctest::Approx(0.37227).epsilon(1e-4));
  CHECK(rise_time_us(2.2e4, 9.4056) ==
        doctest::Approx(2.0 * rise_time_us(1.1e4, 9.4056)).epsilon(1e-12));
}

TEST_CASE("conversion factor from synthetic Rabi data") {
  // Omega1 = sqrt(2) gamma_e B1, with gamma_e = 2 pi 28e6 rad/(s mT)
  auto regenerate = [&](double lambda, double noise, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> n(0.0, noise);
    std::vector<double> omega1, power;
    for (double p = 0.001; p <= 0.5; p *= 1.7) {
      const double b1 = lambda * std::sqrt(p);  // mT
      omega1.push_back(std::sqrt(2.0) * 2.0 * constants::pi * 28.0e6 * b1 *
                       (1.0 + n(rng)));
      power.push_back(p);
    }
    return conversion_factor(omega1, power, 28.0);
  };

  SUBCASE("high-field value recovered") {
    const ConversionFactorFit fit = regenerate(0.70, 0.003, 17);
    CHECK(std::abs(fit.lambda_mt_per_sqrt_w - 0.70) < 0.02 * 0.70);
  }
  SUBCASE("low-field value recovered") {
    const ConversionFactorFit fit = regenerate(0.41, 0.003, 29);
    CHECK(std::abs(fit.lambda_mt_per_sqrt_w - 0.41) < 0.02 * 0.41);
  }
  SUBCASE("single point is exact") {
    const double lambda = 0.55;
    const double p = 0.02;
    const double omega1 = std::sqrt(2.0) * 2.0 * constants::pi * 28.0e6 * lambda *
                          std::sqrt(p);
    const ConversionFactorFit fit = conversion_factor({omega1}, {p}, 28.0);
    CHECK(fit.lambda_mt_per_sqrt_w == doctest::Approx(lambda).epsilon(1e-12));
  }
  SUBCASE("equal powers are degenerate") {
    CHECK_THROWS_AS(conversion_factor({1.0, 2.0}, {0.1, 0.1}, 28.0), DegenerateFit);
  }
}

TEST_CASE("filling factor") {
  CHECK(std::abs(filling_factor(6.0, 0.22) - 0.027) < 0.001);
  CHECK(filling_factor(7.7, 7.7e-3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(filling_factor(3.0, 0.22) ==
        doctest::Approx(0.5 * filling_factor(6.0, 0.22)).epsilon(1e-12));
}

TEST_CASE("coupling estimate from the mode volume") {
  const double g = coupling_from_mode_volume(0.22, 9.4056, 28.0);
  CHECK(std::abs(g - 0.69) < 0.15 * 0.69);
  CHECK(g == doctest::Approx(0.74223).epsilon(1e-4));
  CHECK(coupling_from_mode_volume(4.0 * 0.22, 9.4056, 28.0) ==
        doctest::Approx(g / 2.0).epsilon(1e-12));
  CHECK(coupling_from_mode_volume(0.22, 4.0 * 9.4056, 28.0) ==
        doctest::Approx(2.0 * g).epsilon(1e-12));
}

TEST_CASE("gain, bandwidth and regime are mutually consistent") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> logq(3.0, 6.0);
  for (int k = 0; k < 200; ++k) {
    const double qm = std::pow(10.0, logq(rng));
    const double q0 = std::pow(10.0, logq(rng));
    const double qe = std::pow(10.0, logq(rng));
    const MaserRegime regime = classify_regime(qm, q0, qe);
    bool gain_finite = true;
    try {
      (void)calculated_gain_db(qm, q0, qe);
      (void)calculated_bandwidth_mhz(qm, q0, qe, 9.4);
    } catch (const AtOrAboveOscillation&) {
      gain_finite = false;
    }
    CHECK(gain_finite == (regime != MaserRegime::oscillator));
  }
}

TEST_CASE("gain decreases monotonically in Qm inside the amplifier window") {
  double prev = 1e9;
  for (double qm = 1.15e4; qm < 2.2e4; qm += 500.0) {
    const double g = calculated_gain_db(qm, 2.2e4, 2.2e4);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("resonator parameter validation") {
  ResonatorParams ok;
  CHECK_NOTHROW(ok.validate());
  ResonatorParams bad;
  bad.q_loaded = 1.2e4;  // breaks 1/QL = 1/Q0 + 1/Qe
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  GainMedium gm;
  gm.sigma_sq = 0.0;
  CHECK_THROWS_AS(gm.validate(), ValidationError);
}
