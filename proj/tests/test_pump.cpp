#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "masersim/pump.hpp"

using namespace masersim;

namespace {
PumpPulse preset_pulse() { return PumpPulse{}; }
OpticalMedium preset_medium() { return OpticalMedium{}; }
}  // namespace

TEST_CASE("zero fluence gives an identically zero profile") {
  PumpPulse p = preset_pulse();
  p.fluence_mj_per_cm2 = 0.0;
  const DepthProfile prof = depth_profile(p, preset_medium());
  for (double d : prof.triplet_density_per_m3) CHECK(d == 0.0);
  CHECK(prof.n_total == 0.0);
}

TEST_CASE("weak-pump limit reduces to Beer-Lambert over the first absorption length") {
  PumpPulse p = preset_pulse();
  p.fluence_mj_per_cm2 = 1e-6;
  const OpticalMedium m = preset_medium();
  const DepthProfile prof = depth_profile(p, m, 0.88, 400);
  const double alpha_mm = m.absorption_per_mm;
  const double n0 = prof.triplet_density_per_m3.front();
  for (std::size_t i = 0; i < prof.depth_mm.size(); ++i) {
    if (prof.depth_mm[i] > 1.0 / alpha_mm) break;
    const double expected = n0 * std::exp(-alpha_mm * prof.depth_mm[i]);
    CHECK(std::abs(prof.triplet_density_per_m3[i] - expected) < 0.01 * expected);
  }
}

TEST_CASE("preset pump conditions reproduce the calibrated total yield") {
  const DepthProfile prof = depth_profile(preset_pulse(), preset_medium());
  CHECK(prof.n_total == doctest::Approx(2.1e14).epsilon(0.005));
}

TEST_CASE("profile is monotonically non-increasing with depth") {
  const DepthProfile prof = depth_profile(preset_pulse(), preset_medium());
  for (std::size_t i = 1; i < prof.triplet_density_per_m3.size(); ++i)
    CHECK(prof.triplet_density_per_m3[i] <= prof.triplet_density_per_m3[i - 1] + 1e-18);
}

TEST_CASE("total yield grows monotonically with fluence and saturates") {
  std::vector<double> totals;
  for (double f = 10.0; f <= 2000.0; f *= 1.6) {
    PumpPulse p = preset_pulse();
    p.fluence_mj_per_cm2 = f;
    totals.push_back(depth_profile(p, preset_medium()).n_total);
  }
  for (std::size_t i = 1; i < totals.size(); ++i) CHECK(totals[i] >= totals[i - 1]);
  // concavity in log-spaced fluence: growth ratios shrink
  for (std::size_t i = 2; i < totals.size(); ++i)
    CHECK(totals[i] / totals[i - 1] <= totals[i - 1] / totals[i - 2] + 1e-9);
}

TEST_CASE("profile integral equals the stored total exactly") {
  const PumpPulse p = preset_pulse();
  const OpticalMedium m = preset_medium();
  const DepthProfile prof = depth_profile(p, m);
  double integral = 0;
  for (std::size_t i = 1; i < prof.depth_mm.size(); ++i)
    integral += 0.5e-3 * (prof.depth_mm[i] - prof.depth_mm[i - 1]) *
                (prof.triplet_density_per_m3[i] + prof.triplet_density_per_m3[i - 1]);
  integral *= p.illuminated_area_cm2 * 1e-4;
  CHECK(integral == doctest::Approx(prof.n_total).epsilon(1e-12));
}

TEST_CASE("polarization and inverted spin number") {
  CHECK(two_level_polarization(0.76, 0.12) == doctest::Approx(0.727273).epsilon(1e-5));
  CHECK(inverted_spins(2.1e14, 0.73) == doctest::Approx(1.533e14).epsilon(1e-12));
  CHECK(inverted_spins(2.1e14, 0.73) / 1.5e14 == doctest::Approx(1.0).epsilon(0.03));
  CHECK(inverted_spins(2.1e14, 0.0) == 0.0);
  CHECK_THROWS_AS(inverted_spins(1.0, 1.5), ValidationError);
}

TEST_CASE("linewidth-ratio calibration") {
  SUBCASE("preset numbers") {
    const LinewidthCalibration cal = linewidth_calibration(1.5e14, 0.85, 64.73);
    CHECK(cal.ratio == doctest::Approx(1.31e-2).epsilon(0.01));
    CHECK(cal.delta_n_prime == doctest::Approx(2.0e12).epsilon(0.02));
    CHECK(!cal.ratio_above_unity);
  }
  SUBCASE("equal linewidths pass delta N through") {
    const LinewidthCalibration cal = linewidth_calibration(3.0e13, 5.0, 5.0);
    CHECK(cal.ratio == 1.0);
    CHECK(cal.delta_n_prime == 3.0e13);
  }
  SUBCASE("zero inversion stays zero") {
    CHECK(linewidth_calibration(0.0, 0.85, 64.73).delta_n_prime == 0.0);
  }
  SUBCASE("R above unity is flagged") {
    CHECK(linewidth_calibration(1.0, 10.0, 5.0).ratio_above_unity);
  }
  SUBCASE("calibration never increases the count") {
    for (double c : {0.1, 0.9, 5.0}) {
      const LinewidthCalibration cal = linewidth_calibration(1e12, c, 5.0);
      if (cal.ratio <= 1.0) CHECK(cal.delta_n_prime <= 1e12);
    }
  }
}

TEST_CASE("inverted density") {
  CHECK(inverted_density(2.0e12, 6.0) == doctest::Approx(3.3333e20).epsilon(1e-4));
  CHECK(inverted_density(2.0e12, 6.0) / 3.3e20 == doctest::Approx(1.0).epsilon(0.02));
  CHECK(inverted_density(0.0, 6.0) == 0.0);
  CHECK(inverted_density(2.0e12, 12.0) == doctest::Approx(1.6667e20).epsilon(1e-4));
  CHECK_THROWS_AS(inverted_density(1.0, 0.0), ValidationError);
}

TEST_CASE("pump validation") {
  PumpPulse bad = preset_pulse();
  bad.duration_ns = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  OpticalMedium badm = preset_medium();
  badm.isc_triplet_yield = 1.5;
  CHECK_THROWS_AS(badm.validate(), ValidationError);
}
