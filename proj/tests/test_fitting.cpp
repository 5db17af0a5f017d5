#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "masersim/constants.hpp"
#include "masersim/dynamics.hpp"
#include "masersim/fitting.hpp"

using namespace masersim;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> add_noise(std::vector<double> y, double sigma, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  for (double& v : y) v += n(rng);
  return y;
}

double lorentz(double x, double a, double x0, double w, double c) {
  const double u = 2.0 * (x - x0) / w;
  return a / (1.0 + u * u) + c;
}

}  // namespace

TEST_CASE("line fit") {
  SUBCASE("two points interpolate exactly") {
    const FitResult r = fit_line({1.0, 3.0}, {2.0, 8.0});
    CHECK(r.parameter("slope") == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.parameter("intercept") == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.rss < 1e-20);
  }
  SUBCASE("noisy line recovered with sane errors") {
    const auto x = linspace(0, 10, 60);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 1.7 * x[i] - 0.4;
    const FitResult r = fit_line(x, add_noise(y, 0.05, 3));
    CHECK(r.parameter("slope") == doctest::Approx(1.7).epsilon(0.02));
    CHECK(r.parameter("intercept") == doctest::Approx(-0.4).epsilon(0.25));
    CHECK(r.std_error("slope") > 0);
  }
  SUBCASE("degenerate abscissas rejected") {
    CHECK_THROWS_AS(fit_line({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}), DegenerateFit);
  }
}

TEST_CASE("Gamma-line intercepts recover the decoherence times within 2%") {
  for (double t2 : {4.24, 8.5}) {
    const double eps = 0.013;
    std::vector<double> omega_over_2pi, gamma;
    std::mt19937 rng(7);
    // the Gamma values are themselves fit outputs, known to well under 1%
    std::normal_distribution<double> n(0.0, 0.0005);
    for (double f = 0.2; f <= 2.01; f += 0.15) {
      omega_over_2pi.push_back(f);
      gamma.push_back(1.0 / (2.0 * t2) + eps * f + n(rng));
    }
    const FitResult r = fit_line(omega_over_2pi, gamma);
    const double t2_fit = 1.0 / (2.0 * r.parameter("intercept"));
    CHECK(std::abs(t2_fit - t2) < 0.02 * t2);
    CHECK(r.parameter("slope") == doctest::Approx(eps).epsilon(0.1));
  }
}

TEST_CASE("damped oscillation fit") {
  const auto t = linspace(0, 12, 240);

  SUBCASE("noise-free data recovered exactly") {
    const double a = 1.3, g = 0.22, w = 2.0 * constants::pi * 0.8, ph = 0.6, c = 0.15;
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      y[i] = a * std::exp(-g * t[i]) * std::cos(w * t[i] + ph) + c;
    const FitResult r = fit_damped_oscillation(t, y);
    CHECK(r.rss < 1e-16);
    CHECK(r.parameter("amplitude") == doctest::Approx(a).epsilon(1e-6));
    CHECK(r.parameter("gamma") == doctest::Approx(g).epsilon(1e-6));
    CHECK(r.parameter("omega") == doctest::Approx(w).epsilon(1e-6));
    CHECK(r.parameter("phase") == doctest::Approx(ph).epsilon(1e-5));
    CHECK(r.parameter("offset") == doctest::Approx(c).epsilon(1e-6));
  }

  SUBCASE("SNR 20 data recovered within 3%") {
    const double a = 1.0, g = 0.2, w = 2.0 * constants::pi * 0.8, ph = -0.3, c = 0.0;
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      y[i] = a * std::exp(-g * t[i]) * std::cos(w * t[i] + ph) + c;
    const FitResult r = fit_damped_oscillation(t, add_noise(y, a / 20.0, 11));
    CHECK(std::abs(r.parameter("omega") - w) < 0.03 * w);
    CHECK(std::abs(r.parameter("gamma") - g) < 0.03 * g + 0.01);
    CHECK(std::abs(r.parameter("amplitude") - a) < 0.05 * a);
  }

  SUBCASE("pure cosine: damping estimate collapses to zero") {
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      y[i] = std::cos(2.0 * constants::pi * 0.5 * t[i]);
    const FitResult r = fit_damped_oscillation(t, y);
    CHECK(std::abs(r.parameter("gamma")) < 1e-3);
  }

  SUBCASE("constant signal rejected") {
    std::vector<double> y(t.size(), 0.7);
    CHECK_THROWS_AS(fit_damped_oscillation(t, y), InsufficientData);
  }

  SUBCASE("round trip with the Rabi forward model within 1%") {
    const double t2 = 8.5;
    const double eps = 0.1;
    const double omega1 = 2.0 * constants::pi * 1.0;  // 1 MHz in rad/us
    const double gamma_true = 1.0 / (2.0 * t2) + eps * 1.0;
    const auto tg = linspace(0, 10, 500);
    const auto y = rabi_transient(omega1, gamma_true, tg);
    const FitResult r = fit_damped_oscillation(tg, y);
    CHECK(std::abs(r.parameter("gamma") - gamma_true) < 0.01 * gamma_true);
    CHECK(std::abs(r.parameter("omega") - omega1) < 0.01 * omega1);
  }
}

TEST_CASE("Lorentzian fit") {
  const auto x = linspace(-2.0, 2.0, 161);

  SUBCASE("published gain bandwidth regenerated within 3%") {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = lorentz(x[i], 12.0, 0.0, 0.34, 0.0);
    const FitResult r = fit_lorentzian(x, add_noise(y, 0.05, 19));
    CHECK(std::abs(r.parameter("fwhm") - 0.34) < 0.03 * 0.34);
    CHECK(std::abs(r.parameter("center")) < 0.01);
  }

  SUBCASE("noise-free exact recovery") {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = lorentz(x[i], -3.0, 0.4, 0.8, 1.0);  // emissive dip
    const FitResult r = fit_lorentzian(x, y);
    CHECK(r.rss < 1e-18);
    CHECK(r.parameter("amplitude") == doctest::Approx(-3.0).epsilon(1e-7));
    CHECK(r.parameter("center") == doctest::Approx(0.4).epsilon(1e-7));
    CHECK(r.parameter("fwhm") == doctest::Approx(0.8).epsilon(1e-7));
  }

  SUBCASE("symmetric input centers on the symmetry point") {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = lorentz(x[i], 5.0, 0.0, 0.5, 0.2);
    const FitResult r = fit_lorentzian(x, y);
    CHECK(std::abs(r.parameter("center")) < (x[1] - x[0]));
  }

  SUBCASE("flat input rejected") {
    std::vector<double> y(x.size(), 2.0);
    CHECK_THROWS_AS(fit_lorentzian(x, y), NoConvergence);
  }
}

TEST_CASE("double Lorentzian fit") {
  const auto x = linspace(-60.0, -20.0, 161);

  SUBCASE("two components recovered within 3%") {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = lorentz(x[i], 7.5, -44.0, 6.0, 0.0) + lorentz(x[i], 6.5, -35.9, 4.0, 0.0);
    const FitResult r = fit_double_lorentzian(x, add_noise(y, 0.03, 5));
    CHECK(std::abs(r.parameter("center1") - (-44.0)) < 0.03 * 44.0);
    CHECK(std::abs(r.parameter("center2") - (-35.9)) < 0.03 * 35.9);
    CHECK(r.parameter("center1") < r.parameter("center2"));  // ordered
  }

  SUBCASE("noise-free exact recovery") {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = lorentz(x[i], 4.0, -50.0, 5.0, 0.5) + lorentz(x[i], 2.0, -30.0, 3.0, 0.0);
    const FitResult r = fit_double_lorentzian(x, y);
    CHECK(r.rss < 1e-14);
    CHECK(r.parameter("center1") == doctest::Approx(-50.0).epsilon(1e-5));
    CHECK(r.parameter("center2") == doctest::Approx(-30.0).epsilon(1e-5));
  }

  SUBCASE("single-peak data: second amplitude consistent with zero") {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = lorentz(x[i], 5.0, -40.0, 6.0, 0.1);
    const FitResult r = fit_double_lorentzian(x, y);
    const double a1 = std::abs(r.parameter("amplitude1"));
    const double a2 = std::abs(r.parameter("amplitude2"));
    const double a_small = std::min(a1, a2);
    const double se_small = a1 < a2 ? r.std_error("amplitude1") : r.std_error("amplitude2");
    CHECK((a_small < 2.0 * se_small || a_small < 1e-3 * std::max(a1, a2) ||
           r.degenerate_covariance));
  }

  SUBCASE("identical components flag a degenerate covariance") {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = 2.0 * lorentz(x[i], 3.0, -40.0, 5.0, 0.0);
    FitOptions opt;
    opt.restarts = 1;
    try {
      const FitResult r = fit_double_lorentzian(x, y, opt);
      const bool same_component =
          std::abs(r.parameter("center1") - r.parameter("center2")) < 0.5 &&
          std::abs(r.parameter("fwhm1") - r.parameter("fwhm2")) < 0.5;
      CHECK((r.degenerate_covariance || !same_component));
    } catch (const NoConvergence&) {
      // an unresolvable split is also an acceptable outcome for degenerate input
      CHECK(true);
    }
  }
}

TEST_CASE("piecewise linear fit") {
  SUBCASE("synthetic hinge: breakpoint within 0.05") {
    std::vector<double> x = linspace(0.0, 5.0, 60);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = x[i] <= 2.0 ? 0.3 : 0.3 + 5.0 * (x[i] - 2.0);
    const FitResult r = fit_piecewise_linear(x, add_noise(y, 0.05, 23));
    CHECK(std::abs(r.parameter("breakpoint") - 2.0) < 0.05);
    CHECK(std::abs(r.parameter("slope_left")) < 0.1);
    CHECK(r.parameter("slope_right") == doctest::Approx(5.0).epsilon(0.05));
  }

  SUBCASE("noise-free hinge is exact") {
    std::vector<double> x = linspace(0.0, 4.0, 41);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = x[i] <= 1.5 ? 1.0 - 0.5 * x[i] : 0.25 + 3.0 * (x[i] - 1.5);
    const FitResult r = fit_piecewise_linear(x, y);
    CHECK(r.parameter("breakpoint") == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(r.rss < 1e-12);
  }

  SUBCASE("a single straight line has no breakpoint") {
    std::vector<double> x = linspace(0.0, 5.0, 30);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 * x[i] + 1.0;
    CHECK_THROWS_AS(fit_piecewise_linear(x, y), NoBreakpoint);
  }

  SUBCASE("noisy line without a kink is also rejected") {
    std::vector<double> x = linspace(0.0, 5.0, 40);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 * x[i] + 1.0;
    CHECK_THROWS_AS(fit_piecewise_linear(x, add_noise(y, 0.05, 31)), NoBreakpoint);
  }
}

TEST_CASE("analytic Jacobians match central finite differences") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-6;

  auto check_jacobian = [&](auto&& model, const std::vector<double>& p, double x) {
    std::vector<double> jac(p.size()), tmp(p.size());
    double v;
    model(x, p, v, jac);
    for (std::size_t j = 0; j < p.size(); ++j) {
      std::vector<double> pp = p, pm = p;
      const double dp = h * std::max(1.0, std::abs(p[j]));
      pp[j] += dp;
      pm[j] -= dp;
      double vp, vm;
      model(x, pp, vp, tmp);
      model(x, pm, vm, tmp);
      const double fd = (vp - vm) / (2.0 * dp);
      CHECK(std::abs(jac[j] - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
    }
  };

  for (int k = 0; k < 20; ++k) {
    check_jacobian(detail::damped_cosine_model,
                   {1.0 + u(rng), 0.3 + 0.1 * u(rng), 3.0 + u(rng), u(rng), u(rng)},
                   2.0 + u(rng));
    check_jacobian(detail::lorentzian_model,
                   {2.0 + u(rng), u(rng), 1.0 + 0.3 * u(rng), u(rng)}, u(rng));
    check_jacobian(detail::double_lorentzian_model,
                   {2.0 + u(rng), -1.0 + 0.3 * u(rng), 1.0 + 0.2 * u(rng), 1.0 + u(rng),
                    1.0 + 0.3 * u(rng), 0.8 + 0.2 * u(rng), u(rng)},
                   0.5 * u(rng));
  }
}

TEST_CASE("fits are equivariant under affine x rescaling") {
  const auto x = linspace(-1.0, 3.0, 101);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = lorentz(x[i], 4.0, 1.2, 0.6, 0.3);

  const double a = 2.5, b = -7.0;
  std::vector<double> xs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xs[i] = a * x[i] + b;

  const FitResult r1 = fit_lorentzian(x, y);
  const FitResult r2 = fit_lorentzian(xs, y);
  CHECK(r2.parameter("center") ==
        doctest::Approx(a * r1.parameter("center") + b).epsilon(1e-6));
  CHECK(r2.parameter("fwhm") ==
        doctest::Approx(std::abs(a) * r1.parameter("fwhm")).epsilon(1e-6));
  CHECK(r2.parameter("amplitude") ==
        doctest::Approx(r1.parameter("amplitude")).epsilon(1e-6));
}

TEST_CASE("reported standard errors scale as 1/sqrt(n)") {
  const double a = 2.0, x0 = 0.0, w = 1.0, c = 0.1;
  auto mean_se = [&](int n_pts, unsigned seed_base) {
    double acc = 0;
    int count = 0;
    for (int rep = 0; rep < 100; ++rep) {
      const auto x = linspace(-4.0, 4.0, n_pts);
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = lorentz(x[i], a, x0, w, c);
      try {
        const FitResult r = fit_lorentzian(x, add_noise(y, 0.05, seed_base + rep));
        acc += r.std_error("center");
        ++count;
      } catch (const NoConvergence&) {
      }
    }
    REQUIRE(count > 90);
    return acc / count;
  };
  const double se_small = mean_se(50, 1000);
  const double se_large = mean_se(200, 5000);
  CHECK(se_small / se_large == doctest::Approx(2.0).epsilon(0.2));
}
