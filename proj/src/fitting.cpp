// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#include "masersim/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <random>

#include "masersim/constants.hpp"

namespace masersim {

double FitResult::parameter(const std::string& name) const {
  for (std::size_t i = 0; i < parameter_names.size(); ++i)
    if (parameter_names[i] == name) return parameters[i];
  throw ValidationError("FitResult: unknown parameter " + name);
}

double FitResult::std_error(const std::string& name) const {
  for (std::size_t i = 0; i < parameter_names.size(); ++i)
    if (parameter_names[i] == name) return std_errors[i];
  throw ValidationError("FitResult: unknown std error " + name);
}

namespace {

using ModelFn = std::function<void(double, const std::vector<double>&, double&,
                                   std::vector<double>&)>;

double rss_of(const std::vector<double>& x, const std::vector<double>& y,
              const ModelFn& model, const std::vector<double>& p) {
  double rss = 0.0;
  std::vector<double> jac(p.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v;
    model(x[i], p, v, jac);
    rss += (y[i] - v) * (y[i] - v);
  }
  return rss;
}

// Damped Gauss-Newton (Levenberg-Marquardt) with analytic Jacobians.
FitResult lm_minimize(const std::vector<double>& x, const std::vector<double>& y,
                      const ModelFn& model, std::vector<double> p,
                      const FitOptions& opt) {
  const std::size_t n = x.size();
  const std::size_t np = p.size();
  Eigen::MatrixXd jac(n, np);
  Eigen::VectorXd resid(n);
  std::vector<double> row(np);

  double y_scale = 0.0;
  for (double v : y) y_scale = std::max(y_scale, std::abs(v));
  const double rss_floor = 1e-28 * std::max(1.0, y_scale * y_scale) * n;

  auto evaluate = [&](const std::vector<double>& params) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double v;
      model(x[i], params, v, row);
      resid(i) = y[i] - v;
      for (std::size_t j = 0; j < np; ++j) jac(i, j) = row[j];
      rss += resid(i) * resid(i);
    }
    return rss;
  };

  double rss = evaluate(p);
  double lambda = 1e-3;
  int iter = 0;
  bool converged = rss <= rss_floor;

  while (!converged && iter < opt.max_iterations) {
    ++iter;
    Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::VectorXd jtr = jac.transpose() * resid;
    Eigen::MatrixXd damped = jtj;
    for (std::size_t j = 0; j < np; ++j)
      damped(j, j) += lambda * std::max(jtj(j, j), 1e-30);

    Eigen::VectorXd step = damped.ldlt().solve(jtr);
    std::vector<double> trial = p;
    for (std::size_t j = 0; j < np; ++j) trial[j] += step(j);

    const double trial_rss = rss_of(x, y, model, trial);
    if (std::isfinite(trial_rss) && trial_rss < rss) {
      const double rel_drop = (rss - trial_rss) / std::max(rss, 1e-300);
      p = trial;
      rss = evaluate(p);
      lambda = std::max(lambda / 3.0, 1e-12);
      if (rel_drop < opt.rss_rel_change_tol || rss <= rss_floor) converged = true;
    } else {
      lambda *= 4.0;
      if (lambda > 1e12) break;  // stuck; count as non-converged
    }
  }

  FitResult out;
  out.parameters = p;
  out.rss = rss;
  out.iterations = iter;
  out.converged = converged;
  out.std_errors.assign(np, 0.0);

  if (converged) {
    evaluate(p);
    Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jtj);
    const double lmax = es.eigenvalues().maxCoeff();
    const double cutoff = std::max(lmax, 1e-300) * 1e-14;
    out.degenerate_covariance = es.eigenvalues().minCoeff() <= cutoff;
    const double dof = n > np ? static_cast<double>(n - np) : 1.0;
    const double sigma_sq = rss / dof;
    for (std::size_t j = 0; j < np; ++j) {
      double cjj = 0.0;
      for (std::size_t k = 0; k < np; ++k) {
        const double lam = std::max(es.eigenvalues()(static_cast<int>(k)), cutoff);
        const double q = es.eigenvectors()(static_cast<int>(j), static_cast<int>(k));
        cjj += q * q / lam;
      }
      out.std_errors[j] = std::sqrt(sigma_sq * cjj);
    }
  }
  return out;
}

FitResult multi_start(const std::vector<double>& x, const std::vector<double>& y,
                      const ModelFn& model, const std::vector<double>& p0,
                      const std::vector<std::string>& names, const FitOptions& opt) {
  std::mt19937 rng(opt.rng_seed);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);

  FitResult best;
  bool have = false;
  for (int s = 0; s < std::max(1, opt.restarts); ++s) {
    std::vector<double> p = p0;
    if (s > 0)
      for (double& v : p) v *= 1.0 + jitter(rng);
    FitResult r = lm_minimize(x, y, model, p, opt);
    if (!have || (r.converged && (!best.converged || r.rss < best.rss))) {
      best = r;
      have = true;
    }
    if (best.converged && best.rss <= 1e-24 * x.size()) break;
  }
  best.parameter_names = names;
  if (!best.converged)
    throw NoConvergence("fit did not converge within " +
                        std::to_string(opt.max_iterations) + " iterations");
  return best;
}

}  // namespace

namespace detail {

void damped_cosine_model(double t, const std::vector<double>& p, double& value,
                         std::vector<double>& jac) {
  const double a = p[0], gamma = p[1], omega = p[2], phi = p[3], c = p[4];
  const double env = std::exp(-gamma * t);
  const double arg = omega * t + phi;
  const double cs = std::cos(arg), sn = std::sin(arg);
  value = a * env * cs + c;
  jac[0] = env * cs;
  jac[1] = -t * a * env * cs;
  jac[2] = -a * t * env * sn;
  jac[3] = -a * env * sn;
  jac[4] = 1.0;
}

void lorentzian_model(double x, const std::vector<double>& p, double& value,
                      std::vector<double>& jac) {
  const double a = p[0], x0 = p[1], w = p[2], c = p[3];
  const double u = 2.0 * (x - x0) / w;
  const double den = 1.0 + u * u;
  value = a / den + c;
  jac[0] = 1.0 / den;
  jac[1] = a * 4.0 * u / (w * den * den);
  jac[2] = a * 2.0 * u * u / (w * den * den);
  jac[3] = 1.0;
}

void double_lorentzian_model(double x, const std::vector<double>& p, double& value,
                             std::vector<double>& jac) {
  std::vector<double> j1(4), j2(4);
  double v1, v2;
  lorentzian_model(x, {p[0], p[1], p[2], 0.0}, v1, j1);
  lorentzian_model(x, {p[3], p[4], p[5], 0.0}, v2, j2);
  value = v1 + v2 + p[6];
  jac[0] = j1[0];
  jac[1] = j1[1];
  jac[2] = j1[2];
  jac[3] = j2[0];
  jac[4] = j2[1];
  jac[5] = j2[2];
  jac[6] = 1.0;
}

}  // namespace detail

FitResult fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DegenerateFit("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0) throw DegenerateFit("fit_line: all abscissas equal");

  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - intercept - slope * x[i];
    rss += r * r;
  }
  const double sigma_sq = x.size() > 2 ? rss / (n - 2.0) : 0.0;

  FitResult out;
  out.parameter_names = {"slope", "intercept"};
  out.parameters = {slope, intercept};
  out.std_errors = {std::sqrt(sigma_sq / sxx),
                    std::sqrt(sigma_sq * (1.0 / n + mx * mx / sxx))};
  out.rss = rss;
  out.converged = true;
  out.iterations = 0;
  return out;
}

FitResult fit_damped_oscillation(const std::vector<double>& t,
                                 const std::vector<double>& y, const FitOptions& opt) {
  if (t.size() != y.size() || t.size() < 8)
    throw InsufficientData("fit_damped_oscillation: need at least 8 samples");
  const std::size_t n = t.size();
  const double span = t.back() - t.front();
  if (!(span > 0)) throw InsufficientData("fit_damped_oscillation: zero time span");

  double mean = 0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  double var = 0, scale = 0;
  for (double v : y) {
    var += (v - mean) * (v - mean);
    scale = std::max(scale, std::abs(v));
  }
  var /= static_cast<double>(n);
  if (var <= 1e-24 * std::max(1.0, scale * scale))
    throw InsufficientData("fit_damped_oscillation: no spectral peak in constant signal");

  // Dominant discrete-spectrum peak over [1/span, Nyquist].
  double dt_min = span;
  for (std::size_t i = 1; i < n; ++i) dt_min = std::min(dt_min, t[i] - t[i - 1]);
  const double w_lo = 2.0 * constants::pi / span;
  const double w_hi = constants::pi / std::max(dt_min, 1e-12);
  const int n_freq = 512;
  double best_w = w_lo, best_p = -1.0;
  std::complex<double> best_z;
  for (int k = 0; k < n_freq; ++k) {
    const double w = w_lo + (w_hi - w_lo) * k / (n_freq - 1);
    std::complex<double> z{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i)
      z += (y[i] - mean) * std::exp(std::complex<double>(0.0, -w * t[i]));
    if (std::norm(z) > best_p) {
      best_p = std::norm(z);
      best_w = w;
      best_z = z;
    }
  }
  if (span * best_w < 2.0 * constants::pi * 0.99)
    throw InsufficientData("fit_damped_oscillation: under one oscillation period");

  std::vector<double> p0 = {2.0 * std::abs(best_z) / static_cast<double>(n),
                            0.5 / span, best_w, -std::arg(best_z), mean};
  FitResult out = multi_start(
      t, y,
      [](double xx, const std::vector<double>& p, double& v, std::vector<double>& j) {
        detail::damped_cosine_model(xx, p, v, j);
      },
      p0, {"amplitude", "gamma", "omega", "phase", "offset"}, opt);

  // Canonical form: positive amplitude and frequency, phase in (-pi, pi].
  double& a = out.parameters[0];
  double& w = out.parameters[2];
  double& phi = out.parameters[3];
  if (w < 0) {
    w = -w;
    phi = -phi;
  }
  if (a < 0) {
    a = -a;
    phi += constants::pi;
  }
  phi = std::remainder(phi, 2.0 * constants::pi);
  return out;
}

FitResult fit_lorentzian(const std::vector<double>& x, const std::vector<double>& y,
                         const FitOptions& opt) {
  if (x.size() != y.size() || x.size() < 5)
    throw InsufficientData("fit_lorentzian: need at least 5 samples");

  std::vector<double> sorted_y = y;
  std::nth_element(sorted_y.begin(), sorted_y.begin() + sorted_y.size() / 2,
                   sorted_y.end());
  const double c0 = sorted_y[sorted_y.size() / 2];

  std::size_t ipk = 0;
  double apk = 0.0, yscale = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    yscale = std::max(yscale, std::abs(y[i]));
    if (std::abs(y[i] - c0) > std::abs(apk)) {
      apk = y[i] - c0;
      ipk = i;
    }
  }
  if (std::abs(apk) <= 1e-12 * std::max(1.0, yscale))
    throw NoConvergence("fit_lorentzian: flat input");

  const double xmin = *std::min_element(x.begin(), x.end());
  const double xmax = *std::max_element(x.begin(), x.end());
  double w0 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (std::abs(y[i] - c0) >= 0.5 * std::abs(apk)) w0 += 1.0;
  w0 = std::max(w0 / static_cast<double>(y.size()) * (xmax - xmin), (xmax - xmin) / 50.0);

  std::vector<double> p0 = {apk, x[ipk], w0, c0};
  return multi_start(
      x, y,
      [](double xx, const std::vector<double>& p, double& v, std::vector<double>& j) {
        detail::lorentzian_model(xx, p, v, j);
      },
      p0, {"amplitude", "center", "fwhm", "offset"}, opt);
}

FitResult fit_double_lorentzian(const std::vector<double>& x,
                                const std::vector<double>& y, const FitOptions& opt) {
  if (x.size() != y.size() || x.size() < 9)
    throw InsufficientData("fit_double_lorentzian: need at least 9 samples");

  std::vector<std::size_t> order(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  std::vector<double> sorted_y = y;
  std::nth_element(sorted_y.begin(), sorted_y.begin() + sorted_y.size() / 2,
                   sorted_y.end());
  const double c0 = sorted_y[sorted_y.size() / 2];

  std::size_t ipk = 0;
  double apk = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (std::abs(y[i] - c0) > std::abs(apk)) {
      apk = y[i] - c0;
      ipk = i;
    }
  if (std::abs(apk) <= 0)
    throw NoConvergence("fit_double_lorentzian: flat input");

  // Second component: strongest interior local extremum away from the first
  // peak, falling back to an off-peak low-amplitude guess.
  const double xmin = *std::min_element(x.begin(), x.end());
  const double xmax = *std::max_element(x.begin(), x.end());
  const double span = xmax - xmin;
  double a2 = apk / 3.0, x2 = x[ipk] + span / 4.0;
  double best2 = 0.0;
  for (std::size_t k = 1; k + 1 < order.size(); ++k) {
    const std::size_t i = order[k];
    const double v = y[i] - c0;
    const bool local_max = std::abs(v) >= std::abs(y[order[k - 1]] - c0) &&
                           std::abs(v) >= std::abs(y[order[k + 1]] - c0);
    if (local_max && std::abs(x[i] - x[ipk]) > span / 10.0 && std::abs(v) > best2) {
      best2 = std::abs(v);
      a2 = v;
      x2 = x[i];
    }
  }
  if (x2 > xmax) x2 = x[ipk] - span / 4.0;

  const double w0 = span / 8.0;
  std::vector<double> p0 = {apk, x[ipk], w0, a2, x2, w0, c0};
  FitResult out = multi_start(
      x, y,
      [](double xx, const std::vector<double>& p, double& v, std::vector<double>& j) {
        detail::double_lorentzian_model(xx, p, v, j);
      },
      p0,
      {"amplitude1", "center1", "fwhm1", "amplitude2", "center2", "fwhm2", "offset"},
      opt);

  if (out.parameters[4] < out.parameters[1]) {
    std::swap(out.parameters[0], out.parameters[3]);
    std::swap(out.parameters[1], out.parameters[4]);
    std::swap(out.parameters[2], out.parameters[5]);
    std::swap(out.std_errors[0], out.std_errors[3]);
    std::swap(out.std_errors[1], out.std_errors[4]);
    std::swap(out.std_errors[2], out.std_errors[5]);
  }
  return out;
}

namespace {

struct HingeFit {
  double rss = std::numeric_limits<double>::infinity();
  double y_break = 0, slope_left = 0, slope_right = 0;
  Eigen::Matrix3d jtj_inv = Eigen::Matrix3d::Zero();
  bool ok = false;
};

HingeFit solve_hinge(const std::vector<double>& x, const std::vector<double>& y,
                     double xb) {
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atb = Eigen::Vector3d::Zero();
  int n_left = 0, n_right = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dl = std::min(x[i] - xb, 0.0);
    const double dr = std::max(x[i] - xb, 0.0);
    (x[i] <= xb ? n_left : n_right) += 1;
    const Eigen::Vector3d row(1.0, dl, dr);
    ata += row * row.transpose();
    atb += row * y[i];
  }
  HingeFit fit;
  if (n_left < 2 || n_right < 2) return fit;
  const Eigen::Vector3d sol = ata.ldlt().solve(atb);
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dl = std::min(x[i] - xb, 0.0);
    const double dr = std::max(x[i] - xb, 0.0);
    const double r = y[i] - (sol(0) + sol(1) * dl + sol(2) * dr);
    rss += r * r;
  }
  fit.rss = rss;
  fit.y_break = sol(0);
  fit.slope_left = sol(1);
  fit.slope_right = sol(2);
  fit.jtj_inv = ata.inverse();
  fit.ok = true;
  return fit;
}

}  // namespace

FitResult fit_piecewise_linear(const std::vector<double>& x,
                               const std::vector<double>& y, const FitOptions& opt) {
  if (x.size() != y.size() || x.size() < 6)
    throw InsufficientData("fit_piecewise_linear: need at least 6 samples");

  std::vector<std::size_t> order(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> xs(x.size()), ys(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xs[i] = x[order[i]];
    ys[i] = y[order[i]];
  }

  const double lo = xs[1], hi = xs[xs.size() - 2];
  if (!(hi > lo))
    throw InsufficientData("fit_piecewise_linear: no interior breakpoint candidates");

  const int n_grid = 512;
  double best_xb = lo;
  HingeFit best;
  for (int k = 0; k <= n_grid; ++k) {
    const double xb = lo + (hi - lo) * k / n_grid;
    HingeFit fit = solve_hinge(xs, ys, xb);
    if (fit.ok && fit.rss < best.rss) {
      best = fit;
      best_xb = xb;
    }
  }
  if (!best.ok) throw InsufficientData("fit_piecewise_linear: segments too short");

  // Parabolic refinement of the breakpoint on a shrinking bracket.
  double step = (hi - lo) / n_grid;
  for (int pass = 0; pass < 30; ++pass) {
    bool moved = false;
    for (double cand : {best_xb - 0.5 * step, best_xb + 0.5 * step}) {
      if (cand <= lo || cand >= hi) continue;
      HingeFit fit = solve_hinge(xs, ys, cand);
      if (fit.ok && fit.rss < best.rss) {
        best = fit;
        best_xb = cand;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
    if (step < 1e-12 * (hi - lo)) break;
  }

  // Against the one-line null model.
  const FitResult line = fit_line(xs, ys);
  const double n = static_cast<double>(xs.size());
  double yscale = 0;
  for (double v : ys) yscale = std::max(yscale, std::abs(v));
  const double tiny = 1e-24 * std::max(1.0, yscale * yscale) * n;
  if (line.rss <= tiny)
    throw NoBreakpoint("fit_piecewise_linear: data already fits one line");
  const double f_ratio =
      ((line.rss - best.rss) / 2.0) / std::max(best.rss / std::max(n - 4.0, 1.0), tiny);
  if (f_ratio < opt.f_ratio_threshold)
    throw NoBreakpoint("fit_piecewise_linear: two segments do not beat one line");

  const double sigma_sq = best.rss / std::max(n - 4.0, 1.0);

  // Breakpoint uncertainty from the curvature of RSS(xb).
  const double h = std::max((hi - lo) * 1e-3, 1e-12);
  double se_xb = 0.0;
  const HingeFit fm = solve_hinge(xs, ys, best_xb - h);
  const HingeFit fp = solve_hinge(xs, ys, best_xb + h);
  if (fm.ok && fp.ok) {
    const double curv = (fm.rss - 2.0 * best.rss + fp.rss) / (h * h);
    if (curv > 0) se_xb = std::sqrt(2.0 * sigma_sq / curv);
  }

  FitResult out;
  out.parameter_names = {"breakpoint", "slope_left", "slope_right", "y_at_breakpoint"};
  out.parameters = {best_xb, best.slope_left, best.slope_right, best.y_break};
  out.std_errors = {se_xb, std::sqrt(sigma_sq * best.jtj_inv(1, 1)),
                    std::sqrt(sigma_sq * best.jtj_inv(2, 2)),
                    std::sqrt(sigma_sq * best.jtj_inv(0, 0))};
  out.rss = best.rss;
  out.converged = true;
  return out;
}

}  // namespace masersim
