#include <algorithm>
#include <cmath>

#include "gpl/cli.hpp"
#include "gpl/error.hpp"

namespace gpl {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ss_res = 0.0;
  double ss_tot = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.ss_res += r * r;
  }
  f.ss_tot = syy;
  return f;
}

}  // namespace

DecayFit fit_decay(const EnergySeries& series, double t_start, double t_end) {
  if (series.rows.empty()) throw Error(Errc::EmptyWindow, "energy series is empty");
  const double floor = 1e-300 * series.rows.front().total;
  std::vector<double> t, y;
  for (const auto& r : series.rows) {
    if (r.t < t_start || r.t > t_end) continue;
    if (r.total < 0.0) throw Error(Errc::NonPositiveEnergy, "negative energy at t = " + std::to_string(r.t));
    if (r.total <= floor || r.total == 0.0) continue;
    t.push_back(r.t);
    y.push_back(std::log(r.total));
  }
  if (t.size() < 2) throw Error(Errc::EmptyWindow, "fewer than 2 usable rows in the fit window");

  DecayFit fit;
  fit.rows = t.size();
  const LineFit line = fit_line(t, y);
  fit.omega_hat = -line.slope;
  fit.sigma_hat = std::exp(line.intercept);
  // Relative cutoff: a flat series leaves only rounding in ss_tot.
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  if (line.ss_tot > 1e-24 * std::max(1.0, scale * scale) * static_cast<double>(t.size())) {
    fit.r2_defined = true;
    fit.r2 = std::clamp(1.0 - line.ss_res / line.ss_tot, 0.0, 1.0);
  } else {
    fit.omega_hat = 0.0;
  }

  const double width = (t_end - t_start) / 4.0;
  std::vector<double> rates;
  for (int w = 0; w < 4; ++w) {
    const double lo = t_start + w * width;
    const double hi = (w == 3) ? t_end : lo + width;
    std::vector<double> tw, yw;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] >= lo && (t[i] < hi || (w == 3 && t[i] <= hi))) {
        tw.push_back(t[i]);
        yw.push_back(y[i]);
      }
    }
    if (tw.size() < 2) {
      rates.clear();
      break;
    }
    rates.push_back(-fit_line(tw, yw).slope);
  }
  fit.window_rates = std::move(rates);
  return fit;
}

std::string_view to_string(DecayClass c) noexcept {
  switch (c) {
    case DecayClass::Exponential: return "Exponential";
    case DecayClass::SubExponential: return "SubExponential";
    case DecayClass::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

DecayClass classify_decay(const DecayFit& fit) {
  const auto& w = fit.window_rates;
  if (fit.rows < 10 || w.size() != 4) return DecayClass::Inconclusive;
  const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
  if (fit.r2_defined && fit.r2 >= 0.995 && *lo > 0.0 && *hi / *lo <= 1.25) {
    return DecayClass::Exponential;
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < w.size(); ++i) decreasing = decreasing && w[i] < w[i - 1];
  if (decreasing && w.front() > 0.0 && w.back() <= 0.8 * w.front()) return DecayClass::SubExponential;
  return DecayClass::Inconclusive;
}

}  // namespace gpl
