#include "afcsim/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>

#include "afcsim/errors.hpp"

namespace afc {

namespace {

void check_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ParameterError(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

double compose_opt_spin(double eta_oc, double eta_sc) {
  check_unit(eta_oc, "eta_oc");
  check_unit(eta_sc, "eta_sc");
  return eta_oc * eta_oc * eta_sc * eta_sc;
}

double compose_total(double eta_afc, double eta_oc, double eta_sc, double eta_spin) {
  check_unit(eta_afc, "eta_afc");
  check_unit(eta_spin, "eta_spin");
  return eta_afc * compose_opt_spin(eta_oc, eta_sc) * eta_spin;
}

EfficiencyResult compose(double eta_oc, double eta_sc, std::optional<double> eta_afc,
                         double eta_spin) {
  EfficiencyResult r;
  r.eta_oc = eta_oc;
  r.eta_sc = eta_sc;
  r.eta_opt_spin = compose_opt_spin(eta_oc, eta_sc);
  r.eta_afc = eta_afc;
  check_unit(eta_spin, "eta_spin");
  r.eta_spin = eta_spin;
  if (eta_afc) {
    r.eta_tot = compose_total(*eta_afc, eta_oc, eta_sc, eta_spin);
  }
  return r;
}

void AfcDecayParams::validate() const {
  if (!(eta0 > 0.0 && eta0 <= 1.0)) {
    throw ParameterError("AFC zero-delay efficiency must lie in (0, 1]");
  }
  if (!(t2_afc > 0.0)) {
    throw ParameterError("AFC coherence time must be > 0");
  }
  if (!(exponent_factor > 0.0)) {
    throw ParameterError("AFC decay exponent factor must be > 0");
  }
}

double afc_decay(const AfcDecayParams& params, double delay) {
  if (!(delay >= 0.0)) {
    throw ParameterError("AFC delay must be >= 0");
  }
  return params.eta0 * std::exp(-params.exponent_factor * delay / params.t2_afc);
}

AfcFit fit_afc_decay(std::span<const DecayPoint> points, double exponent_factor) {
  if (points.size() < 2) {
    throw FitError("AFC decay fit needs at least two points");
  }
  for (const auto& p : points) {
    if (!(p.eta > 0.0)) {
      throw ParameterError("AFC decay fit needs strictly positive efficiencies");
    }
    if (!(p.delay >= 0.0)) {
      throw ParameterError("AFC decay fit needs non-negative delays");
    }
  }

  // Log-linear least squares: ln eta = ln eta0 - slope * t.
  const auto n = static_cast<double>(points.size());
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (const auto& p : points) {
    const double y = std::log(p.eta);
    st += p.delay;
    sy += y;
    stt += p.delay * p.delay;
    sty += p.delay * y;
  }
  const double denom = n * stt - st * st;
  const double spread = std::abs(st) > 0.0 ? std::abs(denom) / (st * st) : std::abs(denom);
  if (!(spread > 1e-12) || denom == 0.0) {
    throw FitError("AFC decay fit needs at least two distinct delays");
  }
  const double slope = -(n * sty - st * sy) / denom;
  const double intercept = (sy + slope * st) / n;
  if (!(slope > 0.0)) {
    throw FitError("AFC decay data do not decay with delay");
  }

  AfcFit fit;
  fit.params = {std::exp(intercept), exponent_factor / slope, exponent_factor};

  auto sum_sq = [&](double eta0, double t2) {
    double s = 0.0;
    for (const auto& p : points) {
      const double r = p.eta - eta0 * std::exp(-exponent_factor * p.delay / t2);
      s += r * r;
    }
    return s;
  };

  if (points.size() > 2) {
    double eta0 = fit.params.eta0;
    double t2 = fit.params.t2_afc;
    double cost = sum_sq(eta0, t2);
    double lambda = 1e-3;
    for (int iter = 0; iter < 200; ++iter) {
      fit.iterations = iter + 1;
      // Normal equations J^T J dp = J^T r in (eta0, t2).
      double a11 = 0.0, a12 = 0.0, a22 = 0.0, g1 = 0.0, g2 = 0.0;
      for (const auto& p : points) {
        const double e = std::exp(-exponent_factor * p.delay / t2);
        const double j1 = e;
        const double j2 = eta0 * e * exponent_factor * p.delay / (t2 * t2);
        const double r = p.eta - eta0 * e;
        a11 += j1 * j1;
        a12 += j1 * j2;
        a22 += j2 * j2;
        g1 += j1 * r;
        g2 += j2 * r;
      }
      bool accepted = false;
      double rel_step = 0.0;
      for (int tries = 0; tries < 30 && !accepted; ++tries) {
        const double d11 = a11 * (1.0 + lambda);
        const double d22 = a22 * (1.0 + lambda);
        const double det = d11 * d22 - a12 * a12;
        if (det == 0.0) {
          break;
        }
        const double dp1 = (d22 * g1 - a12 * g2) / det;
        const double dp2 = (d11 * g2 - a12 * g1) / det;
        const double n_eta0 = eta0 + dp1;
        const double n_t2 = t2 + dp2;
        if (n_t2 > 0.0) {
          const double n_cost = sum_sq(n_eta0, n_t2);
          if (n_cost <= cost) {
            rel_step = std::max(std::abs(dp1) / std::abs(eta0), std::abs(dp2) / t2);
            eta0 = n_eta0;
            t2 = n_t2;
            cost = n_cost;
            lambda = std::max(lambda * 0.3, 1e-12);
            accepted = true;
            continue;
          }
        }
        lambda *= 10.0;
      }
      if (!accepted || rel_step < 1e-10) {
        break;
      }
    }
    fit.params.eta0 = eta0;
    fit.params.t2_afc = t2;
  }
  fit.rms_residual = std::sqrt(sum_sq(fit.params.eta0, fit.params.t2_afc) / n);
  return fit;
}

std::vector<DecayPoint> read_decay_csv(std::istream& in) {
  std::vector<DecayPoint> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double delay_us = 0.0;
    double eta = 0.0;
    if (!(fields >> delay_us >> eta)) {
      if (points.empty() && std::isalpha(static_cast<unsigned char>(line[first]))) {
        continue;  // header row
      }
      throw ParameterError("decay CSV line " + std::to_string(line_no) +
                           ": expected two numeric columns");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
      throw ParameterError("decay CSV line " + std::to_string(line_no) +
                           ": efficiency must lie in (0, 1]");
    }
    points.push_back({delay_us * 1e-6, eta});
  }
  return points;
}

}  // namespace afc
