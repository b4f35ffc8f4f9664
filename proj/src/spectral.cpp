#include "afcsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "afcsim/errors.hpp"
#include "afcsim/units.hpp"

namespace afc {

namespace {
const double kFwhmPerSigma = 2.0 * std::sqrt(2.0 * std::log(2.0));
}

double GaussianSpectrum::sigma() const { return fwhm / kFwhmPerSigma; }

double GaussianSpectrum::density(double detuning) const {
  const double s = sigma();
  const double x = (detuning - center) / s;
  return std::exp(-0.5 * x * x) / (s * std::sqrt(kTwoPi));
}

void GaussianSpectrum::validate() const {
  if (!(fwhm > 0.0) || !std::isfinite(fwhm)) {
    throw ParameterError("Gaussian spectrum FWHM must be > 0");
  }
}

QuadratureRule spectral_rule(const GaussianSpectrum& spectrum, std::size_t nodes) {
  spectrum.validate();
  const double half = kSpectralHalfWidthInFwhm * spectrum.fwhm;
  QuadratureRule rule = gauss_legendre(nodes, spectrum.center - half, spectrum.center + half);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.weights[i] *= spectrum.density(rule.nodes[i]);
  }
  const double mass = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  for (double& w : rule.weights) {
    w /= mass;
  }
  return rule;
}

double spectral_average(const std::function<double(double)>& eff, const GaussianSpectrum& spectrum,
                        std::size_t nodes) {
  const QuadratureRule rule = spectral_rule(spectrum, nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    sum += rule.weights[i] * eff(rule.nodes[i]);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double fwhm_from_gaussian_duration(double duration_fwhm) {
  if (!(duration_fwhm > 0.0)) {
    throw ParameterError("Gaussian pulse duration must be > 0");
  }
  return kTwoPi * (2.0 * std::log(2.0) / kPi) / duration_fwhm;
}

}  // namespace afc
