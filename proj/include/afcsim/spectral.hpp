#pragma once

#include <cstddef>
#include <functional>

#include "afcsim/quadrature.hpp"

namespace afc {

/// Area-normalized Gaussian detuning distribution. Frequencies in rad/s.
struct GaussianSpectrum {
  double fwhm = 0.0;
  double center = 0.0;

  double sigma() const;
  double density(double detuning) const;
  void validate() const;
};

inline constexpr std::size_t kDefaultSpectralNodes = 65;
inline constexpr double kSpectralHalfWidthInFwhm = 2.5;

/// Quadrature nodes over center +- 2.5 FWHM with weights already multiplied by S(delta)
/// and renormalized so the truncated density integrates to one.
QuadratureRule spectral_rule(const GaussianSpectrum& spectrum,
                             std::size_t nodes = kDefaultSpectralNodes);

/// Integral of S(delta) * eff(delta).
double spectral_average(const std::function<double(double)>& eff, const GaussianSpectrum& spectrum,
                        std::size_t nodes = kDefaultSpectralNodes);

/// Power-spectrum FWHM (rad/s) of a Gaussian pulse with the given intensity FWHM duration,
/// using the 2 ln2 / pi time-bandwidth product.
double fwhm_from_gaussian_duration(double duration_fwhm);

}  // namespace afc
