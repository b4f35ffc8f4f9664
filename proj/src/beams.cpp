#include "afcsim/beams.hpp"

#include <cmath>

#include "afcsim/errors.hpp"
#include "afcsim/units.hpp"

namespace afc {

double GaussianBeam::rayleigh_length() const { return kPi * waist * waist / wavelength; }

void GaussianBeam::validate() const {
  if (!(waist > 0.0)) {
    throw ParameterError("beam waist must be > 0");
  }
  if (!(wavelength > 0.0)) {
    throw ParameterError("beam wavelength must be > 0");
  }
}

void CrystalGeometry::validate() const {
  if (!(length > 0.0)) {
    throw ParameterError("crystal length must be > 0");
  }
}

double beam_radius(const GaussianBeam& beam, double z) {
  const double x = (z - beam.waist_position) / beam.rayleigh_length();
  return beam.waist * std::sqrt(1.0 + x * x);
}

double optimal_input_waist(double length, double wavelength) {
  if (!(length > 0.0) || !(wavelength > 0.0)) {
    throw ParameterError("optimal waist needs positive length and wavelength");
  }
  return std::sqrt(length * wavelength / kTwoPi);
}

double input_intensity(const GaussianBeam& beam, double r, double z) {
  const double w = beam_radius(beam, z);
  return 2.0 / (kPi * w * w) * std::exp(-2.0 * r * r / (w * w));
}

double control_rabi(const GaussianBeam& beam, double peak_rabi, double r, double z) {
  const double w = beam_radius(beam, z);
  return peak_rabi * (beam.waist / w) * std::exp(-r * r / (w * w));
}

double rabi_for_waist(double reference_rabi, double reference_waist, double waist) {
  if (!(waist > 0.0) || !(reference_waist > 0.0)) {
    throw ParameterError("Rabi scaling needs positive waists");
  }
  return reference_rabi * reference_waist / waist;
}

}  // namespace afc
