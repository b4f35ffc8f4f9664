#pragma once

namespace afc {

/// Gaussian beam with its waist given at the 1/e level of the field amplitude.
struct GaussianBeam {
  double waist = 0.0;       ///< w0, meters
  double wavelength = 0.0;  ///< vacuum wavelength, meters
  double waist_position = 0.0;

  double rayleigh_length() const;
  void validate() const;
};

/// Crystal of length L centered on z = 0.
struct CrystalGeometry {
  double length = 0.0;

  double z_min() const { return -0.5 * length; }
  double z_max() const { return 0.5 * length; }
  void validate() const;
};

double beam_radius(const GaussianBeam& beam, double z);

/// Waist that minimizes the beam radius at both crystal faces (Rayleigh length = L/2).
double optimal_input_waist(double length, double wavelength);

/// Intensity normalized to unit power in every transverse plane (1/m^2).
double input_intensity(const GaussianBeam& beam, double r, double z);

/// Local control Rabi frequency, proportional to the field amplitude.
double control_rabi(const GaussianBeam& beam, double peak_rabi, double r, double z);

/// Peak Rabi frequency at a new waist for fixed optical power.
double rabi_for_waist(double reference_rabi, double reference_waist, double waist);

}  // namespace afc
