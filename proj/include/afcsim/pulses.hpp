#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace afc {

/// Hyperbolic-square-hyperbolic adiabatic pulse parameters. Frequencies in rad/s.
struct HshParams {
  double peak_rabi = 0.0;
  double cutoff_duration = 0.0;   ///< T_C, seconds
  double square_fraction = 0.7;   ///< T_sq / T_C
  double chirp_span = 0.0;        ///< total sweep width
  double edge_truncation = 5.3;   ///< beta; edge amplitude is sech(beta) of peak

  double square_duration() const { return square_fraction * cutoff_duration; }
  double edge_duration() const { return 0.5 * (cutoff_duration - square_duration()); }

  /// Throws ParameterError naming the first violated invariant.
  void validate() const;
};

/// Lorentzian amplitude filter applied at the instantaneous pulse frequency.
/// Offsets are relative to the pulse carrier, in rad/s.
struct AmplitudeFilter {
  double center_offset = 0.0;
  double fwhm = 0.0;

  double gain(double offset) const;
};

/// A control pulse described by its Rabi amplitude and instantaneous detuning.
///
/// Shapes are evaluated analytically, so a waveform is a small value type that
/// can be copied per spatial point with a different peak amplitude.
class PulseWaveform {
 public:
  enum class Shape { square, sech, hsh };

  static PulseWaveform square(double rabi, double duration, double detuning);
  static PulseWaveform sech(double peak_rabi, double duration, double chirp_span,
                            double edge_truncation);
  static PulseWaveform hsh(const HshParams& params);

  Shape shape() const { return shape_; }
  double duration() const { return duration_; }
  double peak_rabi() const { return peak_; }

  double amplitude(double t) const;
  double chirp_detuning(double t) const;

  /// Same shape with a different peak Rabi frequency.
  PulseWaveform with_peak_rabi(double peak_rabi) const;
  /// Same shape with the sweep direction reversed.
  PulseWaveform reversed_chirp() const;
  /// Multiplies the amplitude by a Lorentzian evaluated at the instantaneous chirp.
  PulseWaveform with_filter(const AmplitudeFilter& filter) const;

  /// Times at which the waveform switches analytic branch, including 0 and duration.
  std::vector<double> segment_boundaries() const;

  /// Linear span of the middle section of an HSH pulse (the full span otherwise).
  double middle_span() const { return middle_span_; }

  /// Writes `samples` uniform rows of (t_seconds, amplitude_rad_s, detuning_rad_s).
  void write_csv(std::ostream& out, std::size_t samples) const;

 private:
  PulseWaveform() = default;

  double envelope(double t) const;

  Shape shape_ = Shape::square;
  double duration_ = 0.0;
  double peak_ = 0.0;
  double detuning_ = 0.0;       // square only
  double beta_ = 0.0;
  double edge_ = 0.0;           // T_e
  double square_ = 0.0;         // T_sq
  double middle_span_ = 0.0;    // Gamma_mid
  double edge_chirp_ = 0.0;     // tanh coefficient c
  double sign_ = 1.0;           // sweep direction
  std::optional<AmplitudeFilter> filter_;
};

/// Landau-Zener style inversion efficiency of an adiabatic HSH pulse:
/// 1 - exp(-pi/2 * T_sq * rabi^2 / chirp_span).
double analytical_hsh_efficiency(double peak_rabi, double square_duration, double chirp_span);

}  // namespace afc
