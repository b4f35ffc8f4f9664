#include "afcsim/pulses.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "afcsim/errors.hpp"
#include "afcsim/units.hpp"

namespace afc {

namespace {

double sech_fn(double x) { return 1.0 / std::cosh(x); }

}  // namespace

void HshParams::validate() const {
  if (!(cutoff_duration > 0.0)) {
    throw ParameterError("HSH cutoff duration T_C must be > 0");
  }
  if (!(square_fraction > 0.0 && square_fraction < 1.0)) {
    throw ParameterError("HSH square fraction f_sq must lie in (0, 1)");
  }
  if (!(chirp_span >= 0.0)) {
    throw ParameterError("HSH chirp span must be >= 0");
  }
  if (!(edge_truncation > 0.0)) {
    throw ParameterError("HSH edge truncation beta must be > 0");
  }
  if (!(peak_rabi >= 0.0)) {
    throw ParameterError("HSH peak Rabi frequency must be >= 0");
  }
}

double AmplitudeFilter::gain(double offset) const {
  const double hw = 0.5 * fwhm;
  const double d = offset - center_offset;
  return hw * hw / (d * d + hw * hw);
}

PulseWaveform PulseWaveform::square(double rabi, double duration, double detuning) {
  if (!(duration > 0.0)) {
    throw ParameterError("square pulse duration must be > 0");
  }
  if (!(rabi >= 0.0)) {
    throw ParameterError("square pulse Rabi frequency must be >= 0");
  }
  PulseWaveform p;
  p.shape_ = Shape::square;
  p.duration_ = duration;
  p.peak_ = rabi;
  p.detuning_ = detuning;
  return p;
}

PulseWaveform PulseWaveform::sech(double peak_rabi, double duration, double chirp_span,
                                  double edge_truncation) {
  if (!(duration > 0.0)) {
    throw ParameterError("sech pulse duration must be > 0");
  }
  if (!(peak_rabi >= 0.0) || !(chirp_span >= 0.0) || !(edge_truncation > 0.0)) {
    throw ParameterError("sech pulse needs rabi >= 0, chirp span >= 0, beta > 0");
  }
  PulseWaveform p;
  p.shape_ = Shape::sech;
  p.duration_ = duration;
  p.peak_ = peak_rabi;
  p.beta_ = edge_truncation;
  p.edge_ = 0.5 * duration;
  p.middle_span_ = chirp_span;
  p.edge_chirp_ = 0.5 * chirp_span / std::tanh(edge_truncation);
  return p;
}

PulseWaveform PulseWaveform::hsh(const HshParams& params) {
  params.validate();
  PulseWaveform p;
  p.shape_ = Shape::hsh;
  p.duration_ = params.cutoff_duration;
  p.peak_ = params.peak_rabi;
  p.beta_ = params.edge_truncation;
  p.square_ = params.square_duration();
  p.edge_ = params.edge_duration();
  const double ratio = p.edge_ / (p.square_ * p.beta_);
  p.middle_span_ = params.chirp_span / (1.0 + 2.0 * ratio * std::tanh(p.beta_));
  p.edge_chirp_ = p.middle_span_ * ratio;
  return p;
}

PulseWaveform PulseWaveform::with_peak_rabi(double peak_rabi) const {
  PulseWaveform p = *this;
  p.peak_ = peak_rabi;
  return p;
}

PulseWaveform PulseWaveform::reversed_chirp() const {
  PulseWaveform p = *this;
  p.sign_ = -sign_;
  p.detuning_ = -detuning_;
  return p;
}

PulseWaveform PulseWaveform::with_filter(const AmplitudeFilter& filter) const {
  if (!(filter.fwhm > 0.0)) {
    throw ParameterError("amplitude filter FWHM must be > 0");
  }
  PulseWaveform p = *this;
  p.filter_ = filter;
  return p;
}

double PulseWaveform::envelope(double t) const {
  switch (shape_) {
    case Shape::square:
      return 1.0;
    case Shape::sech:
      return sech_fn(beta_ * (t - edge_) / edge_);
    case Shape::hsh:
      if (t < edge_) {
        return sech_fn(beta_ * (t - edge_) / edge_);
      }
      if (t > edge_ + square_) {
        return sech_fn(beta_ * (t - edge_ - square_) / edge_);
      }
      return 1.0;
  }
  return 0.0;
}

double PulseWaveform::amplitude(double t) const {
  double a = peak_ * envelope(t);
  if (filter_) {
    a *= filter_->gain(chirp_detuning(t));
  }
  return a;
}

double PulseWaveform::chirp_detuning(double t) const {
  switch (shape_) {
    case Shape::square:
      return detuning_;
    case Shape::sech:
      return sign_ * edge_chirp_ * std::tanh(beta_ * (t - edge_) / edge_);
    case Shape::hsh: {
      const double half_mid = 0.5 * middle_span_;
      if (t < edge_) {
        return sign_ * (-half_mid + edge_chirp_ * std::tanh(beta_ * (t - edge_) / edge_));
      }
      if (t > edge_ + square_) {
        return sign_ * (half_mid + edge_chirp_ * std::tanh(beta_ * (t - edge_ - square_) / edge_));
      }
      return sign_ * (-half_mid + middle_span_ * (t - edge_) / square_);
    }
  }
  return 0.0;
}

std::vector<double> PulseWaveform::segment_boundaries() const {
  if (shape_ == Shape::hsh) {
    return {0.0, edge_, edge_ + square_, duration_};
  }
  return {0.0, duration_};
}

void PulseWaveform::write_csv(std::ostream& out, std::size_t samples) const {
  if (samples < 2) {
    throw ParameterError("waveform export needs at least two samples");
  }
  out << "t_seconds,amplitude_rad_s,detuning_rad_s\n";
  char line[128];
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = duration_ * static_cast<double>(i) / static_cast<double>(samples - 1);
    std::snprintf(line, sizeof line, "%.9g,%.9g,%.9g\n", t, amplitude(t), chirp_detuning(t));
    out << line;
  }
}

double analytical_hsh_efficiency(double peak_rabi, double square_duration, double chirp_span) {
  if (!(chirp_span > 0.0)) {
    throw ParameterError("analytical HSH efficiency needs chirp span > 0");
  }
  if (!(square_duration > 0.0)) {
    throw ParameterError("analytical HSH efficiency needs T_sq > 0");
  }
  if (!(peak_rabi >= 0.0)) {
    throw ParameterError("analytical HSH efficiency needs rabi >= 0");
  }
  return 1.0 - std::exp(-0.5 * kPi * square_duration * peak_rabi * peak_rabi / chirp_span);
}

}  // namespace afc
