#include "mrpath/radio.h"

#include <algorithm>
#include <stdexcept>

namespace mrpath {

double main_lobe_gain(double beamwidth, double side_lobe_gain) {
  return (kTwoPi - (kTwoPi - beamwidth) * side_lobe_gain) / beamwidth;
}

double RadioParams::main_lobe_gain() const {
  return mrpath::main_lobe_gain(beamwidth, side_lobe_gain);
}

void RadioParams::validate() const {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (!(tx_power_w > 0.0)) throw std::invalid_argument("transmit power must be positive");
  if (!(beamwidth > 0.0 && beamwidth < kTwoPi + 1e-12)) {
    throw std::invalid_argument("beamwidth must lie in (0, 2*pi]");
  }
  if (!(side_lobe_gain > 0.0 && side_lobe_gain < main_lobe_gain())) {
    throw std::invalid_argument("side-lobe gain must lie in (0, main-lobe gain)");
  }
  if (!(alpha_los > 0.0 && alpha_nlos >= alpha_los)) {
    throw std::invalid_argument("path-loss exponents need alpha_nlos >= alpha_los > 0");
  }
  if (!(kappa_los > 0.0 && kappa_nlos > 0.0)) {
    throw std::invalid_argument("reference path loss must be positive");
  }
  if (!(noise_psd_w_per_hz > 0.0)) throw std::invalid_argument("noise PSD must be positive");
  if (!(los_decay_per_m > 0.0)) throw std::invalid_argument("LoS decay must be positive");
  if (fading == FadingMode::kNakagami && !(nakagami_m_los >= 0.5 && nakagami_m_nlos >= 0.5)) {
    throw std::invalid_argument("Nakagami shape must be at least 0.5");
  }
}

double los_probability(double distance_m, double los_decay_per_m) {
  return std::exp(-los_decay_per_m * std::max(0.0, distance_m));
}

PathLoss path_loss(double distance_m, LinkState state, const RadioParams& params) {
  PathLoss out;
  double d = distance_m;
  if (!(d >= 1.0)) {
    d = 1.0;
    out.clamped = true;
  }
  out.value = state == LinkState::kLoS ? params.kappa_los * std::pow(d, -params.alpha_los)
                                       : params.kappa_nlos * std::pow(d, -params.alpha_nlos);
  return out;
}

LinkSample sample_link(double distance_m, const RadioParams& params, std::mt19937_64& rng) {
  LinkSample s;
  s.distance_m = distance_m;
  s.state = uniform01(rng) < los_probability(distance_m, params.los_decay_per_m)
                ? LinkState::kLoS
                : LinkState::kNLoS;
  if (params.fading == FadingMode::kNakagami) {
    const double m = s.state == LinkState::kLoS ? params.nakagami_m_los : params.nakagami_m_nlos;
    std::gamma_distribution<double> gamma(m, 1.0 / m);
    do {
      s.fading_power = gamma(rng);
    } while (!(s.fading_power > 0.0));
  }
  return s;
}

double received_power_w(const LinkSample& link, double gain, const RadioParams& params) {
  return params.tx_power_w * gain * link.fading_power *
         path_loss(link.distance_m, link.state, params).value;
}

double sinr(const LinkSample& serving, std::span<const Interferer> interferers,
            const RadioParams& params) {
  const double signal = received_power_w(serving, params.main_lobe_gain(), params);
  double interference = 0.0;
  for (const auto& i : interferers) interference += received_power_w(i.link, i.gain, params);
  return signal / (interference + params.noise_power_w());
}

double rate(double sinr, double bandwidth_hz) { return bandwidth_hz * std::log2(1.0 + sinr); }

}  // namespace mrpath
