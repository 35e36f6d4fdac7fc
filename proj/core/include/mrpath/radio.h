#pragma once

#include <random>
#include <span>

#include "mrpath/common.h"

namespace mrpath {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

/// Free-space loss at the 1 m reference distance, (c / (4 pi f_c))^2.
inline double reference_path_loss(double carrier_hz) {
  const double r = kSpeedOfLight / (4.0 * kPi * carrier_hz);
  return r * r;
}

enum class LinkState { kLoS, kNLoS };
enum class FadingMode { kDeterministic, kNakagami };

/// Downlink radio parameters, all in linear units.
struct RadioParams {
  double bandwidth_hz = 100e6;
  double tx_power_w = 0.1;  // per active beam (20 dBm)
  double side_lobe_gain = 0.1;
  double beamwidth = kPi / 6.0;
  double alpha_los = 2.0;
  double alpha_nlos = 4.0;
  double carrier_hz = 28e9;
  double kappa_los = reference_path_loss(28e9);
  double kappa_nlos = reference_path_loss(28e9);
  double noise_psd_w_per_hz = dbm_to_watts(-174.0);
  double los_decay_per_m = 1.0 / 141.4;  // beta
  FadingMode fading = FadingMode::kDeterministic;
  double nakagami_m_los = 3.0;
  double nakagami_m_nlos = 2.0;
  // Always-on side-lobe leakage from every non-serving BS.
  bool side_lobe_interference = true;

  double main_lobe_gain() const;
  double noise_power_w() const { return noise_psd_w_per_hz * bandwidth_hz; }
  /// Throws std::invalid_argument when an invariant does not hold.
  void validate() const;
};

/// Gain inside the main lobe for an ideal sectored pattern.
double main_lobe_gain(double beamwidth, double side_lobe_gain);

double los_probability(double distance_m, double los_decay_per_m);

struct PathLoss {
  double value = 0.0;
  bool clamped = false;  // distance was below the 1 m reference
};

PathLoss path_loss(double distance_m, LinkState state, const RadioParams& params);

struct LinkSample {
  LinkState state = LinkState::kLoS;
  double fading_power = 1.0;
  double distance_m = 1.0;
};

/// Draws LoS/NLoS from p_L(D), then a unit-mean Nakagami power (Gamma with
/// shape m and scale 1/m) unless fading is deterministic.
LinkSample sample_link(double distance_m, const RadioParams& params, std::mt19937_64& rng);

struct Interferer {
  LinkSample link;
  double gain = 0.0;
};

double received_power_w(const LinkSample& link, double gain, const RadioParams& params);

/// Serving beam is main-lobe, receiver is omnidirectional.
double sinr(const LinkSample& serving, std::span<const Interferer> interferers,
            const RadioParams& params);

/// Shannon rate W log2(1 + sinr), bits/s.
double rate(double sinr, double bandwidth_hz);

}  // namespace mrpath
