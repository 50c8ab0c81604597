#pragma once

// Cell-edge link budget: maps transmit power to Shannon rate and back.

namespace vbs {

inline constexpr double kDefaultExponentLimit = 60.0;  // max r/W for 2^(r/W)

/// Urban macro path loss, 128.1 + 37.6 log10(d_km) dB at 2 GHz. Other carriers
/// get the 21 log10(f) carrier term of the same 3GPP macro model. Clamped to
/// 0 dB so the result is always >= 1.
double path_loss_db(double distance_m, double carrier_freq_hz = 2e9);
double path_loss_linear(double distance_m, double carrier_freq_hz = 2e9);

double db_to_linear(double db);
double dbm_to_watts(double dbm);

/// Configuration-side description of the link; dB-valued where engineers
/// usually quote them.
struct LinkInputs {
  double carrier_freq_hz = 2e9;
  double cell_radius_m = 500.0;
  double noise_figure_db = 9.0;
  double noise_density_dbm_per_hz = -174.0;
  double bandwidth_hz = 20e6;
};

class LinkBudget {
 public:
  /// Converts every dB quantity to linear SI once and caches the gain.
  explicit LinkBudget(const LinkInputs& in = {});

  static LinkBudget from_linear(double path_loss, double noise_figure,
                                double noise_density_w_per_hz,
                                double bandwidth_hz);

  double carrier_freq_hz() const { return carrier_freq_hz_; }
  double cell_radius_m() const { return cell_radius_m_; }
  double path_loss() const { return path_loss_; }
  double noise_figure() const { return noise_figure_; }
  double noise_density() const { return noise_density_; }
  double bandwidth_hz() const { return bandwidth_hz_; }
  double channel_gain() const { return gain_; }

 private:
  struct Raw {};
  explicit LinkBudget(Raw) {}
  void finish();

  double carrier_freq_hz_ = 0.0;
  double cell_radius_m_ = 0.0;
  double path_loss_ = 1.0;
  double noise_figure_ = 1.0;
  double noise_density_ = 0.0;
  double bandwidth_hz_ = 0.0;
  double gain_ = 0.0;
};

/// g = 1 / (L(R) F N0 W).
inline double channel_gain(const LinkBudget& lb) { return lb.channel_gain(); }

/// Shannon rate W log2(1 + g p_out). Interference is not modeled, so the SINR
/// here is a plain SNR.
double rate_for_pout(double gain, double bandwidth_hz, double p_out_w);

/// Inverse of rate_for_pout: (2^(r/W) - 1) / g. Raises kDomain when r/W
/// exceeds `exponent_limit`.
double pout_for_rate(double gain, double bandwidth_hz, double rate_bps,
                     double exponent_limit = kDefaultExponentLimit);

}  // namespace vbs
