#pragma once

namespace vbs {

inline constexpr double kBitsPerMegabyte = 8e6;

/// Poisson flow arrivals with a mean file size; the offered bit rate is
/// arrival_rate * mean_file_size_bits.
struct TrafficParams {
  double arrival_rate = 1.0;             // flows/s
  double mean_file_size_bits = 1.6e7;    // 2 MB

  double offered_bps() const { return arrival_rate * mean_file_size_bits; }
  void validate() const;
};

}  // namespace vbs
