// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "stcris/array.hpp"
#include "stcris/codebook.hpp"
#include "stcris/codes.hpp"
#include "stcris/types.hpp"

namespace stcris {

struct ChannelTap {
  cdouble gain{1.0, 0.0};
  double delay_s = 0.0;
};

struct ChannelSpec {
  enum class Kind { ideal, awgn, multipath };
  Kind kind = Kind::ideal;
  double esn0_db = std::numeric_limits<double>::infinity();
  std::vector<ChannelTap> taps;

  bool has_noise() const;
};

// Synthetic three-tap indoor profile: 0/-6/-12 dB at delays of 0, 0.5 and
// 1.2 bit durations. Stands in for an unmeasured office channel.
ChannelSpec office_multipath(double bit_duration);

struct LinkConfig {
  std::size_t code_length = 8;           // L
  double bit_duration = 5e-4;            // tau, seconds
  double f_offset = 500e3;               // carrier offset, Hz
  double sample_rate = 0.0;              // Hz
  long harmonic = 1;                     // receiver's harmonic of interest
  cdouble reflection_off{0.0, 0.0};
  cdouble reflection_on{1.0, 0.0};
  ChannelSpec channel;
  ArrayGeometry geometry;
  double rx_angle_deg = 0.0;
  std::size_t reps = 1;                  // code periods per symbol
  std::size_t pilot_count = 1;           // known leading symbols
  std::uint64_t seed = 1;

  double code_period() const { return bit_duration * static_cast<double>(code_length); }
  double samples_per_bit() const { return bit_duration * sample_rate; }
  void validate() const;
};

struct PsdPoint {
  double freq_hz = 0.0;
  double power_db = 0.0;  // normalized, 0 dB at the strongest bin
};

struct RxReport {
  std::vector<PsdPoint> spectrum;
  std::vector<cdouble> constellation;   // pilot-corrected data symbols
  std::vector<std::size_t> decisions;   // data symbols only
  std::vector<std::size_t> tx_symbols;  // data symbols only (truth)
  double evm_pct = 0.0;
  double ser = 0.0;
  double post_filter_snr_db = 0.0;
  double mean_bin_power = 0.0;  // raw harmonic-bin power before pilot correction
  cdouble pilot_gain{1.0, 0.0};
  bool pilot_ok = true;
};

// One schedule entry per code period; column k plays schedules[k][e] during
// entry e. All columns must agree on entry count, L and tau.
using ColumnSchedules = std::vector<std::vector<TimeCode>>;

// Complex baseband at the receiver: the offset carrier re-radiated by all
// columns, each weighted by its geometric phase at rx_angle and its
// instantaneous reflection state.
std::vector<cdouble> synthesize_rx_waveform(const ColumnSchedules& schedules,
                                            const LinkConfig& cfg);

// ideal: identity. awgn: complex Gaussian noise sized so that Es/N0, with
// Es the mean harmonic-bin symbol power of the input, matches the spec.
// multipath: FIR with the given taps, then noise if esn0_db is finite.
std::vector<cdouble> apply_channel(const std::vector<cdouble>& samples,
                                   const LinkConfig& cfg);

// Windowed periodogram of the whole record (periodic Hann), zero-padded so
// the bin spacing resolves adjacent code harmonics. Needs at least one full
// code period.
std::vector<PsdPoint> spectrum_estimate(const std::vector<cdouble>& samples,
                                        double sample_rate,
                                        double code_period_s);

// Genie-synchronized receiver: one DFT-bin correlation per symbol window at
// f_offset + n/(L*tau), pilot gain estimate over the leading pilot_count
// windows, nearest-coefficient decisions, EVM/SER/PSD. tx_symbols carries
// the transmitted truth, pilots first.
RxReport demodulate(const std::vector<cdouble>& samples, const LinkConfig& cfg,
                    const Codebook& book,
                    const std::vector<std::size_t>& tx_symbols,
                    bool strict_pilot = true);

struct LinkRunSpec {
  LinkConfig cfg;
  Codebook book;
  long column_shift = 0;               // steering shift between columns
  std::size_t data_symbols = 0;        // random payload when payload empty
  std::string payload_bits;            // explicit payload, overrides count
};

struct LinkResult {
  RxReport report;
  std::vector<std::size_t> tx_symbols;  // pilots + data
};

// Full chain: schedule build, synthesis, channel, demodulation.
LinkResult run_link(const LinkRunSpec& spec);

struct SweepPoint {
  double angle_deg = 0.0;
  double power_db = 0.0;  // harmonic-bin power normalized to the sweep max
  RxReport report;
};

// Runs the chain at every angle with a common transmit schedule and
// per-angle derived noise streams. Noise power is fixed across the sweep
// (referenced to the coherent peak), so EVM degrades off-peak instead of
// being re-normalized away.
std::vector<SweepPoint> angular_sweep(const SteeringPlan& plan, const Codebook& book,
                                      const LinkConfig& cfg,
                                      const std::vector<double>& angles_deg,
                                      std::size_t data_symbols);

// Uniformly random symbol indices with a derived stream, for payload-free
// runs and sweeps.
std::vector<std::size_t> random_symbols(std::size_t count, std::size_t order,
                                        std::uint64_t seed);

}  // namespace stcris
