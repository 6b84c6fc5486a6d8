// SPDX-License-Identifier: Apache-2.0
#include "stcris/linksim.hpp"

#include <algorithm>
#include <cmath>

#include "stcris/harmonics.hpp"
#include "stcris/kernels.hpp"
#include "stcris/rng.hpp"

namespace stcris {

namespace {

// Derived-stream tags so channel noise, payload generation and sweep points
// never share an RNG sequence.
constexpr std::uint64_t kStreamChannel = 1;
constexpr std::uint64_t kStreamPayload = 2;
constexpr std::uint64_t kStreamSweepBase = 1000;

std::int64_t bit_boundary(const LinkConfig& cfg, std::uint64_t bit) {
  return std::llround(static_cast<double>(bit) * cfg.samples_per_bit());
}

// Number of whole bits represented by a sample count; errors out when the
// record does not end on a bit boundary.
std::uint64_t bits_in_record(const LinkConfig& cfg, std::size_t n_samples) {
  const std::uint64_t bits = static_cast<std::uint64_t>(
      std::llround(static_cast<double>(n_samples) / cfg.samples_per_bit()));
  if (bit_boundary(cfg, bits) != static_cast<std::int64_t>(n_samples)) {
    throw ConfigError("sample count " + std::to_string(n_samples) +
                      " does not align with bit boundaries");
  }
  return bits;
}

// Reflection state -> reflection coefficient. Linear in the state so a
// constant off-level only shifts the carrier line, never the harmonics.
cdouble reflection_of(const cdouble& state, const LinkConfig& cfg) {
  return cfg.reflection_off + state * (cfg.reflection_on - cfg.reflection_off);
}

std::vector<cdouble> geometric_phases(const LinkConfig& cfg) {
  const double s = std::sin(deg_to_rad(cfg.rx_angle_deg));
  std::vector<cdouble> a(cfg.geometry.num_columns);
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = std::polar(1.0, -2.0 * kPi * cfg.geometry.spacing_wl *
                               static_cast<double>(k) * s);
  }
  return a;
}

struct WindowLayout {
  std::uint64_t count = 0;
  std::uint64_t bits_per_window = 0;
};

WindowLayout window_layout(const LinkConfig& cfg, std::size_t n_samples) {
  WindowLayout w;
  w.bits_per_window = static_cast<std::uint64_t>(cfg.reps) * cfg.code_length;
  const std::uint64_t bits = bits_in_record(cfg, n_samples);
  w.count = bits / w.bits_per_window;
  if (w.count == 0) {
    throw ConfigError("record shorter than one symbol window");
  }
  return w;
}

// Per-window DFT-bin correlations at the harmonic of interest, normalized
// by the window length. values[w] estimates (channel gain) * coefficient.
std::vector<cdouble> bin_correlations(const std::vector<cdouble>& samples,
                                      const LinkConfig& cfg, long harmonic,
                                      const WindowLayout& layout) {
  const double f_bin = cfg.f_offset +
                       harmonic_frequency(harmonic, cfg.code_length, cfg.bit_duration);
  const double dphase = 2.0 * kPi * f_bin / cfg.sample_rate;
  const auto& lane = kernels::active();
  std::vector<cdouble> out(layout.count);
  for (std::uint64_t w = 0; w < layout.count; ++w) {
    const std::int64_t i0 = bit_boundary(cfg, w * layout.bits_per_window);
    const std::int64_t i1 = bit_boundary(cfg, (w + 1) * layout.bits_per_window);
    const std::size_t len = static_cast<std::size_t>(i1 - i0);
    const cdouble sum = lane.dot_tone(samples.data() + i0, len,
                                      dphase * static_cast<double>(i0), dphase);
    out[w] = sum / static_cast<double>(len);
  }
  return out;
}

std::vector<cdouble> fir_taps_apply(const std::vector<cdouble>& x,
                                    const ChannelSpec& ch, const LinkConfig& cfg) {
  if (ch.taps.empty()) throw ConfigError("multipath channel needs at least one tap");
  std::vector<std::pair<std::int64_t, cdouble>> taps;
  taps.reserve(ch.taps.size());
  for (const ChannelTap& t : ch.taps) {
    if (!(t.delay_s >= 0.0) || !std::isfinite(t.delay_s)) {
      throw ConfigError("tap delays must be finite and nonnegative");
    }
    taps.emplace_back(std::llround(t.delay_s * cfg.sample_rate), t.gain);
  }
  std::vector<cdouble> y(x.size(), cdouble{0.0, 0.0});
  for (const auto& [d, g] : taps) {
    for (std::size_t i = static_cast<std::size_t>(std::min<std::int64_t>(
             d, static_cast<std::int64_t>(x.size())));
         i < x.size(); ++i) {
      y[i] += g * x[i - static_cast<std::size_t>(d)];
    }
  }
  return y;
}

void add_noise(std::vector<cdouble>& samples, double sigma2, std::uint64_t seed) {
  GaussianRng rng(seed);
  for (cdouble& s : samples) {
    s += rng.complex_gaussian(sigma2);
  }
}

double mean_window_len(const LinkConfig& cfg, const WindowLayout& layout,
                       std::size_t n_samples) {
  const std::int64_t covered = bit_boundary(cfg, layout.count * layout.bits_per_window);
  (void)n_samples;
  return static_cast<double>(covered) / static_cast<double>(layout.count);
}

// Noise variance per sample for a target Es/N0 against a given symbol
// energy in the bin.
double noise_variance(double es_bin, double mean_window, double esn0_db) {
  if (std::isnan(esn0_db)) throw ConfigError("Es/N0 must not be NaN");
  const double gamma = std::pow(10.0, esn0_db / 10.0);
  const double sigma2 = es_bin * mean_window / gamma;
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw ConfigError("noise power came out nonpositive or non-finite");
  }
  return sigma2;
}

}  // namespace

bool ChannelSpec::has_noise() const { return std::isfinite(esn0_db); }

ChannelSpec office_multipath(double bit_duration) {
  ChannelSpec ch;
  ch.kind = ChannelSpec::Kind::multipath;
  ch.taps = {
      {cdouble{1.0, 0.0}, 0.0},
      {cdouble{std::pow(10.0, -6.0 / 20.0), 0.0}, 0.5 * bit_duration},
      {cdouble{std::pow(10.0, -12.0 / 20.0), 0.0}, 1.2 * bit_duration},
  };
  return ch;
}

void LinkConfig::validate() const {
  if (code_length < 1 || code_length > 32) {
    throw ConfigError("code length must be 1..32");
  }
  if (!(bit_duration > 0.0) || !std::isfinite(bit_duration)) {
    throw ConfigError("bit duration must be positive");
  }
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    throw ConfigError("sample rate must be positive");
  }
  const double nyquist_need = 4.0 * (f_offset + 2.0 / code_period());
  if (sample_rate < nyquist_need) {
    throw ConfigError("sample rate " + std::to_string(sample_rate) +
                      " Hz below required " + std::to_string(nyquist_need) +
                      " Hz (4x the offset plus two harmonics)");
  }
  if (samples_per_bit() < 8.0) {
    throw ConfigError("need at least 8 samples per bit, got " +
                      std::to_string(samples_per_bit()));
  }
  if (reps < 1) throw ConfigError("reps must be >= 1");
  if (pilot_count < 1) throw ConfigError("pilot_count must be >= 1");
  if (!(rx_angle_deg >= -90.0 && rx_angle_deg <= 90.0)) {
    throw ConfigError("rx angle must lie in [-90, 90] degrees");
  }
  geometry.validate();
  if (channel.kind == ChannelSpec::Kind::multipath && channel.taps.empty()) {
    throw ConfigError("multipath channel needs at least one tap");
  }
}

std::vector<cdouble> synthesize_rx_waveform(const ColumnSchedules& schedules,
                                            const LinkConfig& cfg) {
  cfg.validate();
  if (schedules.empty()) throw ConfigError("empty schedule");
  if (schedules.size() != cfg.geometry.num_columns) {
    throw ConfigError("schedule has " + std::to_string(schedules.size()) +
                      " columns, geometry expects " +
                      std::to_string(cfg.geometry.num_columns));
  }
  const std::size_t entries = schedules[0].size();
  if (entries == 0) throw ConfigError("empty schedule");
  for (const auto& col : schedules) {
    if (col.size() != entries) {
      throw ConfigError("all columns must share the schedule length");
    }
    for (const TimeCode& code : col) {
      if (code.length() != cfg.code_length ||
          code.bit_duration != cfg.bit_duration) {
        throw ConfigError("schedule codes must match the configured L and tau");
      }
    }
  }

  const std::vector<cdouble> a = geometric_phases(cfg);
  const std::uint64_t total_bits =
      static_cast<std::uint64_t>(entries) * cfg.code_length;
  const std::size_t n_samples =
      static_cast<std::size_t>(bit_boundary(cfg, total_bits));
  std::vector<cdouble> out(n_samples);

  const double dphase = 2.0 * kPi * cfg.f_offset / cfg.sample_rate;
  const auto& lane = kernels::active();
  for (std::size_t e = 0; e < entries; ++e) {
    for (std::size_t b = 0; b < cfg.code_length; ++b) {
      const std::uint64_t gb = static_cast<std::uint64_t>(e) * cfg.code_length + b;
      const std::int64_t i0 = bit_boundary(cfg, gb);
      const std::int64_t i1 = bit_boundary(cfg, gb + 1);
      if (i1 <= i0) continue;
      cdouble gain{0.0, 0.0};
      for (std::size_t k = 0; k < schedules.size(); ++k) {
        gain += reflection_of(schedules[k][e].states[b], cfg) * a[k];
      }
      lane.tone_block(out.data() + i0, static_cast<std::size_t>(i1 - i0), gain,
                      dphase * static_cast<double>(i0), dphase);
    }
  }
  return out;
}

std::vector<cdouble> apply_channel(const std::vector<cdouble>& samples,
                                   const LinkConfig& cfg) {
  cfg.validate();
  switch (cfg.channel.kind) {
    case ChannelSpec::Kind::ideal:
      return samples;
    case ChannelSpec::Kind::awgn: {
      std::vector<cdouble> out = samples;
      if (!cfg.channel.has_noise()) return out;  // Es/N0 = inf behaves as ideal
      const WindowLayout layout = window_layout(cfg, out.size());
      const std::vector<cdouble> bins =
          bin_correlations(out, cfg, cfg.harmonic, layout);
      double es = 0.0;
      for (const cdouble& y : bins) es += std::norm(y);
      es /= static_cast<double>(bins.size());
      const double sigma2 =
          noise_variance(es, mean_window_len(cfg, layout, out.size()),
                         cfg.channel.esn0_db);
      add_noise(out, sigma2, GaussianRng::derive(cfg.seed, kStreamChannel));
      return out;
    }
    case ChannelSpec::Kind::multipath: {
      std::vector<cdouble> out = fir_taps_apply(samples, cfg.channel, cfg);
      if (cfg.channel.has_noise()) {
        const WindowLayout layout = window_layout(cfg, out.size());
        const std::vector<cdouble> bins =
            bin_correlations(out, cfg, cfg.harmonic, layout);
        double es = 0.0;
        for (const cdouble& y : bins) es += std::norm(y);
        es /= static_cast<double>(bins.size());
        const double sigma2 =
            noise_variance(es, mean_window_len(cfg, layout, out.size()),
                           cfg.channel.esn0_db);
        add_noise(out, sigma2, GaussianRng::derive(cfg.seed, kStreamChannel));
      }
      return out;
    }
  }
  throw ConfigError("unknown channel kind");
}

std::vector<PsdPoint> spectrum_estimate(const std::vector<cdouble>& samples,
                                        double sample_rate, double code_period_s) {
  if (!(sample_rate > 0.0) || !(code_period_s > 0.0)) {
    throw ConfigError("sample rate and code period must be positive");
  }
  const std::size_t n = samples.size();
  if (static_cast<double>(n) < code_period_s * sample_rate) {
    throw ConfigError("record too short: need at least one full code period");
  }

  // Periodic Hann, then zero-pad so the bin spacing is at most a third of
  // the harmonic spacing (and at least 4x interpolation for peak readout).
  std::size_t n_fft = 1;
  const double min_bins =
      std::max(4.0 * static_cast<double>(n), 3.0 * code_period_s * sample_rate);
  while (static_cast<double>(n_fft) < min_bins) n_fft <<= 1;

  std::vector<cdouble> x(n_fft, cdouble{0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    const double w =
        0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                              static_cast<double>(n)));
    x[i] = samples[i] * w;
  }
  kernels::fft_inplace(x);

  double pmax = 0.0;
  for (const cdouble& v : x) pmax = std::max(pmax, std::norm(v));
  if (pmax <= 0.0) pmax = 1.0;

  // fftshift so the axis runs from -fs/2 upward.
  std::vector<PsdPoint> psd(n_fft);
  const std::size_t half = n_fft / 2;
  for (std::size_t k = 0; k < n_fft; ++k) {
    const std::size_t src = (k + half) % n_fft;
    psd[k].freq_hz = (static_cast<double>(k) - static_cast<double>(half)) *
                     sample_rate / static_cast<double>(n_fft);
    psd[k].power_db = 10.0 * std::log10(std::max(std::norm(x[src]) / pmax, 1e-30));
  }
  return psd;
}

RxReport demodulate(const std::vector<cdouble>& samples, const LinkConfig& cfg,
                    const Codebook& book,
                    const std::vector<std::size_t>& tx_symbols,
                    bool strict_pilot) {
  cfg.validate();
  if (book.entries.empty()) throw ConfigError("empty codebook");
  if (book.code_length != cfg.code_length) {
    throw ConfigError("codebook length does not match the link config");
  }
  const std::size_t n_sym = tx_symbols.size();
  if (n_sym <= cfg.pilot_count) {
    throw ConfigError("need at least one data symbol after " +
                      std::to_string(cfg.pilot_count) + " pilots");
  }
  for (std::size_t s : tx_symbols) {
    if (s >= book.entries.size()) {
      throw ConfigError("tx symbol index " + std::to_string(s) +
                        " outside codebook");
    }
  }
  const WindowLayout layout = window_layout(cfg, samples.size());
  if (layout.count != n_sym ||
      bit_boundary(cfg, n_sym * layout.bits_per_window) !=
          static_cast<std::int64_t>(samples.size())) {
    throw ConfigError("window/sample mismatch: record holds " +
                      std::to_string(layout.count) + " windows, expected " +
                      std::to_string(n_sym));
  }

  const std::vector<cdouble> bins =
      bin_correlations(samples, cfg, book.scheme.harmonic, layout);

  RxReport rep;
  rep.tx_symbols.assign(tx_symbols.begin() + cfg.pilot_count, tx_symbols.end());
  for (const cdouble& y : bins) rep.mean_bin_power += std::norm(y);
  rep.mean_bin_power /= static_cast<double>(bins.size());

  // Least-squares common gain over the pilot windows.
  cdouble num{0.0, 0.0};
  double den = 0.0;
  for (std::size_t w = 0; w < cfg.pilot_count; ++w) {
    const cdouble c = book.entries[tx_symbols[w]].coefficient;
    num += bins[w] * std::conj(c);
    den += std::norm(c);
  }
  const double ring = book.ring_amplitude;
  if (den <= 0.0 || std::abs(num) / std::max(den, 1e-300) < 1e-12 * ring) {
    if (strict_pilot) {
      throw ConfigError("pilot unusable: no measurable pilot energy");
    }
    rep.pilot_ok = false;
    rep.pilot_gain = {1.0, 0.0};
  } else {
    rep.pilot_gain = num / den;
  }

  const std::size_t n_data = n_sym - cfg.pilot_count;
  rep.constellation.reserve(n_data);
  rep.decisions.reserve(n_data);
  double err_power = 0.0;
  std::size_t errors = 0;
  for (std::size_t w = cfg.pilot_count; w < n_sym; ++w) {
    const cdouble y = bins[w] / rep.pilot_gain;
    rep.constellation.push_back(y);
    std::size_t decided = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < book.entries.size(); ++k) {
      const double d = std::norm(y - book.entries[k].coefficient);
      if (d < best) {
        best = d;
        decided = k;
      }
    }
    rep.decisions.push_back(decided);
    if (decided != tx_symbols[w]) ++errors;
    err_power += std::norm(y - book.entries[tx_symbols[w]].coefficient);
  }
  err_power /= static_cast<double>(n_data);
  rep.evm_pct = 100.0 * std::sqrt(err_power) / ring;
  rep.ser = static_cast<double>(errors) / static_cast<double>(n_data);
  rep.post_filter_snr_db =
      10.0 * std::log10(ring * ring / std::max(err_power, 1e-300));
  rep.spectrum = spectrum_estimate(samples, cfg.sample_rate, cfg.code_period());
  return rep;
}

std::vector<std::size_t> random_symbols(std::size_t count, std::size_t order,
                                        std::uint64_t seed) {
  if (order < 1) throw ConfigError("symbol alphabet must be nonempty");
  GaussianRng rng(seed);
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = static_cast<std::size_t>(rng.next_u64() % order);
  }
  return out;
}

namespace {

ColumnSchedules build_schedules(const std::vector<std::size_t>& symbols,
                                const Codebook& book, const LinkConfig& cfg,
                                long column_shift) {
  std::vector<TimeCode> base;
  base.reserve(symbols.size() * cfg.reps);
  for (std::size_t s : symbols) {
    for (std::size_t r = 0; r < cfg.reps; ++r) {
      base.push_back(book.entries[s].code);
    }
  }
  ColumnSchedules schedules(cfg.geometry.num_columns);
  for (std::size_t k = 0; k < schedules.size(); ++k) {
    const long rot = column_shift * static_cast<long>(k);
    schedules[k].reserve(base.size());
    for (const TimeCode& code : base) {
      schedules[k].push_back(rotate(code, rot));
    }
  }
  return schedules;
}

std::vector<std::size_t> link_symbols(const LinkRunSpec& spec) {
  std::vector<std::size_t> symbols(spec.cfg.pilot_count, 0);
  std::vector<std::size_t> data;
  if (!spec.payload_bits.empty()) {
    data = map_bits_to_symbols(spec.payload_bits, spec.book.scheme.order);
  } else {
    if (spec.data_symbols == 0) {
      throw ConfigError("no payload and no data symbol count configured");
    }
    data = random_symbols(spec.data_symbols, spec.book.scheme.order,
                          GaussianRng::derive(spec.cfg.seed, kStreamPayload));
  }
  symbols.insert(symbols.end(), data.begin(), data.end());
  return symbols;
}

}  // namespace

LinkResult run_link(const LinkRunSpec& spec) {
  spec.cfg.validate();
  if (spec.book.entries.size() != spec.book.scheme.order) {
    throw ConfigError("codebook must carry one entry per symbol");
  }
  if (spec.cfg.harmonic != spec.book.scheme.harmonic) {
    throw ConfigError("link harmonic " + std::to_string(spec.cfg.harmonic) +
                      " does not match codebook harmonic " +
                      std::to_string(spec.book.scheme.harmonic));
  }
  LinkResult result;
  result.tx_symbols = link_symbols(spec);
  const ColumnSchedules schedules =
      build_schedules(result.tx_symbols, spec.book, spec.cfg, spec.column_shift);
  const std::vector<cdouble> clean = synthesize_rx_waveform(schedules, spec.cfg);
  const std::vector<cdouble> received = apply_channel(clean, spec.cfg);
  result.report =
      demodulate(received, spec.cfg, spec.book, result.tx_symbols, true);
  return result;
}

std::vector<SweepPoint> angular_sweep(const SteeringPlan& plan, const Codebook& book,
                                      const LinkConfig& cfg,
                                      const std::vector<double>& angles_deg,
                                      std::size_t data_symbols) {
  cfg.validate();
  if (angles_deg.empty()) throw ConfigError("sweep needs at least one angle");
  for (double a : angles_deg) {
    if (a < -90.0 || a > 90.0) {
      throw ConfigError("sweep angles must lie in [-90, 90] degrees");
    }
  }
  if (plan.harmonic != book.scheme.harmonic) {
    throw ConfigError("steering plan and codebook disagree on the harmonic");
  }
  if (data_symbols == 0) throw ConfigError("sweep needs data symbols");

  std::vector<std::size_t> symbols(cfg.pilot_count, 0);
  {
    const std::vector<std::size_t> data =
        random_symbols(data_symbols, book.scheme.order,
                       GaussianRng::derive(cfg.seed, kStreamPayload));
    symbols.insert(symbols.end(), data.begin(), data.end());
  }
  const ColumnSchedules schedules =
      build_schedules(symbols, book, cfg, plan.shift_per_column);

  // Fix the noise power once, referenced to the coherent steering peak, so
  // off-peak angles see genuinely worse SNR instead of a re-calibrated one.
  double sigma2 = 0.0;
  if (cfg.channel.has_noise() && cfg.channel.kind != ChannelSpec::Kind::ideal) {
    const double peak_amp = book.ring_amplitude *
                            std::abs(cfg.reflection_on - cfg.reflection_off) *
                            static_cast<double>(cfg.geometry.num_columns);
    const double window =
        cfg.samples_per_bit() * static_cast<double>(cfg.reps * cfg.code_length);
    sigma2 = noise_variance(peak_amp * peak_amp, window, cfg.channel.esn0_db);
  }

  std::vector<SweepPoint> sweep;
  sweep.reserve(angles_deg.size());
  double max_power = 0.0;
  for (std::size_t ai = 0; ai < angles_deg.size(); ++ai) {
    LinkConfig acfg = cfg;
    acfg.rx_angle_deg = angles_deg[ai];
    std::vector<cdouble> rx = synthesize_rx_waveform(schedules, acfg);
    if (cfg.channel.kind == ChannelSpec::Kind::multipath) {
      rx = fir_taps_apply(rx, cfg.channel, acfg);
    }
    if (sigma2 > 0.0) {
      add_noise(rx, sigma2, GaussianRng::derive(cfg.seed, kStreamSweepBase + ai));
    }
    SweepPoint pt;
    pt.angle_deg = angles_deg[ai];
    pt.report = demodulate(rx, acfg, book, symbols, false);
    max_power = std::max(max_power, pt.report.mean_bin_power);
    sweep.push_back(std::move(pt));
  }
  if (max_power <= 0.0) max_power = 1.0;
  for (SweepPoint& pt : sweep) {
    pt.power_db =
        10.0 * std::log10(std::max(pt.report.mean_bin_power / max_power, 1e-30));
  }
  return sweep;
}

}  // namespace stcris
