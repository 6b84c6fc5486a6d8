// SPDX-License-Identifier: Apache-2.0
#include "stcris/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stcris/harmonics.hpp"

namespace stcris {

namespace {

double wrap_2pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

long positive_mod(long a, long m) {
  long r = a % m;
  if (r < 0) r += m;
  return r;
}

// Worst unwanted-harmonic ratio of one code, the same quantity
// leakage_metrics reports per symbol.
double code_leakage(const TimeCode& code, long n) {
  const double cn = std::abs(harmonic_coefficient(code, n));
  if (cn <= 0.0) return std::numeric_limits<double>::infinity();
  const double c2n = std::abs(harmonic_coefficient(code, 2 * n));
  const double cadj = std::abs(harmonic_coefficient(code, n + 1));
  return std::max(c2n, cadj) / cn;
}

CodebookQuality measure_quality(const Codebook& book) {
  CodebookQuality q;
  const std::size_t M = book.scheme.order;
  for (std::size_t k = 0; k < M; ++k) {
    const cdouble c = book.entries[k].coefficient;
    const double err =
        std::fabs(wrap_angle(std::arg(c) - book.scheme.target_phase(k)));
    q.max_phase_err_rad = std::max(q.max_phase_err_rad, err);
    q.amp_spread = std::max(q.amp_spread,
                            std::fabs(std::abs(c) / book.ring_amplitude - 1.0));
    q.leakage = std::max(q.leakage,
                         code_leakage(book.entries[k].code, book.scheme.harmonic));
  }
  return q;
}

}  // namespace

double ModulationScheme::target_phase(std::size_t symbol) const {
  return phase_offset +
         2.0 * kPi * static_cast<double>(symbol) / static_cast<double>(order);
}

std::size_t ModulationScheme::bits_per_symbol() const {
  std::size_t b = 0;
  for (std::size_t m = order; m > 1; m >>= 1) ++b;
  return b;
}

void ModulationScheme::validate() const {
  if (order < 2 || (order & (order - 1)) != 0) {
    throw ConfigError("modulation order must be a power of two >= 2, got " +
                      std::to_string(order));
  }
  if (!std::isfinite(phase_offset)) {
    throw ConfigError("phase offset must be finite");
  }
}

ModulationScheme scheme_by_name(const std::string& name) {
  ModulationScheme s;
  if (name == "bpsk") s.order = 2;
  else if (name == "qpsk") s.order = 4;
  else if (name == "8psk") s.order = 8;
  else if (name == "16psk") s.order = 16;
  else throw ConfigError("unknown scheme '" + name +
                         "' (expected bpsk, qpsk, 8psk or 16psk)");
  return s;
}

Codebook design_by_shift(const TimeCode& base, const ModulationScheme& scheme) {
  scheme.validate();
  const long L = static_cast<long>(base.length());
  const long M = static_cast<long>(scheme.order);
  const long n = scheme.harmonic;

  const cdouble c_base = harmonic_coefficient(base, n);
  if (std::abs(c_base) <= 1e-9) {
    throw ConfigError("zero base coefficient: code " + base.format() +
                      " carries no harmonic " + std::to_string(n));
  }

  // A shift by s multiplies the harmonic-n coefficient by a phase of
  // 2*pi*(n*s mod L)/L. That step generates the full M-point grid exactly
  // when it equals 2*pi*j/M for some j coprime with M.
  long step = -1;
  long j = 0;
  for (long s = 1; s < L; ++s) {
    const long num = positive_mod(n * s, L);
    if (num == 0) continue;
    if ((num * M) % L != 0) continue;
    const long cand = (num * M) / L;
    if (std::gcd(cand, M) != 1) continue;
    step = s;
    j = cand;
    break;
  }
  if (step < 0) {
    throw ConfigError("scheme unreachable by shifts for (L=" + std::to_string(L) +
                      ", n=" + std::to_string(n) + ", M=" + std::to_string(M) + ")");
  }
  long j_inv = 1;
  while (positive_mod(j * j_inv, M) != 1) ++j_inv;

  Codebook book;
  book.scheme = scheme;
  book.scheme.phase_offset = wrap_2pi(std::arg(c_base));  // realized anchor
  book.code_length = base.length();
  book.bit_duration = base.bit_duration;
  book.ring_amplitude = std::abs(c_base);
  book.entries.resize(scheme.order);
  for (long k = 0; k < M; ++k) {
    // Symbol k must sit j steps * k ... inverted: rotation count
    // r = ((j^-1 * k) mod M) * step advances the phase by exactly 2*pi*k/M.
    const long r = positive_mod(j_inv * k, M) * step;
    CodebookEntry& e = book.entries[static_cast<std::size_t>(k)];
    e.symbol = static_cast<std::size_t>(k);
    e.code = rotate(base, r);
    e.coefficient = harmonic_coefficient(e.code, n);
  }
  book.quality = measure_quality(book);
  return book;
}

Codebook search_codebook(std::size_t code_length, const ModulationScheme& scheme,
                         double amp_tol, double phase_tol, Alphabet alphabet,
                         double bit_duration, std::uint64_t cap) {
  scheme.validate();
  if (!(amp_tol > 0.0) || amp_tol > 0.5) {
    throw ConfigError("amplitude tolerance must be in (0, 0.5]");
  }
  const std::size_t M = scheme.order;
  const double slot_width = kPi / static_cast<double>(M);
  if (!(phase_tol > 0.0) || phase_tol > slot_width + 1e-15) {
    throw ConfigError("phase tolerance must be in (0, pi/M]");
  }

  const ConstellationMap map =
      constellation_map(code_length, scheme.harmonic, alphabet, bit_duration, cap);
  const std::uint64_t count = map.coefficients.size();

  struct Candidate {
    double amp;
    double err;
    std::uint64_t index;
  };
  std::vector<std::vector<Candidate>> slots(M);
  std::vector<double> best_err(M, std::numeric_limits<double>::infinity());

  const double spacing = 2.0 * kPi / static_cast<double>(M);
  for (std::uint64_t i = 0; i < count; ++i) {
    const cdouble z = map.coefficients[i];
    const double amp = std::abs(z);
    if (amp <= 0.0) continue;
    const double phi = std::arg(z);
    // A code can serve at most the two slots bracketing its phase.
    const double pos = (phi - scheme.phase_offset) / spacing;
    const long lo = static_cast<long>(std::floor(pos));
    for (long cand = lo; cand <= lo + 1; ++cand) {
      const std::size_t k =
          static_cast<std::size_t>(positive_mod(cand, static_cast<long>(M)));
      const double err =
          std::fabs(wrap_angle(phi - scheme.target_phase(k)));
      best_err[k] = std::min(best_err[k], err);
      if (err <= phase_tol) {
        slots[k].push_back({amp, err, i});
      }
    }
  }

  // Feasibility is monotone in A within each candidate's window
  // [amp/(1+t), amp/(1-t)], so the supremum of feasible ring amplitudes is
  // some candidate's amp/(1-t). Scan those descending.
  std::vector<std::vector<double>> slot_amps(M);
  std::vector<double> ring_candidates;
  for (std::size_t k = 0; k < M; ++k) {
    if (slots[k].empty()) {
      std::string msg = "no feasible ring: empty phase slots; best achievable "
                        "phase error per slot (rad):";
      for (std::size_t q = 0; q < M; ++q) {
        msg += " [" + std::to_string(q) + "] " +
               (std::isfinite(best_err[q]) ? std::to_string(best_err[q]) : "inf");
      }
      throw ConfigError(msg);
    }
    slot_amps[k].reserve(slots[k].size());
    for (const Candidate& c : slots[k]) {
      slot_amps[k].push_back(c.amp);
      ring_candidates.push_back(c.amp / (1.0 - amp_tol));
    }
    std::sort(slot_amps[k].begin(), slot_amps[k].end());
  }
  std::sort(ring_candidates.begin(), ring_candidates.end(), std::greater<>());
  ring_candidates.erase(
      std::unique(ring_candidates.begin(), ring_candidates.end()),
      ring_candidates.end());

  auto slot_has_amp_in = [&](std::size_t k, double lo, double hi) {
    const auto& amps = slot_amps[k];
    auto it = std::lower_bound(amps.begin(), amps.end(), lo);
    return it != amps.end() && *it <= hi;
  };

  auto try_select = [&](double ring) -> std::vector<Candidate> {
    const double lo = ring * (1.0 - amp_tol);
    const double hi = ring * (1.0 + amp_tol);
    std::vector<Candidate> picks;
    picks.reserve(M);
    std::vector<std::uint64_t> used;
    for (std::size_t k = 0; k < M; ++k) {
      std::vector<Candidate> window;
      for (const Candidate& c : slots[k]) {
        if (c.amp >= lo && c.amp <= hi) window.push_back(c);
      }
      if (window.empty()) return {};
      std::vector<double> leak(window.size());
      for (std::size_t w = 0; w < window.size(); ++w) {
        leak[w] = code_leakage(
            code_from_index(code_length, alphabet, window[w].index, bit_duration),
            scheme.harmonic);
      }
      std::vector<std::size_t> order(window.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (window[a].err != window[b].err) return window[a].err < window[b].err;
        if (leak[a] != leak[b]) return leak[a] < leak[b];
        return window[a].index < window[b].index;
      });
      bool placed = false;
      for (std::size_t w : order) {
        if (std::find(used.begin(), used.end(), window[w].index) != used.end()) {
          continue;  // a code cannot serve two symbols
        }
        picks.push_back(window[w]);
        used.push_back(window[w].index);
        placed = true;
        break;
      }
      if (!placed) return {};
    }
    return picks;
  };

  for (double ring : ring_candidates) {
    bool plausible = true;
    for (std::size_t k = 0; k < M; ++k) {
      if (!slot_has_amp_in(k, ring * (1.0 - amp_tol), ring * (1.0 + amp_tol))) {
        plausible = false;
        break;
      }
    }
    if (!plausible) continue;
    std::vector<Candidate> picks = try_select(ring);
    if (picks.empty()) continue;

    Codebook book;
    book.scheme = scheme;
    book.code_length = code_length;
    book.bit_duration = bit_duration;
    book.entries.resize(M);
    double amp_min = std::numeric_limits<double>::infinity();
    double amp_max = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
      CodebookEntry& e = book.entries[k];
      e.symbol = k;
      e.code = code_from_index(code_length, alphabet, picks[k].index, bit_duration);
      e.coefficient = harmonic_coefficient(e.code, scheme.harmonic);
      amp_min = std::min(amp_min, std::abs(e.coefficient));
      amp_max = std::max(amp_max, std::abs(e.coefficient));
    }
    // `ring` was only the feasibility parameter and can sit amp_tol above
    // every selected amplitude. Report the realized ring instead: the
    // amplitude minimizing the worst relative deviation of the entries,
    // which also keeps the reported spread within amp_tol.
    book.ring_amplitude = 2.0 * amp_min * amp_max / (amp_min + amp_max);
    book.quality = measure_quality(book);
    return book;
  }

  std::string msg = "no feasible ring at amp_tol " + std::to_string(amp_tol) +
                    ", phase_tol " + std::to_string(phase_tol) +
                    "; best achievable phase error per slot (rad):";
  for (std::size_t q = 0; q < M; ++q) {
    msg += " [" + std::to_string(q) + "] " +
           (std::isfinite(best_err[q]) ? std::to_string(best_err[q]) : "inf");
  }
  throw ConfigError(msg);
}

LeakageReport leakage_metrics(const Codebook& book, double threshold) {
  LeakageReport rep;
  rep.threshold = threshold;
  const long n = book.scheme.harmonic;
  for (const CodebookEntry& e : book.entries) {
    LeakageReport::PerSymbol p;
    p.symbol = e.symbol;
    const double cn = std::abs(harmonic_coefficient(e.code, n));
    if (cn <= 0.0) {
      throw ConfigError("entry for symbol " + std::to_string(e.symbol) +
                        " has zero coefficient in harmonic " + std::to_string(n));
    }
    p.second_harmonic = std::abs(harmonic_coefficient(e.code, 2 * n)) / cn;
    p.adjacent = std::abs(harmonic_coefficient(e.code, n + 1)) / cn;
    const double worst = std::max(p.second_harmonic, p.adjacent);
    p.flagged = worst > threshold;
    rep.max_ratio = std::max(rep.max_ratio, worst);
    rep.symbols.push_back(p);
  }
  return rep;
}

std::size_t gray_encode(std::size_t k) { return k ^ (k >> 1); }

std::size_t gray_decode(std::size_t g) {
  std::size_t k = g;
  for (std::size_t shift = 1; shift < 8 * sizeof(std::size_t); shift <<= 1) {
    k ^= k >> shift;
  }
  return k;
}

std::vector<std::size_t> map_bits_to_symbols(const std::string& payload,
                                             std::size_t order) {
  if (order < 2 || (order & (order - 1)) != 0) {
    throw ConfigError("modulation order must be a power of two >= 2");
  }
  std::size_t bits = 0;
  for (std::size_t m = order; m > 1; m >>= 1) ++bits;
  if (payload.empty() || payload.size() % bits != 0) {
    throw ConfigError("payload of " + std::to_string(payload.size()) +
                      " bits is not a positive multiple of " +
                      std::to_string(bits) + " bits per symbol");
  }
  std::vector<std::size_t> symbols;
  symbols.reserve(payload.size() / bits);
  for (std::size_t i = 0; i < payload.size(); i += bits) {
    std::size_t v = 0;
    for (std::size_t b = 0; b < bits; ++b) {
      const char c = payload[i + b];
      if (c != '0' && c != '1') {
        throw ConfigError(std::string("payload must be binary, got '") + c +
                          "' at position " + std::to_string(i + b + 1));
      }
      v = (v << 1) | static_cast<std::size_t>(c - '0');
    }
    symbols.push_back(gray_decode(v));
  }
  return symbols;
}

std::vector<TimeCode> map_bits_to_schedule(const Codebook& book,
                                           const std::string& payload,
                                           std::size_t reps) {
  if (reps < 1) throw ConfigError("repetitions per symbol must be >= 1");
  const std::vector<std::size_t> symbols =
      map_bits_to_symbols(payload, book.scheme.order);
  std::vector<TimeCode> schedule;
  schedule.reserve(symbols.size() * reps);
  for (std::size_t s : symbols) {
    for (std::size_t r = 0; r < reps; ++r) {
      schedule.push_back(book.entries[s].code);
    }
  }
  return schedule;
}

}  // namespace stcris
