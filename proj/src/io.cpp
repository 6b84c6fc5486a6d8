// SPDX-License-Identifier: Apache-2.0
#include "stcris/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace stcris::io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

cdouble complex_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(std::string(what) + " must be a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(const cdouble& z) { return json::array({z.real(), z.imag()}); }

Alphabet alphabet_by_name(const std::string& name) {
  if (name == "binary") return Alphabet::binary;
  if (name == "ternary") return Alphabet::ternary;
  throw ConfigError("unknown alphabet '" + name + "' (expected binary or ternary)");
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const char* where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError(std::string("unknown key '") + key + "' in " + where);
    }
  }
}

}  // namespace

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string spectrum_csv(const std::vector<HarmonicPoint>& points) {
  std::string out = "n,freq_hz,re,im,mag,phase_deg\n";
  for (const HarmonicPoint& p : points) {
    out += std::to_string(p.order);
    out += ',';
    out += format_g12(p.frequency_hz);
    out += ',';
    out += format_g12(p.coefficient.real());
    out += ',';
    out += format_g12(p.coefficient.imag());
    out += ',';
    out += format_g12(std::abs(p.coefficient));
    out += ',';
    out += format_g12(rad_to_deg(std::arg(p.coefficient)));
    out += '\n';
  }
  return out;
}

std::string map_csv(const ConstellationMap& map) {
  std::string out = "code,re,im,mag,phase_deg\n";
  for (std::uint64_t i = 0; i < map.coefficients.size(); ++i) {
    const cdouble& z = map.coefficients[i];
    out += map.code_text(i);
    out += ',';
    out += format_g12(z.real());
    out += ',';
    out += format_g12(z.imag());
    out += ',';
    out += format_g12(std::abs(z));
    out += ',';
    out += format_g12(rad_to_deg(std::arg(z)));
    out += '\n';
  }
  return out;
}

std::string pattern_csv(const Pattern& pattern) {
  std::string out = "theta_deg,re,im,mag_db\n";
  for (std::size_t i = 0; i < pattern.theta_deg.size(); ++i) {
    out += format_g12(pattern.theta_deg[i]);
    out += ',';
    out += format_g12(pattern.values[i].real());
    out += ',';
    out += format_g12(pattern.values[i].imag());
    out += ',';
    out += format_g12(pattern.mag_db[i]);
    out += '\n';
  }
  return out;
}

std::string psd_csv(const std::vector<PsdPoint>& psd) {
  std::string out = "freq_hz,power_db\n";
  for (const PsdPoint& p : psd) {
    out += format_g12(p.freq_hz);
    out += ',';
    out += format_g12(p.power_db);
    out += '\n';
  }
  return out;
}

std::string constellation_csv(const RxReport& report) {
  std::string out = "symbol_index,re,im,decided,truth\n";
  for (std::size_t i = 0; i < report.constellation.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_g12(report.constellation[i].real());
    out += ',';
    out += format_g12(report.constellation[i].imag());
    out += ',';
    out += std::to_string(report.decisions[i]);
    out += ',';
    out += std::to_string(report.tx_symbols[i]);
    out += '\n';
  }
  return out;
}

ordered_json codebook_to_json(const Codebook& book) {
  ordered_json j;
  j["scheme"] = {{"M", book.scheme.order},
                 {"n", book.scheme.harmonic},
                 {"L", book.code_length},
                 {"phase_offset", book.scheme.phase_offset}};
  j["ring_amplitude"] = book.ring_amplitude;
  j["tau"] = book.bit_duration;
  ordered_json entries = ordered_json::array();
  for (const CodebookEntry& e : book.entries) {
    ordered_json je;
    je["symbol"] = e.symbol;
    je["code"] = e.code.format();
    je["coeff"] = {{"re", e.coefficient.real()}, {"im", e.coefficient.imag()}};
    entries.push_back(je);
  }
  j["entries"] = entries;
  j["quality"] = {{"max_phase_err_rad", book.quality.max_phase_err_rad},
                  {"amp_spread", book.quality.amp_spread},
                  {"leakage", book.quality.leakage}};
  return j;
}

Codebook codebook_from_json(const json& j) {
  try {
    Codebook book;
    const json& scheme = j.at("scheme");
    book.scheme.order = scheme.at("M").get<std::size_t>();
    book.scheme.harmonic = scheme.at("n").get<long>();
    book.code_length = scheme.at("L").get<std::size_t>();
    book.scheme.phase_offset = scheme.value("phase_offset", 0.0);
    book.scheme.validate();
    book.ring_amplitude = j.at("ring_amplitude").get<double>();
    if (!j.contains("tau")) {
      throw ConfigError("codebook file lacks the 'tau' key (bit duration)");
    }
    book.bit_duration = j.at("tau").get<double>();
    const json& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != book.scheme.order) {
      throw ConfigError("codebook must carry exactly M entries");
    }
    book.entries.resize(book.scheme.order);
    std::vector<bool> seen(book.scheme.order, false);
    for (const json& je : entries) {
      const std::size_t sym = je.at("symbol").get<std::size_t>();
      if (sym >= book.scheme.order || seen[sym]) {
        throw ConfigError("codebook symbols must be distinct and in 0..M-1");
      }
      seen[sym] = true;
      CodebookEntry& e = book.entries[sym];
      e.symbol = sym;
      const std::string text = je.at("code").get<std::string>();
      const Alphabet alpha =
          text.find_first_of("+-") == std::string::npos ? Alphabet::binary
                                                        : Alphabet::ternary;
      e.code = parse_code(text, book.bit_duration, alpha);
      if (e.code.length() != book.code_length) {
        throw ConfigError("entry code length does not match scheme L");
      }
      e.coefficient = {je.at("coeff").at("re").get<double>(),
                       je.at("coeff").at("im").get<double>()};
    }
    if (j.contains("quality")) {
      const json& q = j.at("quality");
      book.quality.max_phase_err_rad = q.value("max_phase_err_rad", 0.0);
      book.quality.amp_spread = q.value("amp_spread", 0.0);
      book.quality.leakage = q.value("leakage", 0.0);
    }
    return book;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad codebook JSON: ") + e.what());
  }
}

std::string schedule_text(const ColumnSchedules& schedules, double bit_duration,
                          std::size_t reps, long shift) {
  if (schedules.empty() || schedules[0].empty()) {
    throw ConfigError("empty schedule");
  }
  const std::size_t n_cols = schedules.size();
  const std::size_t entries = schedules[0].size();
  const std::size_t length = schedules[0][0].length();

  std::string out;
  out += "# stcris-schedule v1\n";
  out += "# tau=" + format_g12(bit_duration) + "\n";
  out += "# L=" + std::to_string(length) + "\n";
  out += "# reps=" + std::to_string(reps) + "\n";
  out += "# shift=" + std::to_string(shift) + "\n";
  out += "# columns=" + std::to_string(n_cols) + "\n";
  out += "# symbols=" + std::to_string(entries / std::max<std::size_t>(reps, 1)) +
         "\n";
  std::vector<std::string> col_text(n_cols);
  for (std::size_t e = 0; e < entries; ++e) {
    for (std::size_t k = 0; k < n_cols; ++k) {
      col_text[k] = schedules[k][e].format();
    }
    for (std::size_t b = 0; b < length; ++b) {
      std::string line;
      for (std::size_t k = 0; k < n_cols; ++k) {
        if (k > 0 && k % 8 == 0) line += ' ';
        line += col_text[k][b];
      }
      out += line;
      out += '\n';
    }
  }
  return out;
}

std::string LinkJob::default_base_code() const {
  const std::size_t L = cfg.code_length;
  return std::string(L - L / 2, '0') + std::string(L / 2, '1');
}

LinkJob link_job_from_json(const json& j) {
  try {
    reject_unknown_keys(
        j,
        {"L", "tau", "f_offset", "sample_rate", "harmonic", "reflection_states",
         "channel", "geometry", "rx_angle_deg", "reps", "pilot_count", "seed",
         "scheme", "method", "alphabet", "base_code", "phase_offset", "amp_tol",
         "phase_tol", "column_shift", "data_symbols", "payload_hex"},
        "link config");
    LinkJob job;
    LinkConfig& cfg = job.cfg;
    cfg.code_length = j.value("L", std::size_t{8});
    cfg.bit_duration = j.value("tau", 3.74e-3);
    cfg.f_offset = j.value("f_offset", 500e3);
    if (!j.contains("sample_rate")) {
      throw ConfigError("link config needs a sample_rate");
    }
    cfg.sample_rate = j.at("sample_rate").get<double>();
    cfg.harmonic = j.value("harmonic", 1L);
    if (j.contains("reflection_states")) {
      const json& r = j.at("reflection_states");
      reject_unknown_keys(r, {"off", "on"}, "reflection_states");
      if (r.contains("off")) cfg.reflection_off = complex_from_json(r.at("off"), "off state");
      if (r.contains("on")) cfg.reflection_on = complex_from_json(r.at("on"), "on state");
    }
    if (j.contains("channel")) {
      const json& c = j.at("channel");
      reject_unknown_keys(c, {"kind", "esn0_db", "taps"}, "channel");
      const std::string kind = c.value("kind", "ideal");
      if (kind == "ideal") {
        cfg.channel.kind = ChannelSpec::Kind::ideal;
      } else if (kind == "awgn") {
        cfg.channel.kind = ChannelSpec::Kind::awgn;
        cfg.channel.esn0_db =
            c.value("esn0_db", std::numeric_limits<double>::infinity());
      } else if (kind == "office") {
        cfg.channel = office_multipath(cfg.bit_duration);
        cfg.channel.esn0_db =
            c.value("esn0_db", std::numeric_limits<double>::infinity());
      } else if (kind == "multipath") {
        cfg.channel.kind = ChannelSpec::Kind::multipath;
        cfg.channel.esn0_db =
            c.value("esn0_db", std::numeric_limits<double>::infinity());
        if (!c.contains("taps")) {
          throw ConfigError("multipath channel needs a taps array");
        }
        for (const json& t : c.at("taps")) {
          reject_unknown_keys(t, {"gain", "delay_s"}, "channel tap");
          ChannelTap tap;
          tap.gain = complex_from_json(t.at("gain"), "tap gain");
          tap.delay_s = t.at("delay_s").get<double>();
          cfg.channel.taps.push_back(tap);
        }
      } else {
        throw ConfigError("unknown channel kind '" + kind + "'");
      }
    }
    if (j.contains("geometry")) {
      const json& g = j.at("geometry");
      reject_unknown_keys(g, {"columns", "spacing_wl"}, "geometry");
      cfg.geometry.num_columns = g.value("columns", std::size_t{8});
      cfg.geometry.spacing_wl = g.value("spacing_wl", 0.5);
    }
    cfg.rx_angle_deg = j.value("rx_angle_deg", 0.0);
    cfg.reps = j.value("reps", std::size_t{1});
    cfg.pilot_count = j.value("pilot_count", std::size_t{1});
    cfg.seed = j.value("seed", std::uint64_t{1});

    job.scheme = j.value("scheme", std::string("qpsk"));
    job.method = j.value("method", std::string("shift"));
    job.alphabet = j.value("alphabet", std::string("binary"));
    job.base_code = j.value("base_code", std::string());
    if (job.base_code.empty()) job.base_code = job.default_base_code();
    job.phase_offset = j.value("phase_offset", 0.0);
    job.amp_tol = j.value("amp_tol", 0.05);
    job.phase_tol = j.value("phase_tol", 0.0);
    if (job.phase_tol == 0.0) {
      const double M = static_cast<double>(scheme_by_name(job.scheme).order);
      job.phase_tol = kPi / (4.0 * M);
    }
    job.column_shift = j.value("column_shift", 0L);
    job.data_symbols = j.value("data_symbols", std::size_t{256});
    job.payload_hex = j.value("payload_hex", std::string());
    return job;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad link config JSON: ") + e.what());
  }
}

ordered_json link_job_to_json(const LinkJob& job) {
  const LinkConfig& cfg = job.cfg;
  ordered_json j;
  j["L"] = cfg.code_length;
  j["tau"] = cfg.bit_duration;
  j["f_offset"] = cfg.f_offset;
  j["sample_rate"] = cfg.sample_rate;
  j["harmonic"] = cfg.harmonic;
  j["reflection_states"] = {{"off", complex_to_json(cfg.reflection_off)},
                            {"on", complex_to_json(cfg.reflection_on)}};
  ordered_json ch;
  switch (cfg.channel.kind) {
    case ChannelSpec::Kind::ideal:
      ch["kind"] = "ideal";
      break;
    case ChannelSpec::Kind::awgn:
      ch["kind"] = "awgn";
      if (cfg.channel.has_noise()) ch["esn0_db"] = cfg.channel.esn0_db;
      break;
    case ChannelSpec::Kind::multipath: {
      ch["kind"] = "multipath";
      ordered_json taps = ordered_json::array();
      for (const ChannelTap& t : cfg.channel.taps) {
        taps.push_back({{"gain", complex_to_json(t.gain)}, {"delay_s", t.delay_s}});
      }
      ch["taps"] = taps;
      if (cfg.channel.has_noise()) ch["esn0_db"] = cfg.channel.esn0_db;
      break;
    }
  }
  j["channel"] = ch;
  j["geometry"] = {{"columns", cfg.geometry.num_columns},
                   {"spacing_wl", cfg.geometry.spacing_wl}};
  j["rx_angle_deg"] = cfg.rx_angle_deg;
  j["reps"] = cfg.reps;
  j["pilot_count"] = cfg.pilot_count;
  j["seed"] = cfg.seed;
  j["scheme"] = job.scheme;
  j["method"] = job.method;
  j["alphabet"] = job.alphabet;
  j["base_code"] = job.base_code;
  j["phase_offset"] = job.phase_offset;
  j["amp_tol"] = job.amp_tol;
  j["phase_tol"] = job.phase_tol;
  j["column_shift"] = job.column_shift;
  j["data_symbols"] = job.data_symbols;
  j["payload_hex"] = job.payload_hex;
  return j;
}

Codebook build_job_codebook(const LinkJob& job) {
  ModulationScheme scheme = scheme_by_name(job.scheme);
  scheme.harmonic = job.cfg.harmonic;
  scheme.phase_offset = job.phase_offset;
  const Alphabet alpha = alphabet_by_name(job.alphabet);
  if (job.method == "shift") {
    const TimeCode base = parse_code(job.base_code, job.cfg.bit_duration, alpha);
    if (base.length() != job.cfg.code_length) {
      throw ConfigError("base code length does not match L");
    }
    return design_by_shift(base, scheme);
  }
  if (job.method == "search") {
    return search_codebook(job.cfg.code_length, scheme, job.amp_tol, job.phase_tol,
                           alpha, job.cfg.bit_duration);
  }
  throw ConfigError("unknown codebook method '" + job.method +
                    "' (expected shift or search)");
}

ordered_json report_to_json(const RxReport& report) {
  std::size_t errors = 0;
  for (std::size_t i = 0; i < report.decisions.size(); ++i) {
    if (report.decisions[i] != report.tx_symbols[i]) ++errors;
  }
  ordered_json j;
  j["data_symbols"] = report.constellation.size();
  j["symbol_errors"] = errors;
  j["ser"] = report.ser;
  j["evm_pct"] = report.evm_pct;
  j["post_filter_snr_db"] = report.post_filter_snr_db;
  j["mean_bin_power"] = report.mean_bin_power;
  j["pilot"] = {{"re", report.pilot_gain.real()},
                {"im", report.pilot_gain.imag()},
                {"ok", report.pilot_ok}};
  return j;
}

std::string bits_from_hex(const std::string& hex) {
  if (hex.empty()) throw ConfigError("empty payload");
  std::string bits;
  bits.reserve(hex.size() * 4);
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const char c = hex[i];
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ConfigError(std::string("invalid hex digit '") + c +
                           "' at position " + std::to_string(i + 1));
    for (int b = 3; b >= 0; --b) {
      bits += ((v >> b) & 1) ? '1' : '0';
    }
  }
  return bits;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
  if (!out) throw ConfigError("failed writing " + path);
}

}  // namespace stcris::io
