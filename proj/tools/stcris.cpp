// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: code spectra, constellation maps, codebook
// design, steering patterns, link simulation, schedule export, and
// manifest replay. Exit codes: 0 ok, 2 usage/config error, 1 internal.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "stcris/array.hpp"
#include "stcris/codebook.hpp"
#include "stcris/codes.hpp"
#include "stcris/harmonics.hpp"
#include "stcris/io.hpp"
#include "stcris/kernels.hpp"
#include "stcris/linksim.hpp"
#include "stcris/manifest.hpp"
#include "stcris/types.hpp"
#include "stcris/version.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

stcris::Alphabet detect_alphabet(const std::string& text) {
  return text.find_first_of("+-") == std::string::npos
             ? stcris::Alphabet::binary
             : stcris::Alphabet::ternary;
}

stcris::Alphabet alphabet_flag(const std::string& name) {
  if (name == "binary") return stcris::Alphabet::binary;
  if (name == "ternary") return stcris::Alphabet::ternary;
  throw stcris::ConfigError("unknown alphabet '" + name +
                            "' (expected binary or ternary)");
}

std::uint64_t env_seed_override(std::uint64_t fallback) {
  const char* env = std::getenv("STC_SEED");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') {
    throw stcris::ConfigError("STC_SEED must be an unsigned integer");
  }
  return static_cast<std::uint64_t>(v);
}

void ensure_parent_dir(const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

// ---- command bodies, shared between direct invocation and replay --------

std::string run_spectrum(const json& cfg, const std::string& out_file) {
  const std::string text = cfg.at("code").get<std::string>();
  const double tau = cfg.at("tau").get<double>();
  const long nmax = cfg.at("nmax").get<long>();
  const stcris::TimeCode code = stcris::parse_code(text, tau, detect_alphabet(text));
  const auto points = stcris::spectrum(code, nmax);
  ensure_parent_dir(out_file);
  stcris::io::write_text_file(out_file, stcris::io::spectrum_csv(points));
  return "wrote " + std::to_string(points.size()) + " harmonics (spacing " +
         stcris::io::format_g12(stcris::harmonic_frequency(1, code.length(), tau)) +
         " Hz) to " + out_file;
}

std::string run_map(const json& cfg, const std::string& out_file) {
  const std::size_t length = cfg.at("length").get<std::size_t>();
  const long harmonic = cfg.at("harmonic").get<long>();
  const stcris::Alphabet alpha = alphabet_flag(cfg.at("alphabet").get<std::string>());
  const std::uint64_t cap = cfg.at("cap").get<std::uint64_t>();
  const double tau = cfg.at("tau").get<double>();
  const auto map = stcris::constellation_map(length, harmonic, alpha, tau, cap);
  ensure_parent_dir(out_file);
  stcris::io::write_text_file(out_file, stcris::io::map_csv(map));
  return "wrote " + std::to_string(map.coefficients.size()) + " codes to " + out_file;
}

std::string run_codebook(const json& cfg, const std::string& out_file) {
  stcris::ModulationScheme scheme =
      stcris::scheme_by_name(cfg.at("scheme").get<std::string>());
  scheme.harmonic = cfg.at("harmonic").get<long>();
  scheme.phase_offset = cfg.at("phase_offset").get<double>();
  const std::size_t length = cfg.at("length").get<std::size_t>();
  const double tau = cfg.at("tau").get<double>();
  const std::string method = cfg.at("method").get<std::string>();
  const stcris::Alphabet alpha = alphabet_flag(cfg.at("alphabet").get<std::string>());

  stcris::Codebook book;
  if (method == "shift") {
    const std::string base_text = cfg.at("base_code").get<std::string>();
    const stcris::TimeCode base = stcris::parse_code(base_text, tau, alpha);
    if (base.length() != length) {
      throw stcris::ConfigError("base code length does not match --length");
    }
    book = stcris::design_by_shift(base, scheme);
  } else if (method == "search") {
    book = stcris::search_codebook(length, scheme, cfg.at("amp_tol").get<double>(),
                                   cfg.at("phase_tol").get<double>(), alpha, tau);
  } else {
    throw stcris::ConfigError("unknown method '" + method +
                              "' (expected shift or search)");
  }
  ensure_parent_dir(out_file);
  stcris::io::write_text_file(out_file,
                              stcris::io::codebook_to_json(book).dump(2) + "\n");
  return "wrote " + std::to_string(book.entries.size()) + "-entry codebook (ring " +
         stcris::io::format_g12(book.ring_amplitude) + ") to " + out_file;
}

std::string run_steer(const json& cfg, const std::string& out_file) {
  const std::size_t length = cfg.at("length").get<std::size_t>();
  const long harmonic = cfg.at("harmonic").get<long>();
  const long shift = cfg.at("shift").get<long>();
  const double tau = cfg.at("tau").get<double>();
  const std::string base_text = cfg.at("base_code").get<std::string>();

  const stcris::SteeringAngle predicted =
      stcris::steering_angle(harmonic, shift, length);
  if (predicted.endfire) {
    std::cerr << "warning: endfire steering (|2ns/L| = 1), main lobe at the "
                 "array plane\n";
  }

  stcris::SteeringPlan plan;
  plan.base = stcris::parse_code(base_text, tau, detect_alphabet(base_text));
  if (plan.base.length() != length) {
    throw stcris::ConfigError("base code length does not match --length");
  }
  plan.shift_per_column = shift;
  plan.harmonic = harmonic;

  stcris::ArrayGeometry geom;
  geom.num_columns = cfg.at("columns").get<std::size_t>();
  geom.spacing_wl = cfg.at("spacing_wl").get<double>();
  const double step = cfg.at("grid_step").get<double>();
  const bool cosine = cfg.at("cosine_element").get<bool>();

  const auto coeffs = stcris::column_coefficients(plan, geom.num_columns);
  const auto grid = stcris::angle_grid(-90.0, 90.0, step);
  const auto pattern = stcris::array_factor(coeffs, geom, grid, cosine);
  const auto peak = stcris::find_peak(pattern);
  ensure_parent_dir(out_file);
  stcris::io::write_text_file(out_file, stcris::io::pattern_csv(pattern));
  return "predicted_deg=" + stcris::io::format_g12(predicted.degrees) +
         " peak_deg=" + stcris::io::format_g12(peak.theta_deg) +
         " peak_db=" + stcris::io::format_g12(peak.mag_db) + " out=" + out_file;
}

std::string run_linksim(const json& cfg, const std::string& out_dir) {
  const stcris::io::LinkJob job = stcris::io::link_job_from_json(cfg);
  const stcris::Codebook book = stcris::io::build_job_codebook(job);

  stcris::LinkRunSpec spec;
  spec.cfg = job.cfg;
  spec.book = book;
  spec.column_shift = job.column_shift;
  spec.data_symbols = job.data_symbols;
  if (!job.payload_hex.empty()) {
    spec.payload_bits = stcris::io::bits_from_hex(job.payload_hex);
  }
  const stcris::LinkResult result = stcris::run_link(spec);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  stcris::io::write_text_file(
      (dir / "report.json").string(),
      stcris::io::report_to_json(result.report).dump(2) + "\n");
  stcris::io::write_text_file((dir / "spectrum.csv").string(),
                              stcris::io::psd_csv(result.report.spectrum));
  stcris::io::write_text_file((dir / "constellation.csv").string(),
                              stcris::io::constellation_csv(result.report));
  return "ser=" + stcris::io::format_g12(result.report.ser) +
         " evm_pct=" + stcris::io::format_g12(result.report.evm_pct) +
         " data_symbols=" + std::to_string(result.report.constellation.size()) +
         " out=" + out_dir;
}

std::string run_export_schedule(const json& cfg, const std::string& out_file) {
  const stcris::Codebook book = stcris::io::codebook_from_json(cfg.at("codebook"));
  const std::string payload_hex = cfg.at("payload_hex").get<std::string>();
  const std::size_t reps = cfg.at("reps").get<std::size_t>();
  const std::size_t columns = cfg.at("columns").get<std::size_t>();
  const long shift = cfg.at("shift").get<long>();
  if (columns < 1) throw stcris::ConfigError("need at least one column");

  const std::string bits = stcris::io::bits_from_hex(payload_hex);
  const std::vector<stcris::TimeCode> base =
      stcris::map_bits_to_schedule(book, bits, reps);
  stcris::ColumnSchedules schedules(columns);
  for (std::size_t k = 0; k < columns; ++k) {
    schedules[k].reserve(base.size());
    for (const stcris::TimeCode& code : base) {
      schedules[k].push_back(stcris::rotate(code, shift * static_cast<long>(k)));
    }
  }
  ensure_parent_dir(out_file);
  stcris::io::write_text_file(
      out_file,
      stcris::io::schedule_text(schedules, book.bit_duration, reps, shift));
  return "wrote " + std::to_string(base.size() * book.code_length) +
         " bit intervals x " + std::to_string(columns) + " columns to " + out_file;
}

void emit_manifest_for_file(const std::string& command, const ordered_json& cfg,
                            const std::string& out_file) {
  stcris::RunManifest m;
  m.command = command;
  m.version = stcris::kVersion;
  m.config = cfg;
  m.outputs = {fs::path(out_file).filename().string()};
  stcris::write_manifest(out_file + ".manifest.json", m);
}

std::string run_replay(const std::string& manifest_path, const std::string& out_dir) {
  const stcris::RunManifest m = stcris::read_manifest(manifest_path);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  std::string summary;
  if (m.command == "linksim") {
    summary = run_linksim(m.config, out_dir);
    stcris::write_manifest((dir / "manifest.json").string(), m);
  } else {
    if (m.outputs.size() != 1) {
      throw stcris::ConfigError("manifest for " + m.command +
                                " must list exactly one output");
    }
    const std::string out_file = (dir / m.outputs[0]).string();
    if (m.command == "spectrum") summary = run_spectrum(m.config, out_file);
    else if (m.command == "map") summary = run_map(m.config, out_file);
    else if (m.command == "codebook") summary = run_codebook(m.config, out_file);
    else if (m.command == "steer") summary = run_steer(m.config, out_file);
    else if (m.command == "export-schedule")
      summary = run_export_schedule(m.config, out_file);
    else throw stcris::ConfigError("unknown command '" + m.command +
                                   "' in manifest");
    stcris::write_manifest(out_file + ".manifest.json", m);
  }
  return summary;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"space-time coded surface design and simulation toolkit"};
  app.require_subcommand(1);

  // spectrum
  struct {
    std::string code;
    double tau = 3.74e-3;
    long nmax = -1;
    std::string out;
  } sp;
  auto* spectrum_cmd =
      app.add_subcommand("spectrum", "harmonic coefficients of one code");
  spectrum_cmd->add_option("--code", sp.code, "code string, e.g. 00000001")
      ->required();
  spectrum_cmd->add_option("--tau", sp.tau, "bit duration in seconds");
  spectrum_cmd->add_option("--nmax", sp.nmax,
                           "highest harmonic order (default: code length)");
  spectrum_cmd->add_option("--out", sp.out, "output CSV path")->required();

  // map
  struct {
    std::size_t length = 11;
    long harmonic = 1;
    std::string alphabet = "binary";
    double tau = 3.74e-3;
    std::uint64_t cap = std::uint64_t{1} << 24;
    std::string out;
  } mp;
  auto* map_cmd =
      app.add_subcommand("map", "harmonic coefficient of every code of a length");
  map_cmd->add_option("--length", mp.length, "code length L")->required();
  map_cmd->add_option("--harmonic", mp.harmonic, "harmonic order n");
  map_cmd->add_option("--alphabet", mp.alphabet, "binary or ternary");
  map_cmd->add_option("--tau", mp.tau, "bit duration in seconds");
  map_cmd->add_option("--cap", mp.cap, "enumeration size cap");
  map_cmd->add_option("--out", mp.out, "output CSV path")->required();

  // codebook
  struct {
    std::string scheme;
    std::size_t length = 8;
    long harmonic = 1;
    std::string method = "shift";
    std::string alphabet = "binary";
    std::string base;
    double phase_offset = 0.0;
    double amp_tol = 0.05;
    double phase_tol = 0.0;
    double tau = 3.74e-3;
    std::string out;
  } cb;
  auto* codebook_cmd =
      app.add_subcommand("codebook", "design an M-PSK symbol-to-code map");
  codebook_cmd->add_option("--scheme", cb.scheme, "bpsk, qpsk, 8psk or 16psk")
      ->required();
  codebook_cmd->add_option("--length", cb.length, "code length L");
  codebook_cmd->add_option("--harmonic", cb.harmonic, "harmonic order n");
  codebook_cmd->add_option("--method", cb.method, "shift or search");
  codebook_cmd->add_option("--alphabet", cb.alphabet, "binary or ternary");
  codebook_cmd->add_option("--base", cb.base,
                           "base code for shift design (default: half-period block)");
  codebook_cmd->add_option("--phase-offset", cb.phase_offset,
                           "target grid offset in radians (search method)");
  codebook_cmd->add_option("--amp-tol", cb.amp_tol, "ring amplitude tolerance");
  codebook_cmd->add_option("--phase-tol", cb.phase_tol,
                           "phase tolerance in radians (default pi/(4M))");
  codebook_cmd->add_option("--tau", cb.tau, "bit duration in seconds");
  codebook_cmd->add_option("--out", cb.out, "output JSON path")->required();

  // steer
  struct {
    long shift = 0;
    std::size_t length = 8;
    long harmonic = 1;
    std::size_t columns = 8;
    double spacing = 0.5;
    double grid = 0.1;
    std::string base;
    double tau = 3.74e-3;
    bool cosine = false;
    std::string out;
  } st;
  auto* steer_cmd =
      app.add_subcommand("steer", "array-factor pattern for a column shift plan");
  steer_cmd->add_option("--shift", st.shift, "bit shift per column")->required();
  steer_cmd->add_option("--length", st.length, "code length L");
  steer_cmd->add_option("--harmonic", st.harmonic, "harmonic order n");
  steer_cmd->add_option("--columns", st.columns, "number of columns");
  steer_cmd->add_option("--spacing", st.spacing, "element pitch in wavelengths");
  steer_cmd->add_option("--grid", st.grid, "angle grid step in degrees");
  steer_cmd->add_option("--base", st.base,
                        "base code (default: half-period block)");
  steer_cmd->add_option("--tau", st.tau, "bit duration in seconds");
  steer_cmd->add_flag("--cosine-element", st.cosine,
                      "weight the pattern by cos(theta)");
  steer_cmd->add_option("--out", st.out, "output CSV path")->required();

  // linksim
  struct {
    std::string config;
    std::string out;
  } ls;
  auto* linksim_cmd =
      app.add_subcommand("linksim", "end-to-end link simulation from a JSON config");
  linksim_cmd->add_option("--config", ls.config, "JSON config path")->required();
  linksim_cmd->add_option("--out", ls.out, "output directory")->required();

  // export-schedule
  struct {
    std::string codebook;
    std::string payload;
    std::size_t reps = 1;
    std::size_t columns = 8;
    long shift = 0;
    std::string out;
  } ex;
  auto* export_cmd = app.add_subcommand(
      "export-schedule", "per-column switching schedule for a payload");
  export_cmd->add_option("--codebook", ex.codebook, "codebook JSON path")
      ->required();
  export_cmd->add_option("--payload", ex.payload, "payload as hex digits")
      ->required();
  export_cmd->add_option("--reps", ex.reps, "code periods per symbol");
  export_cmd->add_option("--columns", ex.columns, "number of columns");
  export_cmd->add_option("--shift", ex.shift, "bit shift per column");
  export_cmd->add_option("--out", ex.out, "output schedule path")->required();

  // replay
  struct {
    std::string manifest;
    std::string out;
  } rp;
  auto* replay_cmd =
      app.add_subcommand("replay", "regenerate outputs from a run manifest");
  replay_cmd->add_option("--manifest", rp.manifest, "manifest JSON path")
      ->required();
  replay_cmd->add_option("--out", rp.out, "output directory")->required();

  try {
    // Resolve the kernel lane up front so a bad STC_KERNELS value fails
    // fast even for commands that never reach the hot loops.
    stcris::kernels::active();

    app.parse(argc, argv);

    std::string summary;
    if (*spectrum_cmd) {
      const stcris::TimeCode code =
          stcris::parse_code(sp.code, sp.tau, detect_alphabet(sp.code));
      ordered_json cfg;
      cfg["code"] = sp.code;
      cfg["tau"] = sp.tau;
      cfg["nmax"] = sp.nmax < 0 ? static_cast<long>(code.length()) : sp.nmax;
      summary = run_spectrum(cfg, sp.out);
      emit_manifest_for_file("spectrum", cfg, sp.out);
    } else if (*map_cmd) {
      ordered_json cfg;
      cfg["length"] = mp.length;
      cfg["harmonic"] = mp.harmonic;
      cfg["alphabet"] = mp.alphabet;
      cfg["tau"] = mp.tau;
      cfg["cap"] = mp.cap;
      summary = run_map(cfg, mp.out);
      emit_manifest_for_file("map", cfg, mp.out);
    } else if (*codebook_cmd) {
      ordered_json cfg;
      cfg["scheme"] = cb.scheme;
      cfg["length"] = cb.length;
      cfg["harmonic"] = cb.harmonic;
      cfg["method"] = cb.method;
      cfg["alphabet"] = cb.alphabet;
      cfg["base_code"] =
          cb.base.empty()
              ? std::string(cb.length - cb.length / 2, '0') +
                    std::string(cb.length / 2, '1')
              : cb.base;
      cfg["phase_offset"] = cb.phase_offset;
      cfg["amp_tol"] = cb.amp_tol;
      cfg["phase_tol"] =
          cb.phase_tol == 0.0
              ? stcris::kPi /
                    (4.0 * static_cast<double>(stcris::scheme_by_name(cb.scheme).order))
              : cb.phase_tol;
      cfg["tau"] = cb.tau;
      summary = run_codebook(cfg, cb.out);
      emit_manifest_for_file("codebook", cfg, cb.out);
    } else if (*steer_cmd) {
      ordered_json cfg;
      cfg["shift"] = st.shift;
      cfg["length"] = st.length;
      cfg["harmonic"] = st.harmonic;
      cfg["columns"] = st.columns;
      cfg["spacing_wl"] = st.spacing;
      cfg["grid_step"] = st.grid;
      cfg["base_code"] =
          st.base.empty()
              ? std::string(st.length - st.length / 2, '0') +
                    std::string(st.length / 2, '1')
              : st.base;
      cfg["tau"] = st.tau;
      cfg["cosine_element"] = st.cosine;
      summary = run_steer(cfg, st.out);
      emit_manifest_for_file("steer", cfg, st.out);
    } else if (*linksim_cmd) {
      json raw;
      try {
        raw = json::parse(stcris::io::read_text_file(ls.config));
      } catch (const json::exception& e) {
        throw stcris::ConfigError(std::string("cannot parse config: ") + e.what());
      }
      stcris::io::LinkJob job = stcris::io::link_job_from_json(raw);
      job.cfg.seed = env_seed_override(job.cfg.seed);
      const ordered_json cfg = stcris::io::link_job_to_json(job);
      summary = run_linksim(cfg, ls.out);
      stcris::RunManifest m;
      m.command = "linksim";
      m.version = stcris::kVersion;
      m.config = cfg;
      m.outputs = {"report.json", "spectrum.csv", "constellation.csv"};
      stcris::write_manifest((fs::path(ls.out) / "manifest.json").string(), m);
    } else if (*export_cmd) {
      json book_json;
      try {
        book_json = json::parse(stcris::io::read_text_file(ex.codebook));
      } catch (const json::exception& e) {
        throw stcris::ConfigError(std::string("cannot parse codebook: ") + e.what());
      }
      ordered_json cfg;
      cfg["codebook"] = book_json;
      cfg["payload_hex"] = ex.payload;
      cfg["reps"] = ex.reps;
      cfg["columns"] = ex.columns;
      cfg["shift"] = ex.shift;
      summary = run_export_schedule(cfg, ex.out);
      emit_manifest_for_file("export-schedule", cfg, ex.out);
    } else if (*replay_cmd) {
      summary = run_replay(rp.manifest, rp.out);
    }
    if (!summary.empty()) std::cout << summary << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const stcris::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
