// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "stcris/array.hpp"
#include "stcris/codebook.hpp"
#include "stcris/harmonics.hpp"
#include "stcris/linksim.hpp"

namespace stcris::io {

// All floating-point text goes through this (12 significant digits) so CSV
// output is reproducible byte for byte.
std::string format_g12(double v);

std::string spectrum_csv(const std::vector<HarmonicPoint>& points);
std::string map_csv(const ConstellationMap& map);
std::string pattern_csv(const Pattern& pattern);
std::string psd_csv(const std::vector<PsdPoint>& psd);
std::string constellation_csv(const RxReport& report);

nlohmann::ordered_json codebook_to_json(const Codebook& book);
Codebook codebook_from_json(const nlohmann::json& j);

// Hardware-style switching schedule: '#' header lines carrying the timing,
// then one line per bit interval, one character per column, columns grouped
// by eight.
std::string schedule_text(const ColumnSchedules& schedules, double bit_duration,
                          std::size_t reps, long shift);

// One link-simulation job: the physical config plus how to build the
// codebook and the payload. Mirrors the JSON config schema in README.md.
struct LinkJob {
  LinkConfig cfg;
  std::string scheme = "qpsk";
  std::string method = "shift";  // shift | search
  std::string alphabet = "binary";
  std::string base_code;         // empty -> half-period block default
  double phase_offset = 0.0;
  double amp_tol = 0.05;
  double phase_tol = 0.0;        // 0 -> pi/(4M)
  long column_shift = 0;
  std::size_t data_symbols = 256;
  std::string payload_hex;

  std::string default_base_code() const;
};

LinkJob link_job_from_json(const nlohmann::json& j);
// Every default materialized; feeding the result back through
// link_job_from_json reproduces the job exactly.
nlohmann::ordered_json link_job_to_json(const LinkJob& job);
Codebook build_job_codebook(const LinkJob& job);

nlohmann::ordered_json report_to_json(const RxReport& report);

std::string bits_from_hex(const std::string& hex);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace stcris::io
