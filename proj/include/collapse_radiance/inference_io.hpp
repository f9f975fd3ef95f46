#pragma once

// Synthetic-spectrum and fit-result file formats.
//
// Synthetic spectra are written as a CSV table
//   bin_center_keV,bin_width_keV,counts,efficiency,background_rate
// plus a JSON sidecar carrying exposure, seed and the truth parameters;
// a single-document JSON form bundles both. Fit results are JSON.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>  // nlohmann/json single header

#include "collapse_radiance/errors.hpp"
#include "collapse_radiance/inference.hpp"
#include "collapse_radiance/spectrum_io.hpp"
#include "collapse_radiance/version.hpp"

namespace collapse_radiance {

inline constexpr int synth_format_version = 1;

inline std::string synth_to_csv(const SyntheticSpectrum& s) {
  std::string out;
  out += "# collapse-radiance synth format v1\n";
  out += "# tool_version: ";
  out += version;
  out += '\n';
  out += "bin_center_keV,bin_width_keV,counts,efficiency,background_rate\n";
  for (std::size_t i = 0; i < s.n_bins(); ++i) {
    out += format_double(s.grid.points[i]);
    out += ',';
    out += format_double(s.bin_width_kev);
    out += ',';
    out += std::to_string(s.counts[i]);
    out += ',';
    out += format_double(s.efficiency[i]);
    out += ',';
    out += format_double(s.background_rate[i]);
    out += '\n';
  }
  return out;
}

inline nlohmann::json synth_meta_to_json_obj(const SyntheticSpectrum& s) {
  nlohmann::json j;
  j["format"] = "collapse-radiance-synth-meta";
  j["format_version"] = synth_format_version;
  j["tool_version"] = version;
  j["exposure_s"] = s.exposure_s;
  j["seed"] = s.seed;
  j["bin_width_keV"] = s.bin_width_kev;
  j["clamped_negative_rates"] = s.clamped_negative_rates;
  j["truth"]["model_tag"] =
      std::string(model_kind_name(s.truth_model)) +
      (params_are_colored(s.truth_params) ? "/colored" : "/markovian");
  j["truth"]["atom"] = atom_to_json(s.atom_echo);
  j["truth"]["params"] = model_params_to_json(s.truth_params);
  j["truth"]["geometry"] = geometry_to_json(s.geom_echo);
  return j;
}

//! JSON sidecar accompanying the CSV table.
inline std::string synth_meta_to_json(const SyntheticSpectrum& s) {
  return synth_meta_to_json_obj(s).dump(2) + "\n";
}

inline nlohmann::json synth_to_json_obj(const SyntheticSpectrum& s) {
  nlohmann::json j = synth_meta_to_json_obj(s);
  j["format"] = "collapse-radiance-synth";
  j["bin_center_keV"] = s.grid.points;
  j["counts"] = s.counts;
  j["efficiency"] = s.efficiency;
  j["background_rate"] = s.background_rate;
  return j;
}

//! Single-document JSON form (table and sidecar bundled).
inline std::string synth_to_json(const SyntheticSpectrum& s) {
  return synth_to_json_obj(s).dump(2) + "\n";
}

namespace detail {

inline void apply_synth_meta(SyntheticSpectrum& s, const nlohmann::json& j) {
  try {
    s.exposure_s = j.at("exposure_s").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.clamped_negative_rates = j.value("clamped_negative_rates", false);
    const double meta_bw = j.at("bin_width_keV").get<double>();
    if (s.bin_width_kev == 0.0) {
      s.bin_width_kev = meta_bw;
    } else if (std::abs(meta_bw - s.bin_width_kev) >
               1e-12 * s.bin_width_kev) {
      throw ParseError("synth meta: bin width disagrees with the table");
    }
    const auto& truth = j.at("truth");
    const auto tag = truth.at("model_tag").get<std::string>();
    s.truth_model = parse_model_kind(tag.substr(0, tag.find('/')));
    s.atom_echo = atom_from_json(truth.at("atom"));
    s.truth_params = model_params_from_json(truth.at("params"));
    s.geom_echo.alpha = truth.at("geometry").at("alpha").get<double>();
    s.geom_echo.beta = truth.at("geometry").at("beta").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("synth meta JSON: ") + e.what());
  }
}

inline std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream row(line);
  while (std::getline(row, field, ',')) fields.push_back(field);
  return fields;
}

inline double parse_double_field(const std::string& field, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("synth CSV: bad ") + what + " '" + field +
                     "'");
  }
}

inline std::int64_t parse_count_field(const std::string& field) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(field, &pos);
    if (pos != field.size() || v < 0) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ParseError("synth CSV: bad counts '" + field + "'");
  }
}

}  // namespace detail

//! Parse the CSV table + JSON sidecar back into a SyntheticSpectrum.
inline SyntheticSpectrum synth_from_csv(const std::string& csv_text,
                                        const std::string& meta_json) {
  SyntheticSpectrum s;
  std::vector<double> centers;
  std::istringstream in(csv_text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line !=
          "bin_center_keV,bin_width_keV,counts,efficiency,background_rate") {
        throw ParseError("synth CSV: unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = detail::split_csv_row(line);
    if (fields.size() != 5) {
      throw ParseError("synth CSV: expected 5 fields, got " +
                       std::to_string(fields.size()));
    }
    centers.push_back(detail::parse_double_field(fields[0], "bin center"));
    const double bw = detail::parse_double_field(fields[1], "bin width");
    if (s.bin_width_kev == 0.0) {
      s.bin_width_kev = bw;
    } else if (std::abs(bw - s.bin_width_kev) > 1e-12 * s.bin_width_kev) {
      throw ParseError("synth CSV: bin widths are not uniform");
    }
    s.counts.push_back(detail::parse_count_field(fields[2]));
    s.efficiency.push_back(
        detail::parse_double_field(fields[3], "efficiency"));
    s.background_rate.push_back(
        detail::parse_double_field(fields[4], "background rate"));
  }
  if (!header_seen || centers.empty()) {
    throw ParseError("synth CSV: no data rows");
  }
  s.grid = EnergyGrid::from_points(std::move(centers));

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("synth meta JSON: ") + e.what());
  }
  detail::apply_synth_meta(s, meta);
  return s;
}

//! Parse the single-document JSON form.
inline SyntheticSpectrum synth_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("synth JSON: ") + e.what());
  }
  SyntheticSpectrum s;
  try {
    s.grid = EnergyGrid::from_points(
        j.at("bin_center_keV").get<std::vector<double>>());
    s.counts = j.at("counts").get<std::vector<std::int64_t>>();
    s.efficiency = j.at("efficiency").get<std::vector<double>>();
    s.background_rate = j.at("background_rate").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("synth JSON: ") + e.what());
  }
  for (const auto c : s.counts) {
    if (c < 0) throw ParseError("synth JSON: negative counts");
  }
  if (s.counts.size() != s.n_bins() || s.efficiency.size() != s.n_bins() ||
      s.background_rate.size() != s.n_bins()) {
    throw ParseError("synth JSON: per-bin arrays disagree in length");
  }
  detail::apply_synth_meta(s, j);
  return s;
}

inline nlohmann::json fit_result_to_json_obj(const FitResult& r) {
  nlohmann::json j;
  j["amplitude_hat"] = r.amplitude_hat;
  j["amplitude_sigma"] = r.amplitude_sigma;
  j["corr_length_hat_m"] = r.corr_length_hat_m;
  j["converged"] = r.converged;
  j["chi2"] = r.chi2;
  j["ndof"] = r.ndof;
  j["iterations"] = nlohmann::json::array();
  for (const auto& [prior, posterior] : r.iterations) {
    nlohmann::json step;
    step["prior_m"] = prior;
    step["posterior_m"] = posterior;
    j["iterations"].push_back(std::move(step));
  }
  return j;
}

inline std::string fit_result_to_json(const FitResult& r) {
  nlohmann::json j = fit_result_to_json_obj(r);
  j["format"] = "collapse-radiance-fit";
  j["format_version"] = synth_format_version;
  j["tool_version"] = version;
  return j.dump(2) + "\n";
}

}  // namespace collapse_radiance
