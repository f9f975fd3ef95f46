#pragma once

// Spectrum file formats.
//
// CSV (format v1): comment header carrying the format version, tool version
// and a single-line JSON parameter echo, then
//   energy_keV,value,model_tag,atom,flags
// with one row per grid point. `flags` is a ;-joined subset of
// {negative-values, sub-kev, normalized} or "none".
//
// JSON (format v1): a single object embedding the same parameter echo plus
// the grid and values arrays. Doubles are written in shortest
// round-trip form in both formats, so identical inputs yield identical
// bytes.

#include <charconv>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>  // nlohmann/json single header

#include "collapse_radiance/atom_io.hpp"
#include "collapse_radiance/errors.hpp"
#include "collapse_radiance/spectrum.hpp"
#include "collapse_radiance/version.hpp"

namespace collapse_radiance {

inline constexpr int spectrum_format_version = 1;

//! Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc()) {
    throw DomainError("format_double: conversion failed");
  }
  return std::string(buf, res.ptr);
}

//! JSON record of model parameters; round-trips via
//! model_params_from_json.
inline nlohmann::json model_params_to_json(const ModelParams& params) {
  nlohmann::json j;
  if (const auto* csl = std::get_if<CslParams>(&params)) {
    j["family"] = "csl";
    j["lambda_per_s"] = csl->lambda_per_s;
    j["corr_length_m"] = csl->corr_length_m;
    if (csl->e_cutoff_kev) {
      j["e_cutoff_kev"] = *csl->e_cutoff_kev;
    } else {
      j["e_cutoff_kev"] = nullptr;
    }
  } else {
    const auto& dp = std::get<DpParams>(params);
    j["family"] = "dp";
    j["r0_m"] = dp.r0_m;
    if (dp.e_cutoff_kev) {
      j["e_cutoff_kev"] = *dp.e_cutoff_kev;
    } else {
      j["e_cutoff_kev"] = nullptr;
    }
  }
  return j;
}

inline ModelParams model_params_from_json(const nlohmann::json& j) {
  try {
    const auto family = j.at("family").get<std::string>();
    if (family == "csl") {
      CslParams p;
      p.lambda_per_s = j.at("lambda_per_s").get<double>();
      p.corr_length_m = j.at("corr_length_m").get<double>();
      if (j.contains("e_cutoff_kev") && !j.at("e_cutoff_kev").is_null()) {
        p.e_cutoff_kev = j.at("e_cutoff_kev").get<double>();
      }
      return p;
    }
    if (family == "dp") {
      DpParams p;
      p.r0_m = j.at("r0_m").get<double>();
      if (j.contains("e_cutoff_kev") && !j.at("e_cutoff_kev").is_null()) {
        p.e_cutoff_kev = j.at("e_cutoff_kev").get<double>();
      }
      return p;
    }
    throw ParseError("model params JSON: unknown family '" + family + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model params JSON: ") + e.what());
  }
}

inline nlohmann::json geometry_to_json(const PairGeometry& geom) {
  nlohmann::json j;
  j["alpha"] = geom.alpha;
  j["beta"] = geom.beta;
  return j;
}

//! Full parameter echo: everything needed to reproduce the values.
inline nlohmann::json params_echo_json(const Spectrum& s) {
  nlohmann::json j;
  j["model_tag"] = s.model_tag();
  j["atom"] = atom_to_json(s.atom_echo);
  j["params"] = model_params_to_json(s.params_echo);
  j["geometry"] = geometry_to_json(s.geom_echo);
  j["normalized"] = s.normalized;
  return j;
}

inline std::string spectrum_flags_string(const Spectrum& s) {
  std::string out;
  const auto add = [&out](const char* flag) {
    if (!out.empty()) out += ';';
    out += flag;
  };
  if (s.negative_values) add("negative-values");
  if (s.sub_kev) add("sub-kev");
  if (s.normalized) add("normalized");
  return out.empty() ? "none" : out;
}

//! CSV document; a non-null `config` adds a `# config:` comment echoing the
//! fully resolved tool configuration that produced the file.
inline std::string spectrum_to_csv(const Spectrum& s,
                                   const nlohmann::json* config = nullptr) {
  std::string out;
  out += "# collapse-radiance spectrum format v1\n";
  out += "# tool_version: ";
  out += version;
  out += '\n';
  if (config != nullptr) {
    out += "# config: ";
    out += config->dump();
    out += '\n';
  }
  out += "# params: ";
  out += params_echo_json(s).dump();
  out += '\n';
  out += "energy_keV,value,model_tag,atom,flags\n";
  const std::string tag = s.model_tag();
  const std::string flags = spectrum_flags_string(s);
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    out += format_double(s.grid.points[i]);
    out += ',';
    out += format_double(s.values[i]);
    out += ',';
    out += tag;
    out += ',';
    out += s.atom_symbol;
    out += ',';
    out += flags;
    out += '\n';
  }
  return out;
}

inline std::string spectrum_to_json(const Spectrum& s,
                                    const nlohmann::json* config = nullptr) {
  nlohmann::json j;
  if (config != nullptr) j["config"] = *config;
  j["format"] = "collapse-radiance-spectrum";
  j["format_version"] = spectrum_format_version;
  j["tool_version"] = version;
  j["model_tag"] = s.model_tag();
  j["atom"] = atom_to_json(s.atom_echo);
  j["params"] = model_params_to_json(s.params_echo);
  j["geometry"] = geometry_to_json(s.geom_echo);
  j["normalized"] = s.normalized;
  j["flags"]["negative_values"] = s.negative_values;
  j["flags"]["sub_kev"] = s.sub_kev;
  j["grid"]["spacing"] = grid_spacing_name(s.grid.spacing);
  j["grid"]["points"] = s.grid.points;
  j["values"] = s.values;
  return j.dump(2) + "\n";
}

}  // namespace collapse_radiance
