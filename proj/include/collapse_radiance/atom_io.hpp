#pragma once

// JSON (de)serialization for Atom. Schema:
//
// {
//   "symbol": "Ge",
//   "Z": 32,
//   "neutral": true,                    // optional, default true
//   "radii_provenance": "...",          // optional, default "unspecified"
//   "shells": [
//     {"label": "1s", "occupancy": 2, "mean_radius_m": 2.5e-12,
//      "alpha_override": 1.1}           // alpha_override optional
//   ]
// }
//
// Malformed documents raise ParseError; structurally valid documents that
// violate physical constraints raise DomainError / OccupancyError from
// validate().

#include <string>

#include <json.hpp>  // nlohmann/json single header

#include "collapse_radiance/atom.hpp"
#include "collapse_radiance/errors.hpp"

namespace collapse_radiance {

//! Build an Atom from a parsed JSON object. Throws ParseError on schema
//! problems and DomainError/OccupancyError on physical ones.
inline Atom atom_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw ParseError("atom JSON: top level must be an object");
  }

  Atom atom;
  try {
    atom.symbol = doc.at("symbol").get<std::string>();
    atom.n_protons = doc.at("Z").get<int>();
    atom.neutral = doc.value("neutral", true);
    atom.radii_provenance = doc.value("radii_provenance",
                                      std::string("unspecified"));
    const auto& shells = doc.at("shells");
    if (!shells.is_array() || shells.empty()) {
      throw ParseError("atom JSON: \"shells\" must be a non-empty array");
    }
    for (const auto& s : shells) {
      Shell shell;
      shell.label = s.at("label").get<std::string>();
      shell.occupancy = s.at("occupancy").get<int>();
      shell.mean_radius_m = s.at("mean_radius_m").get<double>();
      if (s.contains("alpha_override")) {
        shell.alpha_override = s.at("alpha_override").get<double>();
      }
      atom.shells.push_back(std::move(shell));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("atom JSON: ") + e.what());
  }

  validate(atom);
  return atom;
}

//! Parse an Atom from a JSON document string.
inline Atom parse_atom(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("atom JSON: ") + e.what());
  }
  return atom_from_json(doc);
}

//! Serialize an Atom to a JSON object following the schema above.
inline nlohmann::json atom_to_json(const Atom& atom) {
  validate(atom);
  nlohmann::json doc;
  doc["symbol"] = atom.symbol;
  doc["Z"] = atom.n_protons;
  doc["neutral"] = atom.neutral;
  doc["radii_provenance"] = atom.radii_provenance;
  doc["shells"] = nlohmann::json::array();
  for (const auto& s : atom.shells) {
    nlohmann::json shell;
    shell["label"] = s.label;
    shell["occupancy"] = s.occupancy;
    shell["mean_radius_m"] = s.mean_radius_m;
    if (s.alpha_override) {
      shell["alpha_override"] = *s.alpha_override;
    }
    doc["shells"].push_back(std::move(shell));
  }
  return doc;
}

//! Serialize an Atom to a JSON document string (2-space indented, keys
//! sorted, trailing newline). parse_atom(serialize_atom(a)) reproduces a.
inline std::string serialize_atom(const Atom& atom) {
  return atom_to_json(atom).dump(2) + "\n";
}

}  // namespace collapse_radiance
