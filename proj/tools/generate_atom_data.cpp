// Regenerates the bundled atom data files (data/atoms/*.json) from the
// builtin screened-hydrogenic table, plus a small manifest.  Run from the
// repository root:
//
//   build/generate_atom_data data/atoms
//
// The generated files are committed so downstream users can point
// COLLAPSE_RADIANCE_DATA at the directory (or edit copies) without building
// this tool.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>  // nlohmann/json single header

#include "collapse_radiance/atom.hpp"
#include "collapse_radiance/atom_io.hpp"
#include "collapse_radiance/version.hpp"

namespace cr = collapse_radiance;
namespace fs = std::filesystem;

int main(int argc, char** argv) {
  const fs::path out_dir = argc > 1 ? fs::path(argv[1]) : fs::path("data/atoms");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create '" << out_dir.string() << "': "
              << ec.message() << '\n';
    return 1;
  }

  const std::vector<std::string> symbols = {"Ge", "Xe"};
  nlohmann::json manifest;
  manifest["format"] = "collapse-radiance-atom-manifest";
  manifest["format_version"] = 1;
  manifest["tool_version"] = cr::version;
  manifest["radii_provenance"] = cr::builtin_radii_provenance;
  manifest["atoms"] = nlohmann::json::array();

  for (const auto& symbol : symbols) {
    const cr::Atom atom = cr::builtin_atom(symbol);
    std::string name;
    for (char c : symbol) {
      name += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    name += ".json";
    const fs::path path = out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "error: cannot write '" << path.string() << "'\n";
      return 1;
    }
    out << cr::serialize_atom(atom);
    nlohmann::json entry;
    entry["symbol"] = atom.symbol;
    entry["Z"] = atom.n_protons;
    entry["file"] = name;
    entry["shells"] = atom.shells.size();
    manifest["atoms"].push_back(entry);
    std::cout << "wrote " << path.string() << '\n';
  }

  const fs::path manifest_path = out_dir / "manifest.json";
  std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "error: cannot write '" << manifest_path.string() << "'\n";
    return 1;
  }
  out << manifest.dump(2) << '\n';
  std::cout << "wrote " << manifest_path.string() << '\n';
  return 0;
}
