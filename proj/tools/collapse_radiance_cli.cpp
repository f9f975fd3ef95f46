// collapse-radiance: command-line surface for spectrum computation, model
// comparison, alpha-band envelopes, Z-surveys, synthetic-data generation and
// the iterative correlation-length fit.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>  // nlohmann/json single header

#include "collapse_radiance/collapse_radiance.hpp"

namespace cr = collapse_radiance;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

//! Command-level misuse that CLI11's own validation cannot see (e.g. a CSL
//! model without --rc); reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw cr::Error("cannot read '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw cr::Error("cannot open '" + out + "' for writing");
  }
  f << content;
  f.flush();
  if (!f.good()) {
    throw cr::Error("failed while writing '" + out + "'");
  }
}

std::string to_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

//! Resolve an atom reference: a path (contains '/' or ends in .json) is
//! parsed as an atom JSON file; otherwise the symbol is looked up in
//! $COLLAPSE_RADIANCE_DATA (when set, it replaces the builtin table) or in
//! the builtin table.
cr::Atom resolve_atom(const std::string& ref) {
  const bool is_path = ref.find('/') != std::string::npos ||
                       (ref.size() > 5 && ref.substr(ref.size() - 5) == ".json");
  if (is_path) {
    return cr::parse_atom(read_file(ref));
  }
  if (const char* dir = std::getenv("COLLAPSE_RADIANCE_DATA")) {
    const fs::path p = fs::path(dir) / (to_lower(ref) + ".json");
    if (!fs::exists(p)) {
      throw cr::Error("atom '" + ref + "' not found in COLLAPSE_RADIANCE_DATA directory '" +
                      std::string(dir) + "'");
    }
    return cr::parse_atom(read_file(p));
  }
  return cr::builtin_atom(ref);
}

// --------------------------------------------------------------------------
// Shared option bundles
// --------------------------------------------------------------------------

struct ModelOpts {
  std::string model = "csl-general";
  double lambda = 1.0;  // unit amplitude by default; rates are linear in it
  std::optional<double> rc;
  std::optional<double> r0;
  std::optional<double> ecut;
  double alpha = 1.25;
  double beta = 1.04;

  void add_params(CLI::App* cmd, bool with_model = true,
                  const std::string& model_help = "model tag") {
    if (with_model) {
      cmd->add_option("--model", model, model_help)
          ->check(CLI::IsMember({"csl-general", "csl-simple", "csl-longwave",
                                 "dp-general", "dp-simple"}))
          ->capture_default_str();
    }
    cmd->add_option("--lambda", lambda,
                    "CSL collapse rate lambda [1/s] (rates scale linearly)")
        ->capture_default_str();
    cmd->add_option("--rc", rc, "CSL correlation length r_C [m]");
    cmd->add_option("--r0", r0, "DP resolution length R0 [m]");
    cmd->add_option("--ecut", ecut,
                    "colored-noise cutoff energy E_c [keV] (omit = Markovian)");
    cmd->add_option("--alpha", alpha, "same-shell distance coefficient")
        ->capture_default_str();
    cmd->add_option("--beta", beta, "cross-shell distance coefficient")
        ->capture_default_str();
  }

  cr::ModelParams make_params(cr::ModelKind kind) const {
    if (cr::is_csl(kind)) {
      if (!rc) throw UsageError("--rc is required for CSL models");
      cr::CslParams p;
      p.lambda_per_s = lambda;
      p.corr_length_m = *rc;
      p.e_cutoff_kev = ecut;
      return p;
    }
    if (!r0) throw UsageError("--r0 is required for DP models");
    cr::DpParams p;
    p.r0_m = *r0;
    p.e_cutoff_kev = ecut;
    return p;
  }

  cr::PairGeometry make_geom() const { return cr::PairGeometry{alpha, beta}; }

  void echo_into(json& cfg) const {
    cfg["model"] = model;
    cfg["lambda_per_s"] = lambda;
    cfg["rc_m"] = rc ? json(*rc) : json(nullptr);
    cfg["r0_m"] = r0 ? json(*r0) : json(nullptr);
    cfg["ecut_keV"] = ecut ? json(*ecut) : json(nullptr);
    cfg["alpha"] = alpha;
    cfg["beta"] = beta;
  }
};

struct GridOpts {
  double emin = 1.0;
  double emax = 1000.0;
  int points = 512;
  std::string spacing = "log";

  void add(CLI::App* cmd) {
    cmd->add_option("--emin", emin, "grid lower edge [keV]")->capture_default_str();
    cmd->add_option("--emax", emax, "grid upper edge [keV]")->capture_default_str();
    cmd->add_option("--points", points, "number of grid points")->capture_default_str();
    cmd->add_option("--spacing", spacing, "grid spacing")
        ->check(CLI::IsMember({"log", "linear"}))
        ->capture_default_str();
  }

  cr::EnergyGrid make() const {
    return spacing == "linear" ? cr::EnergyGrid::linear(emin, emax, points)
                               : cr::EnergyGrid::logspace(emin, emax, points);
  }

  void echo_into(json& cfg) const {
    cfg["emin_keV"] = emin;
    cfg["emax_keV"] = emax;
    cfg["points"] = points;
    cfg["spacing"] = spacing;
  }
};

struct OutOpts {
  std::string out = "-";
  std::string format = "csv";

  void add(CLI::App* cmd, const char* default_format = "csv") {
    format = default_format;
    cmd->add_option("--out", out, "output path ('-' = stdout)")->capture_default_str();
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  }

  void echo_into(json& cfg) const {
    cfg["out"] = out;
    cfg["format"] = format;
  }
};

void warn_sub_kev(const cr::EnergyGrid& grid) {
  std::size_t n = 0;
  for (double e : grid.points) {
    if (e < cr::sub_kev_threshold_kev) ++n;
  }
  if (n > 0) {
    std::cerr << "warning: " << n
              << " grid point(s) below 1 keV; the emission-rate formulas are "
                 "extrapolated in the sub-keV regime\n";
  }
}

// --------------------------------------------------------------------------
// spectrum
// --------------------------------------------------------------------------

struct SpectrumCmd {
  std::string atom;
  ModelOpts model;
  GridOpts grid;
  OutOpts out;

  void run() const {
    const cr::ModelKind kind = cr::parse_model_kind(model.model);
    const cr::Atom a = resolve_atom(atom);
    const cr::ModelParams params = model.make_params(kind);
    const cr::EnergyGrid g = grid.make();
    warn_sub_kev(g);
    const cr::Spectrum s =
        cr::compute_spectrum(kind, a, params, model.make_geom(), g);

    json cfg;
    cfg["command"] = "spectrum";
    cfg["atom"] = atom;
    model.echo_into(cfg);
    grid.echo_into(cfg);
    out.echo_into(cfg);

    write_output(out.out, out.format == "csv" ? cr::spectrum_to_csv(s, &cfg)
                                              : cr::spectrum_to_json(s, &cfg));
  }
};

// --------------------------------------------------------------------------
// compare
// --------------------------------------------------------------------------

struct CompareCmd {
  std::string atom;
  std::string family = "csl";
  ModelOpts model;
  GridOpts grid;
  OutOpts out;
  double rel_tol = 0.05;

  void run() const {
    const bool csl = family == "csl";
    const cr::ModelKind general =
        csl ? cr::ModelKind::csl_general : cr::ModelKind::dp_general;
    const cr::ModelKind simple =
        csl ? cr::ModelKind::csl_simple : cr::ModelKind::dp_simple;
    const cr::Atom a = resolve_atom(atom);
    const cr::ModelParams params = model.make_params(general);
    const cr::EnergyGrid g = grid.make();
    warn_sub_kev(g);
    const cr::PairGeometry geom = model.make_geom();
    const cr::Spectrum gen =
        cr::normalize_shape(cr::compute_spectrum(general, a, params, geom, g));
    const cr::Spectrum sim =
        cr::normalize_shape(cr::compute_spectrum(simple, a, params, geom, g));
    const std::optional<double> estar =
        cr::convergence_energy(gen, sim, rel_tol);

    json cfg;
    cfg["command"] = "compare";
    cfg["atom"] = atom;
    cfg["family"] = family;
    cfg["rel_tol"] = rel_tol;
    model.echo_into(cfg);
    grid.echo_into(cfg);
    out.echo_into(cfg);

    std::vector<double> ratio(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      ratio[i] = gen.values[i] / sim.values[i];
    }

    if (out.format == "csv") {
      std::string doc;
      doc += "# collapse-radiance compare format v1\n";
      doc += "# tool_version: ";
      doc += cr::version;
      doc += '\n';
      doc += "# config: " + cfg.dump() + '\n';
      doc += "# params_general: " + cr::params_echo_json(gen).dump() + '\n';
      doc += "# params_simple: " + cr::params_echo_json(sim).dump() + '\n';
      doc += "# convergence_energy_keV(rel_tol=" + cr::format_double(rel_tol) +
             "): " + (estar ? cr::format_double(*estar) : "none") + '\n';
      doc += "energy_keV,general,simple,ratio\n";
      for (std::size_t i = 0; i < g.size(); ++i) {
        doc += cr::format_double(g.points[i]);
        doc += ',';
        doc += cr::format_double(gen.values[i]);
        doc += ',';
        doc += cr::format_double(sim.values[i]);
        doc += ',';
        doc += cr::format_double(ratio[i]);
        doc += '\n';
      }
      write_output(out.out, doc);
    } else {
      json j;
      j["format"] = "collapse-radiance-compare";
      j["format_version"] = 1;
      j["tool_version"] = cr::version;
      j["config"] = cfg;
      j["params_general"] = cr::params_echo_json(gen);
      j["params_simple"] = cr::params_echo_json(sim);
      j["rel_tol"] = rel_tol;
      j["convergence_energy_keV"] = estar ? json(*estar) : json(nullptr);
      j["grid"]["spacing"] = cr::grid_spacing_name(g.spacing);
      j["grid"]["points"] = g.points;
      j["general"] = gen.values;
      j["simple"] = sim.values;
      j["ratio"] = ratio;
      write_output(out.out, j.dump(2) + "\n");
    }
  }
};

// --------------------------------------------------------------------------
// band
// --------------------------------------------------------------------------

struct BandCmd {
  std::string atom;
  ModelOpts model;
  GridOpts grid;
  OutOpts out;
  double alpha_lo = 1.0;
  double alpha_hi = 1.5;
  int samples = 9;

  void run() const {
    const cr::ModelKind kind = cr::parse_model_kind(model.model);
    const cr::Atom a = resolve_atom(atom);
    const cr::ModelParams params = model.make_params(kind);
    const cr::EnergyGrid g = grid.make();
    warn_sub_kev(g);
    const cr::AlphaBand band = cr::alpha_band(kind, a, params, g, alpha_lo,
                                              alpha_hi, samples,
                                              model.make_geom());

    json cfg;
    cfg["command"] = "band";
    cfg["atom"] = atom;
    cfg["alpha_lo"] = alpha_lo;
    cfg["alpha_hi"] = alpha_hi;
    cfg["samples"] = samples;
    model.echo_into(cfg);
    grid.echo_into(cfg);
    out.echo_into(cfg);

    if (out.format == "csv") {
      std::string doc;
      doc += "# collapse-radiance band format v1\n";
      doc += "# tool_version: ";
      doc += cr::version;
      doc += '\n';
      doc += "# config: " + cfg.dump() + '\n';
      doc += "# params_mid: " + cr::params_echo_json(band.mid).dump() + '\n';
      doc += "energy_keV,lower,mid,upper\n";
      for (std::size_t i = 0; i < g.size(); ++i) {
        doc += cr::format_double(g.points[i]);
        doc += ',';
        doc += cr::format_double(band.lower.values[i]);
        doc += ',';
        doc += cr::format_double(band.mid.values[i]);
        doc += ',';
        doc += cr::format_double(band.upper.values[i]);
        doc += '\n';
      }
      write_output(out.out, doc);
    } else {
      json j;
      j["format"] = "collapse-radiance-band";
      j["format_version"] = 1;
      j["tool_version"] = cr::version;
      j["config"] = cfg;
      j["params_mid"] = cr::params_echo_json(band.mid);
      j["grid"]["spacing"] = cr::grid_spacing_name(g.spacing);
      j["grid"]["points"] = g.points;
      j["lower"] = band.lower.values;
      j["mid"] = band.mid.values;
      j["upper"] = band.upper.values;
      write_output(out.out, j.dump(2) + "\n");
    }
  }
};

// --------------------------------------------------------------------------
// zsurvey
// --------------------------------------------------------------------------

struct ZSurveyCmd {
  std::vector<std::string> atoms;
  double energy = 0.0;
  ModelOpts model;
  OutOpts out;

  void run() const {
    const cr::ModelKind kind = cr::parse_model_kind(model.model);
    const cr::ModelParams params = model.make_params(kind);
    std::vector<cr::Atom> resolved;
    resolved.reserve(atoms.size());
    for (const auto& ref : atoms) resolved.push_back(resolve_atom(ref));
    const auto rows =
        cr::z_survey(resolved, energy, kind, params, model.make_geom());

    json cfg;
    cfg["command"] = "zsurvey";
    cfg["atoms"] = atoms;
    cfg["energy_keV"] = energy;
    model.echo_into(cfg);
    out.echo_into(cfg);

    if (out.format == "csv") {
      std::string doc;
      doc += "# collapse-radiance zsurvey format v1\n";
      doc += "# tool_version: ";
      doc += cr::version;
      doc += '\n';
      doc += "# config: " + cfg.dump() + '\n';
      doc += "symbol,rate_per_s_keV,cancellation_factor\n";
      for (const auto& row : rows) {
        doc += row.symbol;
        doc += ',';
        doc += cr::format_double(row.rate_per_s_kev);
        doc += ',';
        doc += cr::format_double(row.cancellation);
        doc += '\n';
      }
      write_output(out.out, doc);
    } else {
      json j;
      j["format"] = "collapse-radiance-zsurvey";
      j["format_version"] = 1;
      j["tool_version"] = cr::version;
      j["config"] = cfg;
      j["rows"] = json::array();
      for (const auto& row : rows) {
        json r;
        r["symbol"] = row.symbol;
        r["rate_per_s_keV"] = row.rate_per_s_kev;
        r["cancellation_factor"] = row.cancellation;
        j["rows"].push_back(std::move(r));
      }
      write_output(out.out, j.dump(2) + "\n");
    }
  }
};

// --------------------------------------------------------------------------
// synth
// --------------------------------------------------------------------------

struct SynthCmd {
  std::string atom;
  ModelOpts model;
  OutOpts out;
  double emin = 1.0;
  double emax = 30.0;
  int bins = 232;
  double exposure = 0.0;
  double efficiency = 1.0;
  double background = 0.0;
  std::uint64_t seed = 42;

  void run() const {
    const cr::ModelKind kind = cr::parse_model_kind(model.model);
    const cr::Atom a = resolve_atom(atom);
    const cr::ModelParams params = model.make_params(kind);
    if (bins < 1) throw UsageError("--bins must be >= 1");
    if (!(emax > emin)) throw UsageError("--emax must exceed --emin");
    const double width = (emax - emin) / bins;
    std::vector<double> centers(static_cast<std::size_t>(bins));
    for (int i = 0; i < bins; ++i) {
      centers[static_cast<std::size_t>(i)] = emin + width * (i + 0.5);
    }
    const cr::EnergyGrid grid = cr::EnergyGrid::from_points(std::move(centers));
    warn_sub_kev(grid);
    const cr::SyntheticSpectrum s =
        cr::synth_counts(kind, a, params, model.make_geom(), grid, width,
                         exposure, {efficiency}, {background}, seed);

    json cfg;
    cfg["command"] = "synth";
    cfg["atom"] = atom;
    cfg["emin_keV"] = emin;
    cfg["emax_keV"] = emax;
    cfg["bins"] = bins;
    cfg["exposure_s"] = exposure;
    cfg["efficiency"] = efficiency;
    cfg["background_rate"] = background;
    cfg["seed"] = seed;
    model.echo_into(cfg);
    out.echo_into(cfg);

    if (out.format == "csv") {
      if (out.out.empty() || out.out == "-") {
        throw UsageError(
            "synth --format csv requires --out FILE (a JSON sidecar is "
            "written next to it)");
      }
      write_output(out.out, cr::synth_to_csv(s));
      json meta = cr::synth_meta_to_json_obj(s);
      meta["config"] = cfg;
      write_output(out.out + ".meta.json", meta.dump(2) + "\n");
    } else {
      json j = cr::synth_to_json_obj(s);
      j["config"] = cfg;
      write_output(out.out, j.dump(2) + "\n");
    }
  }
};

// --------------------------------------------------------------------------
// fit
// --------------------------------------------------------------------------

struct FitCmd {
  std::string data;
  std::string atom;  // optional override of the file's atom echo
  std::string family;  // optional; default = family of the file's truth model
  std::optional<double> prior;
  std::optional<double> ecut;
  std::optional<double> alpha;
  std::optional<double> beta;
  double rel_tol = 1e-3;
  int max_iter = 20;
  OutOpts out;

  void run() const {
    if (!prior) throw UsageError("--prior-rc is required");
    cr::SyntheticSpectrum s;
    if (data.size() > 5 && data.substr(data.size() - 5) == ".json") {
      s = cr::synth_from_json(read_file(data));
    } else {
      s = cr::synth_from_csv(read_file(data), read_file(data + ".meta.json"));
    }

    std::string fam = family;
    if (fam.empty()) fam = cr::is_csl(s.truth_model) ? "csl" : "dp";
    const cr::ModelKind kind =
        fam == "csl" ? cr::ModelKind::csl_general : cr::ModelKind::dp_general;

    const cr::Atom a = atom.empty() ? s.atom_echo : resolve_atom(atom);
    cr::PairGeometry geom = s.geom_echo;
    if (alpha) geom.alpha = *alpha;
    if (beta) geom.beta = *beta;
    std::optional<double> cutoff = ecut;
    if (!cutoff) {
      cutoff = std::visit([](const auto& p) { return p.e_cutoff_kev; },
                          s.truth_params);
    }

    const cr::FitResult result = cr::iterate_corr_length(
        s, kind, a, geom, *prior, {}, rel_tol, max_iter, cutoff);

    json cfg;
    cfg["command"] = "fit";
    cfg["data"] = data;
    cfg["atom"] = atom.empty() ? json(nullptr) : json(atom);
    cfg["family"] = fam;
    cfg["prior_m"] = *prior;
    cfg["ecut_keV"] = cutoff ? json(*cutoff) : json(nullptr);
    cfg["alpha"] = geom.alpha;
    cfg["beta"] = geom.beta;
    cfg["rel_tol"] = rel_tol;
    cfg["max_iter"] = max_iter;
    out.echo_into(cfg);

    json j;
    j["format"] = "collapse-radiance-fit";
    j["format_version"] = 1;
    j["tool_version"] = cr::version;
    j["config"] = cfg;
    j["data_echo"]["n_bins"] = s.n_bins();
    j["data_echo"]["seed"] = s.seed;
    j["data_echo"]["exposure_s"] = s.exposure_s;
    j["data_echo"]["truth_model_tag"] =
        std::string(cr::model_kind_name(s.truth_model)) +
        (cr::params_are_colored(s.truth_params) ? "/colored" : "/markovian");
    j["data_echo"]["truth_params"] = cr::model_params_to_json(s.truth_params);
    j["result"] = cr::fit_result_to_json_obj(result);
    write_output(out.out, j.dump(2) + "\n");
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spontaneous X-ray emission rates of wave-function-collapse models "
      "(CSL and Diosi-Penrose): spectra, envelopes, surveys and fits"};
  app.set_version_flag("--version", std::string(cr::version));
  app.set_config("--config", "",
                 "read options from an INI/TOML-style config file "
                 "(command-line flags win)");
  app.require_subcommand(1);

  auto spectrum = std::make_shared<SpectrumCmd>();
  {
    CLI::App* cmd = app.add_subcommand(
        "spectrum", "compute a rate spectrum on an energy grid");
    cmd->add_option("--atom", spectrum->atom, "atom symbol or JSON file path")
        ->required();
    spectrum->model.add_params(cmd);
    spectrum->grid.add(cmd);
    spectrum->out.add(cmd);
    cmd->callback([spectrum]() { spectrum->run(); });
  }

  auto compare = std::make_shared<CompareCmd>();
  {
    CLI::App* cmd = app.add_subcommand(
        "compare",
        "normalized general vs simple shapes, per-point ratio and the "
        "convergence energy");
    cmd->add_option("--atom", compare->atom, "atom symbol or JSON file path")
        ->required();
    cmd->add_option("--model", compare->family, "model family")
        ->check(CLI::IsMember({"csl", "dp"}))
        ->capture_default_str();
    compare->model.add_params(cmd, /*with_model=*/false);
    compare->grid.add(cmd);
    compare->out.add(cmd);
    cmd->add_option("--rel-tol", compare->rel_tol,
                    "convergence tolerance on |general/simple - 1|")
        ->capture_default_str();
    cmd->callback([compare]() { compare->run(); });
  }

  auto band = std::make_shared<BandCmd>();
  {
    CLI::App* cmd = app.add_subcommand(
        "band", "alpha-band envelope (lower/mid/upper) over an alpha sweep");
    cmd->add_option("--atom", band->atom, "atom symbol or JSON file path")
        ->required();
    band->model.add_params(cmd);
    band->grid.add(cmd);
    band->out.add(cmd);
    cmd->add_option("--alpha-lo", band->alpha_lo, "sweep lower bound")
        ->capture_default_str();
    cmd->add_option("--alpha-hi", band->alpha_hi, "sweep upper bound")
        ->capture_default_str();
    cmd->add_option("--samples", band->samples,
                    "alpha samples (endpoints and midpoint always included)")
        ->capture_default_str();
    cmd->callback([band]() { band->run(); });
  }

  auto zsurvey = std::make_shared<ZSurveyCmd>();
  {
    CLI::App* cmd = app.add_subcommand(
        "zsurvey", "per-atom rate and cancellation factor at fixed energy");
    cmd->add_option("--atoms", zsurvey->atoms,
                    "comma-separated atom symbols and/or JSON file paths")
        ->required()
        ->delimiter(',');
    cmd->add_option("--energy", zsurvey->energy, "evaluation energy [keV]")
        ->required();
    zsurvey->model.add_params(cmd);
    zsurvey->out.add(cmd);
    cmd->callback([zsurvey]() { zsurvey->run(); });
  }

  auto synth = std::make_shared<SynthCmd>();
  {
    CLI::App* cmd = app.add_subcommand(
        "synth",
        "generate a synthetic measured spectrum (Poisson counts in uniform "
        "bins)");
    cmd->add_option("--atom", synth->atom, "atom symbol or JSON file path")
        ->required();
    synth->model.add_params(cmd, true, "truth model tag");
    cmd->add_option("--emin", synth->emin, "first bin lower edge [keV]")
        ->capture_default_str();
    cmd->add_option("--emax", synth->emax, "last bin upper edge [keV]")
        ->capture_default_str();
    cmd->add_option("--bins", synth->bins, "number of uniform bins")
        ->capture_default_str();
    cmd->add_option("--exposure", synth->exposure, "exposure time [s]")
        ->required();
    cmd->add_option("--efficiency", synth->efficiency,
                    "detection efficiency in [0, 1]")
        ->capture_default_str();
    cmd->add_option("--background", synth->background,
                    "background rate [counts/(s keV)]")
        ->capture_default_str();
    cmd->add_option("--seed", synth->seed, "RNG seed")->capture_default_str();
    synth->out.add(cmd);
    cmd->callback([synth]() { synth->run(); });
  }

  auto fit = std::make_shared<FitCmd>();
  {
    CLI::App* cmd = app.add_subcommand(
        "fit",
        "iterative correlation-length analysis of a synthetic spectrum");
    cmd->add_option("--data", fit->data,
                    "synthetic spectrum file (.csv with .meta.json sidecar, "
                    "or single-document .json)")
        ->required();
    cmd->add_option("--prior-rc,--prior", fit->prior,
                    "prior correlation length [m] (R0 for the DP family)");
    cmd->add_option("--model", fit->family,
                    "model family (default: the data file's truth family)")
        ->check(CLI::IsMember({"csl", "dp"}));
    cmd->add_option("--atom", fit->atom,
                    "atom symbol or JSON file path (default: the data file's "
                    "atom echo)");
    cmd->add_option("--ecut", fit->ecut,
                    "colored cutoff [keV] for the fitted shape (default: the "
                    "truth cutoff)");
    cmd->add_option("--alpha", fit->alpha,
                    "same-shell coefficient (default: the data file's echo)");
    cmd->add_option("--beta", fit->beta,
                    "cross-shell coefficient (default: the data file's echo)");
    cmd->add_option("--rel-tol", fit->rel_tol,
                    "convergence tolerance on the relative r_C change")
        ->capture_default_str();
    cmd->add_option("--max-iter", fit->max_iter, "iteration cap")
        ->capture_default_str();
    fit->out.add(cmd, "json");
    cmd->callback([fit]() { fit->run(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help / --version
    }
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
