#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "commands.hpp"
#include "pam/errors.hpp"
#include "pam/rng.hpp"

namespace {

// Flat key=value files go through CLI11's TOML reader; a file starting with
// '{' is read as a flat JSON object instead.
class FlatConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& is) const override {
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream again(text);
      return CLI::ConfigTOML::from_config(again);
    }
    const auto j = nlohmann::json::parse(text);
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      auto scalar = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

int exit_code_for(pam::ErrorCode c) {
  switch (c) {
    case pam::ErrorCode::ToleranceNotMet:
    case pam::ErrorCode::NonIntegrable:
    case pam::ErrorCode::NonIntegrableEndpoint:
    case pam::ErrorCode::EmbeddingNotPSD:
    case pam::ErrorCode::Unstable:
    case pam::ErrorCode::Io:
      return 3;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  pamcli::Options o;
  o.seed = pam::kDefaultSeed;
  if (const char* env = std::getenv("PAM_SEED")) o.seed = std::strtoull(env, nullptr, 10);

  CLI::App app{"Parabolic Anderson model with fractional noise: solvability, chaos moments, fields, simulation"};
  app.set_help_flag("--help", "print this help and exit");
  app.config_formatter(std::make_shared<FlatConfig>());
  app.set_config("--config", "", "flat key=value or JSON config file");
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "csv";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", o.out, "output file (stdout when empty)");
  app.add_option("--seed", o.seed, "random seed (PAM_SEED overrides the built-in default)");
  app.add_option("--jobs", o.jobs, "worker cap (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--d", o.d, "spatial dimension (defaults to the number of --h values)");
  app.add_option("--h0", o.h0, "time Hurst exponent");
  app.add_option("--h", o.h, "spatial Hurst exponents")->delimiter(',');

  app.add_option("--sweep", o.sweep, "phase sweep: h0-htotal or h1-h2");
  app.add_option("--x-range", o.x_range, "lo,hi of the swept x coordinate")->delimiter(',')->expected(2);
  app.add_option("--y-range", o.y_range, "lo,hi of the swept y coordinate")->delimiter(',')->expected(2);
  app.add_option("--nx", o.nx, "points along x");
  app.add_option("--ny", o.ny, "points along y");
  app.add_option("--svg", o.svg, "phase heat map output");

  app.add_option("--n-max", o.n_max, "largest chaos order");
  app.add_option("--t", o.t, "time horizon");
  app.add_option("--method", o.method, "quadrature, spectral or temporal");
  app.add_option("--samples", o.samples, "Monte Carlo samples per order");
  app.add_option("--points", o.points, "Gauss points per simplex direction (0 = automatic)");

  app.add_option("--eps-ladder", o.eps_ladder, "hi:lo in half decades, or a comma list");

  app.add_option("--time-lattice", o.time_lattice, "kmin:kmax:step");
  app.add_option("--space-lattice", o.space_lattice, "kmin:kmax:step, used for every axis");
  app.add_option("--field-method", o.field_method, "cholesky or circulant");
  app.add_option("--count", o.count, "number of field samples");
  app.add_flag("--validate", o.validate, "check the empirical covariance");
  app.add_option("--binary", o.binary, "write the first sample in the binary field format");

  app.add_option("--period", o.period, "spatial period L");
  app.add_option("--grid", o.grid, "grid size M (power of two)");
  app.add_option("--dt", o.dt, "time step");
  app.add_option("--paths", o.paths, "number of paths");
  app.add_option("--slices", o.slices, "recorded time slices");
  app.add_option("--amplitude", o.amplitude, "noise amplitude");
  app.add_flag("--study", o.study, "three-level convergence study ending at --grid/--dt");

  app.add_option("--suite", o.suite, "acceptance suite");
  app.add_option("--criteria", o.criteria, "subset of criteria ids")->delimiter(',');

  for (const char* name : {"check", "phase", "chaos", "upsilon", "field", "simulate", "verify"}) {
    app.add_subcommand(name)->fallthrough()->set_help_flag("--help", "print this help and exit");
  }
  app.get_subcommand("check")->description("classify solvability of one parameter tuple");
  app.get_subcommand("phase")->description("sweep the solvability classifier over a 2-d grid");
  app.get_subcommand("chaos")->description("table of chaos second moments");
  app.get_subcommand("upsilon")->description("cutoff study of the critical integral");
  app.get_subcommand("field")->description("sample and validate fractional Brownian sheets");
  app.get_subcommand("simulate")->description("Monte Carlo of the white-in-time equation");
  app.get_subcommand("verify")->description("run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  o.command = app.get_subcommands().front()->get_name();
  o.format = format == "json" ? pamcli::Format::Json : pamcli::Format::Csv;
  if (o.jobs > 0) omp_set_num_threads(o.jobs);

  pamcli::Outcome r;
  try {
    if (o.command == "check") r = pamcli::cmd_check(o);
    else if (o.command == "phase") r = pamcli::cmd_phase(o);
    else if (o.command == "chaos") r = pamcli::cmd_chaos(o);
    else if (o.command == "upsilon") r = pamcli::cmd_upsilon(o);
    else if (o.command == "field") r = pamcli::cmd_field(o);
    else if (o.command == "simulate") r = pamcli::cmd_simulate(o);
    else r = pamcli::cmd_verify(o);
  } catch (const pam::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  for (const auto& line : r.lines) std::cerr << line << '\n';
  const std::string payload = o.format == pamcli::Format::Csv ? pamcli::render_csv(o, r) : pamcli::render_json(o, r);
  if (o.out.empty()) {
    std::cout << payload;
  } else {
    std::ofstream os(o.out);
    if (!os) {
      std::cerr << "error: cannot write " << o.out << '\n';
      return 3;
    }
    os << payload;
  }
  if (!o.svg.empty() && !r.svg.empty()) {
    std::ofstream os(o.svg);
    os << r.svg;
  }
  return r.exit_code;
}
