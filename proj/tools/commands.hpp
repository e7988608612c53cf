#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace pamcli {

enum class Format { Csv, Json };

/// Resolved run configuration shared by all subcommands.
struct Options {
  std::string command;
  Format format = Format::Csv;
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 0;

  int d = 0;
  double h0 = 0.5;
  std::vector<double> h{0.5};

  // phase
  std::string sweep = "h0-htotal";
  std::vector<double> x_range, y_range;
  int nx = 200, ny = 200;
  std::string svg;

  // chaos
  int n_max = 4;
  double t = 1.0;
  std::string method = "quadrature";
  std::int64_t samples = 1'000'000;
  int points = 0;

  // upsilon
  std::string eps_ladder = "1e-2:1e-4";

  // field
  std::string time_lattice = "0:8:0.25";
  std::string space_lattice = "-6:6:0.5";
  std::string field_method = "circulant";
  std::int64_t count = 100;
  bool validate = false;
  std::string binary;

  // simulate
  double period = 8.0;
  int grid = 128;
  double dt = 1.0 / 512.0;
  std::int64_t paths = 1000;
  int slices = 8;
  double amplitude = 1.0;
  bool study = false;

  // verify
  std::string suite = "primary";
  std::vector<int> criteria;

  nlohmann::ordered_json to_json() const;
};

/// One output table; numeric cells are doubles or integers.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;
};

struct Outcome {
  int exit_code = 0;
  Table table;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  /// Human-readable lines for the terminal (verify).
  std::vector<std::string> lines;
  /// SVG document for phase sweeps.
  std::string svg;
};

Outcome cmd_check(const Options& o);
Outcome cmd_phase(const Options& o);
Outcome cmd_chaos(const Options& o);
Outcome cmd_upsilon(const Options& o);
Outcome cmd_field(const Options& o);
Outcome cmd_simulate(const Options& o);
Outcome cmd_verify(const Options& o);

/// CSV with 17 significant digits; the resolved config is echoed as leading '#' lines.
std::string render_csv(const Options& o, const Outcome& r);
/// {"command", "config", "summary", "rows", "metadata"}; only metadata holds the timestamp.
std::string render_json(const Options& o, const Outcome& r);

/// "1e-2:1e-4" expands to 1e-2, 3e-3, 1e-3, 3e-4, 1e-4; a comma list is taken as is.
std::vector<double> parse_ladder(const std::string& s);
/// "kmin:kmax:step" to a lattice axis.
std::vector<double> parse_lattice(const std::string& s);

}  // namespace pamcli
