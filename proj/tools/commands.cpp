#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "pam/acceptance.hpp"
#include "pam/chaos.hpp"
#include "pam/errors.hpp"
#include "pam/field.hpp"
#include "pam/field_io.hpp"
#include "pam/params.hpp"
#include "pam/solver.hpp"
#include "svg.hpp"

namespace pamcli {

using json = nlohmann::ordered_json;

namespace {

pam::HurstParams make_params(const Options& o) {
  std::vector<double> h = o.h;
  int d = o.d > 0 ? o.d : static_cast<int>(h.size());
  if (h.size() == 1 && d > 1) h.assign(static_cast<size_t>(d), h[0]);
  if (static_cast<int>(h.size()) != d)
    throw pam::Error(pam::ErrorCode::InvalidSpec, "--d does not match the number of --h values");
  return pam::HurstParams::validate(d, o.h0, h);
}

json margins_json(const pam::Margins& m) {
  return json{{"sufficient", m.sufficient},
              {"critical", m.critical},
              {"necessary", m.necessary},
              {"chen_global", m.chen_global},
              {"chen_local", m.chen_local}};
}

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string csv_cell(const json& c) {
  if (c.is_null()) return "";
  if (c.is_number_float()) return fmt17(c.get<double>());
  if (c.is_number()) return c.dump();
  if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
  std::string s = c.get<std::string>();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return s;
}

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json Options::to_json() const {
  json j;
  j["command"] = command;
  j["format"] = format == Format::Csv ? "csv" : "json";
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["d"] = d > 0 ? d : static_cast<int>(h.size());
  j["h0"] = h0;
  j["h"] = h;
  if (command == "phase") {
    j["sweep"] = sweep;
    j["x_range"] = x_range;
    j["y_range"] = y_range;
    j["nx"] = nx;
    j["ny"] = ny;
  } else if (command == "chaos") {
    j["n_max"] = n_max;
    j["t"] = t;
    j["method"] = method;
    j["samples"] = samples;
    j["points"] = points;
  } else if (command == "upsilon") {
    j["t"] = t;
    j["eps_ladder"] = eps_ladder;
  } else if (command == "field") {
    j["time_lattice"] = time_lattice;
    j["space_lattice"] = space_lattice;
    j["field_method"] = field_method;
    j["count"] = count;
    j["validate"] = validate;
  } else if (command == "simulate") {
    j["t"] = t;
    j["period"] = period;
    j["grid"] = grid;
    j["dt"] = dt;
    j["paths"] = paths;
    j["slices"] = slices;
    j["amplitude"] = amplitude;
    j["study"] = study;
  } else if (command == "verify") {
    j["suite"] = suite;
    j["criteria"] = criteria;
  }
  return j;
}

std::vector<double> parse_ladder(const std::string& s) {
  std::vector<double> out;
  const auto colon = s.find(':');
  if (colon == std::string::npos) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
  }
  const double hi = std::stod(s.substr(0, colon));
  const double lo = std::stod(s.substr(colon + 1));
  if (!(hi > lo && lo > 0.0)) throw pam::Error(pam::ErrorCode::InvalidSpec, "ladder must run from large to small");
  // Half-decade steps rounded to one significant digit: 1e-2, 3e-3, 1e-3, ...
  for (int k = 0;; ++k) {
    const double raw = hi * std::pow(10.0, -0.5 * k);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double v = std::round(raw / mag) * mag;
    if (v < lo * (1.0 - 1e-9)) break;
    out.push_back(v);
  }
  return out;
}

std::vector<double> parse_lattice(const std::string& s) {
  int kmin = 0, kmax = 0;
  double step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream is(s);
  if (!(is >> kmin >> c1 >> kmax >> c2 >> step) || c1 != ':' || c2 != ':' || kmax < kmin || !(step > 0.0))
    throw pam::Error(pam::ErrorCode::InvalidSpec, "lattice must read kmin:kmax:step");
  return pam::lattice(kmin, kmax, step);
}

Outcome cmd_check(const Options& o) {
  const auto p = make_params(o);
  const auto v = pam::classify(p);
  Outcome r;
  r.table.columns = {"d", "h0", "h_total", "d_star", "h_star", "verdict", "condition", "chen_global", "chen_local",
                     "margin_sufficient", "margin_critical", "margin_necessary", "necessary_boundary"};
  r.table.rows.push_back({p.d(), p.h0(), p.h_total(), p.d_star(), p.h_star(), pam::to_string(v.verdict),
                          v.matched_condition, v.chen_sufficient.first, v.chen_sufficient.second,
                          v.margins.sufficient, v.margins.critical, v.margins.necessary, v.on_necessary_boundary});
  r.summary = json{{"params", p.describe()},
                   {"verdict", pam::to_string(v.verdict)},
                   {"condition", v.matched_condition},
                   {"chen", {v.chen_sufficient.first, v.chen_sufficient.second}},
                   {"margins", margins_json(v.margins)}};
  return r;
}

Outcome cmd_phase(const Options& o) {
  const bool h1h2 = o.sweep == "h1-h2";
  if (!h1h2 && o.sweep != "h0-htotal") throw pam::Error(pam::ErrorCode::InvalidSpec, "sweep must be h0-htotal or h1-h2");
  const int d = h1h2 ? 2 : (o.d > 0 ? o.d : static_cast<int>(o.h.size()));
  std::vector<double> xr = o.x_range, yr = o.y_range;
  if (xr.empty()) xr = h1h2 ? std::vector<double>{0.005, 0.995} : std::vector<double>{0.5, 0.995};
  if (yr.empty()) yr = h1h2 ? std::vector<double>{0.005, 0.995} : std::vector<double>{0.005, d - 0.005};
  if (xr.size() != 2 || yr.size() != 2 || !(xr[0] < xr[1]) || !(yr[0] < yr[1]) || o.nx < 2 || o.ny < 2)
    throw pam::Error(pam::ErrorCode::InvalidSpec, "sweep ranges need lo < hi and at least 2 points per axis");
  if (h1h2 && o.d > 0 && o.d != 2) throw pam::Error(pam::ErrorCode::InvalidSpec, "h1-h2 sweeps need d = 2");

  Outcome r;
  r.table.columns = {h1h2 ? "h1" : "h0", h1h2 ? "h2" : "h_total", "verdict", "condition",
                     "margin_sufficient", "margin_critical", "margin_necessary"};
  HeatMap map;
  map.nx = o.nx;
  map.ny = o.ny;
  map.x_min = xr[0];
  map.x_max = xr[1];
  map.y_min = yr[0];
  map.y_max = yr[1];
  map.x_label = h1h2 ? "H1" : "H0";
  map.y_label = h1h2 ? "H2" : "H_total";
  map.title = h1h2 ? "solvability, d = 2, H0 = " + std::to_string(o.h0) : "solvability, d = " + std::to_string(d);
  map.legend = {"GlobalUnique", "LocalUnique", "NoLocalSolution", "Indeterminate"};
  map.colors = {"#4c9a5f", "#e0b040", "#c0504d", "#9aa4b5"};
  std::vector<long> counts(4, 0);
  for (int j = 0; j < o.ny; ++j) {
    const double y = yr[0] + (yr[1] - yr[0]) * j / (o.ny - 1);
    for (int i = 0; i < o.nx; ++i) {
      const double x = xr[0] + (xr[1] - xr[0]) * i / (o.nx - 1);
      const auto p = h1h2 ? pam::HurstParams::validate(2, o.h0, {x, y})
                          : pam::HurstParams::validate(d, x, std::vector<double>(static_cast<size_t>(d), y / d));
      const auto v = pam::classify(p);
      r.table.rows.push_back({x, y, pam::to_string(v.verdict), v.matched_condition, v.margins.sufficient,
                              v.margins.critical, v.margins.necessary});
      const int c = static_cast<int>(v.verdict);
      map.cells.push_back(c);
      ++counts[static_cast<size_t>(c)];
    }
  }
  for (size_t k = 0; k < 4; ++k) r.summary[map.legend[k]] = counts[k];
  r.svg = render_heat_map(map);
  return r;
}

Outcome cmd_chaos(const Options& o) {
  const auto p = make_params(o);
  if (o.n_max < 1) throw pam::Error(pam::ErrorCode::InvalidSpec, "--n-max must be >= 1");
  pam::ChaosMomentRequest base;
  base.t = o.t;
  base.params = p;
  base.method = pam::chaos_method_from_string(o.method);
  base.mc.samples = o.samples;
  base.mc.seed = o.seed;
  base.mc.jobs = o.jobs;
  base.quadrature_points = o.points;
  if (base.method == pam::ChaosMethod::SimplexQuadrature && !p.white_in_time())
    throw pam::Error(pam::ErrorCode::PreconditionViolation, "quadrature needs --h0 0.5; use --method temporal");
  Outcome r;
  r.table.columns = {"n", "value", "std_error", "method", "ratio", "divergent", "divergence_heuristic", "samples"};
  r.table.rows.push_back({0, 1.0, nullptr, "exact", nullptr, false, false, 0});
  double prev = 1.0, total = 1.0;
  for (int n = 1; n <= o.n_max; ++n) {
    pam::ChaosMomentRequest req = base;
    req.n = n;
    req.mc.seed = o.seed + static_cast<std::uint64_t>(n);
    const auto e = pam::chaos_moment(req);
    const json ratio = (!e.divergent && prev > 0.0) ? json(e.value / prev) : json(nullptr);
    r.table.rows.push_back({n, e.divergent ? json(nullptr) : json(e.value), opt_number(e.std_error),
                            pam::to_string(e.method), ratio, e.divergent, e.divergence_heuristic, e.samples});
    if (!e.divergent) total += e.value;
    prev = e.value;
  }
  r.summary = json{{"params", p.describe()}, {"second_moment_partial_sum", total}};
  return r;
}

Outcome cmd_upsilon(const Options& o) {
  const auto p = make_params(o);
  const auto ladder = parse_ladder(o.eps_ladder);
  const auto s = pam::upsilon_study(p, o.t, ladder);
  Outcome r;
  r.table.columns = {"epsilon", "value"};
  for (size_t i = 0; i < ladder.size(); ++i) r.table.rows.push_back({ladder[i], s.value[i]});
  const double predicted = -(4.0 * p.h0() + 2.0 * p.h_total() - 2.5);
  r.summary = json{{"params", p.describe()},
                   {"slope", s.corrected_slope},
                   {"correction_exponent", s.correction_exponent},
                   {"naive_loglog_slope", s.slope},
                   {"halving_change", s.halving_change},
                   {"predicted_slope_d1", predicted}};
  return r;
}

Outcome cmd_field(const Options& o) {
  const auto p = make_params(o);
  pam::GridSpec g;
  g.time_points = parse_lattice(o.time_lattice);
  g.space_points.assign(static_cast<size_t>(p.d()), parse_lattice(o.space_lattice));
  const auto method = pam::field_method_from_string(o.field_method);
  if (o.count < 1) throw pam::Error(pam::ErrorCode::InvalidSpec, "--count must be >= 1");
  const auto samples = pam::sample_batch(g, p, method, o.seed, static_cast<size_t>(o.count));
  Outcome r;
  const auto& first = samples.front();
  r.table.columns = {"t"};
  for (int a = 1; a <= p.d(); ++a) r.table.columns.push_back("x" + std::to_string(a));
  r.table.columns.push_back("value");
  r.table.columns.push_back("variance_exact");
  std::vector<size_t> idx(g.axes(), 0);
  for (size_t k = 0; k < first.values.size(); ++k) {
    std::vector<json> row;
    for (size_t a = 0; a < idx.size(); ++a) row.push_back(g.axis(a)[idx[a]]);
    row.push_back(first.values[k]);
    row.push_back(pam::sheet_covariance(g, p, k, k));
    r.table.rows.push_back(std::move(row));
    for (size_t a = idx.size(); a-- > 0;) {
      if (++idx[a] < g.axis(a).size()) break;
      idx[a] = 0;
    }
  }
  r.summary = json{{"params", p.describe()},
                   {"points", g.total_points()},
                   {"samples", samples.size()},
                   {"method", pam::to_string(method)},
                   {"fell_back", first.fell_back},
                   {"warnings", first.warnings}};
  if (!o.binary.empty()) pam::save_field(o.binary, first);
  if (o.validate) {
    const auto rep = pam::covariance_validate(samples, p);
    r.summary["validation"] = json{{"pairs", rep.pairs},
                                   {"within_3se", rep.within},
                                   {"fraction", rep.fraction},
                                   {"max_abs_z", rep.max_abs_z},
                                   {"pass", rep.pass}};
    if (!rep.pass) r.exit_code = 3;
  }
  return r;
}

Outcome cmd_simulate(const Options& o) {
  if (o.h.size() != 1 || (o.d > 1))
    throw pam::Error(pam::ErrorCode::InvalidSpec, "the solver is one-dimensional");
  if (o.h0 != 0.5) throw pam::Error(pam::ErrorCode::InvalidSpec, "the solver needs white-in-time noise (--h0 0.5)");
  pam::SchemeSpec s;
  s.period = o.period;
  s.grid = o.grid;
  s.dt = o.dt;
  s.horizon = o.t;
  s.h = o.h[0];
  s.amplitude = o.amplitude;
  s.paths = static_cast<size_t>(o.paths);
  s.seed = o.seed;
  s.slices = o.slices;
  Outcome r;
  if (!o.study) {
    const auto st = pam::simulate_paths(s);
    r.table.columns = {"t", "mean", "mean_se", "second_moment", "second_moment_se", "paths"};
    for (const auto& sl : st.slices)
      r.table.rows.push_back({sl.t, sl.mean, sl.mean_se, sl.second_moment, sl.second_moment_se, sl.paths});
    return r;
  }
  std::vector<pam::SchemeSpec> levels;
  for (int k = 2; k >= 0; --k) {
    pam::SchemeSpec l = s;
    l.grid = s.grid >> k;
    l.dt = s.dt * std::pow(4.0, k);
    l.slices = 1;
    levels.push_back(l);
  }
  const auto rep = pam::convergence_study(levels);
  r.table.columns = {"grid", "dt", "second_moment", "second_moment_se"};
  for (size_t i = 0; i < rep.dt.size(); ++i)
    r.table.rows.push_back({rep.grid[i], rep.dt[i], rep.second_moment[i], rep.second_moment_se[i]});
  r.summary = json{{"observed_order", rep.observed_order},
                   {"extrapolated", rep.extrapolated},
                   {"extrapolated_se", rep.extrapolated_se},
                   {"extrapolation_valid", rep.extrapolation_valid},
                   {"note", rep.note}};
  return r;
}

Outcome cmd_verify(const Options& o) {
  if (o.suite != "primary") throw pam::Error(pam::ErrorCode::InvalidSpec, "the only suite is 'primary'");
  pam::AcceptanceOptions a;
  a.seed = o.seed;
  const auto results = pam::run_acceptance(a, o.criteria);
  Outcome r;
  r.table.columns = {"criterion", "name", "pass", "seconds", "budget_seconds", "detail"};
  bool all = true;
  for (const auto& c : results) {
    std::string detail;
    for (const auto& d : c.detail) detail += (detail.empty() ? "" : " ") + d;
    r.table.rows.push_back({c.id, c.name, c.pass, c.seconds, c.budget_seconds, detail});
    char head[128];
    std::snprintf(head, sizeof head, "[%s] %2d %-42s ", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str());
    r.lines.push_back(head + detail);
    all = all && c.pass;
  }
  r.summary = json{{"all_pass", all}};
  r.exit_code = all ? 0 : 4;
  return r;
}

std::string render_csv(const Options& o, const Outcome& r) {
  std::ostringstream os;
  os << "# config: " << o.to_json().dump() << '\n';
  if (!r.summary.empty()) os << "# summary: " << r.summary.dump() << '\n';
  for (size_t i = 0; i < r.table.columns.size(); ++i) os << (i ? "," : "") << r.table.columns[i];
  os << '\n';
  for (const auto& row : r.table.rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
  return os.str();
}

std::string render_json(const Options& o, const Outcome& r) {
  json j;
  j["command"] = o.command;
  j["config"] = o.to_json();
  j["summary"] = r.summary;
  json rows = json::array();
  for (const auto& row : r.table.rows) {
    json obj;
    for (size_t i = 0; i < row.size(); ++i) obj[r.table.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["metadata"] = json{{"timestamp", stamp}};
  return j.dump(2) + "\n";
}

}  // namespace pamcli
