#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <locale>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>
#include <CLI11.hpp>
#include <json.hpp>

#include "gwm/asymptotics.hpp"
#include "gwm/covariance.hpp"
#include "gwm/diagnostics.hpp"
#include "gwm/errors.hpp"
#include "gwm/fieldsim.hpp"
#include "gwm/fit.hpp"
#include "gwm/local_props.hpp"
#include "gwm/series.hpp"
#include "gwm/spectral.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Output sink: a file when a path is given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw gwm::DataError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

class Csv {
 public:
  Csv(std::ostream& out, const std::vector<std::string>& header) : out_(out) {
    out_.imbue(std::locale::classic());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  void row(const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out_ << ',';
      if (std::isnan(v[i])) {
        out_ << "nan";
      } else {
        out_ << std::setprecision(17) << v[i];
      }
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

struct ModelOpts {
  double alpha = 1.0;
  double gamma = 1.0;
  double lambda = 1.0;
  int dim = 1;
  double rel_tol = gwm::QuadConfig{}.rel_tol;

  gwm::ModelParams params() const {
    gwm::ModelParams p{alpha, gamma, lambda, dim};
    p.validate();
    return p;
  }
  gwm::QuadConfig quad() const {
    gwm::QuadConfig q;
    q.rel_tol = rel_tol;
    q.validate();
    return q;
  }
};

void add_model_options(CLI::App* cmd, ModelOpts& m) {
  cmd->add_option("--alpha", m.alpha, "fractional exponent alpha in (0, 1]")->capture_default_str();
  cmd->add_option("--gamma", m.gamma, "exponent gamma > 0")->capture_default_str();
  cmd->add_option("--lambda", m.lambda, "inverse length scale lambda > 0")->capture_default_str();
  cmd->add_option("--dim", m.dim, "spatial dimension n")->check(CLI::Range(1, 3))->capture_default_str();
  cmd->add_option("--rel-tol", m.rel_tol, "quadrature relative tolerance")->capture_default_str();
}

struct SeriesOpts {
  std::string input;
  std::string format = "auto";
  std::string station = "RPT";
  std::string years = "1973-1978";
};

void add_series_options(CLI::App* cmd, SeriesOpts& s) {
  cmd->add_option("--input", s.input, "wind data file or one-column series")->required();
  cmd->add_option("--format", s.format, "auto, wind or column")
      ->check(CLI::IsMember({"auto", "wind", "column"}))
      ->capture_default_str();
  cmd->add_option("--station", s.station, "wind station code or 1-based index")->capture_default_str();
  cmd->add_option("--years", s.years, "wind year window FIRST-LAST")->capture_default_str();
}

gwm::WindQuery wind_query(const SeriesOpts& s) {
  gwm::WindQuery q;
  q.station = gwm::wind_station_column(s.station);
  const auto dash = s.years.find('-');
  try {
    if (dash == std::string::npos) {
      q.first_year = q.last_year = std::stoi(s.years);
    } else {
      q.first_year = std::stoi(s.years.substr(0, dash));
      q.last_year = std::stoi(s.years.substr(dash + 1));
    }
  } catch (const std::exception&) {
    throw UsageError("--years must look like 1973-1978");
  }
  if (q.first_year > q.last_year) throw UsageError("--years: first year after last year");
  return q;
}

bool looks_like_wind(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gwm::DataError("cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tok;
    std::size_t fields = 0;
    while (ss >> tok) {
      if (fields == 0 && tok[0] == '#') break;
      ++fields;
    }
    if (fields > 0) return fields >= 15;
  }
  throw gwm::DataError("'" + path + "' holds no data");
}

struct LoadedSeries {
  std::vector<double> values;
  bool wind = false;
  gwm::WindData raw;
  gwm::Deseasonalized deseason;
};

// Wind files become deseasonalized velocities; one-column series are centered.
LoadedSeries load_series(const SeriesOpts& s) {
  LoadedSeries out;
  out.wind = s.format == "wind" || (s.format == "auto" && looks_like_wind(s.input));
  if (out.wind) {
    out.raw = gwm::load_wind(s.input, wind_query(s));
    out.deseason = gwm::deseasonalize(out.raw.series);
    out.values = out.deseason.velocity.values;
  } else {
    out.values = gwm::load_column(s.input);
    if (out.values.empty()) throw gwm::DataError("'" + s.input + "' holds no values");
    const double mean = std::accumulate(out.values.begin(), out.values.end(), 0.0) / out.values.size();
    for (double& v : out.values) v -= mean;
  }
  return out;
}

double sample_variance(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / n;
}

gwm::Grid parse_grid(const std::string& grid, const std::vector<double>& spacing) {
  const auto x = grid.find('x');
  gwm::Grid g;
  try {
    if (x == std::string::npos) {
      g = gwm::Grid::line(std::stoul(grid), spacing.at(0));
    } else {
      const double dy = spacing.size() > 1 ? spacing[1] : spacing.at(0);
      g = gwm::Grid::plane(std::stoul(grid.substr(0, x)), std::stoul(grid.substr(x + 1)), spacing.at(0), dy);
    }
  } catch (const std::logic_error&) {
    throw UsageError("--grid must look like 4096 or 256x256");
  }
  g.validate();
  return g;
}

std::vector<double> lag_list(const std::vector<double>& r, const std::vector<double>& range, bool log_spacing) {
  if (!r.empty()) return r;
  if (range.empty()) throw UsageError("give --r or --r-range");
  if (range.size() != 3 || range[2] < 2 || range[2] != std::floor(range[2])) {
    throw UsageError("--r-range takes LO,HI,COUNT with COUNT >= 2");
  }
  const double lo = range[0], hi = range[1];
  const auto count = static_cast<std::size_t>(range[2]);
  if (!(hi > lo) || (log_spacing && !(lo > 0.0))) throw UsageError("--r-range needs 0 <= LO < HI (LO > 0 with --log)");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = log_spacing ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo);
  }
  return out;
}

template <class F>
double or_nan(F&& f) {
  try {
    return f();
  } catch (const gwm::DomainError&) {
    return kNaN;
  }
}

const char* regime_name(gwm::SmallLagRegime r) {
  switch (r) {
    case gwm::SmallLagRegime::Rough: return "rough";
    case gwm::SmallLagRegime::Borderline: return "borderline";
    case gwm::SmallLagRegime::Smooth: return "smooth";
  }
  return "";
}

nlohmann::json params_json(const gwm::ModelParams& p) {
  return {{"alpha", p.alpha}, {"gamma", p.gamma}, {"lambda", p.lambda}, {"n", p.n}};
}

void apply_thread_override() {
  const char* env = std::getenv("GWM_NUM_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) throw UsageError("GWM_NUM_THREADS must be a positive integer");
  omp_set_num_threads(static_cast<int>(n));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Whittle-Matern fields: evaluation, simulation, estimation and diagnostics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gwm 1.0.0");

  // eval
  ModelOpts eval_m;
  std::vector<double> eval_r, eval_range;
  bool eval_log = false;
  std::string eval_out;
  auto* eval = app.add_subcommand("eval", "covariance, variogram and asymptotes at given lags (CSV)");
  add_model_options(eval, eval_m);
  auto* r_opt = eval->add_option("--r", eval_r, "comma-separated lags")->delimiter(',');
  eval->add_option("--r-range", eval_range, "LO,HI,COUNT")->delimiter(',')->excludes(r_opt);
  eval->add_flag("--log", eval_log, "log-spaced --r-range");
  eval->add_option("--out", eval_out, "output CSV (default stdout)");

  // simulate
  ModelOpts sim_m;
  std::string sim_grid = "4096";
  std::vector<double> sim_spacing{1.0};
  std::uint64_t sim_seed = 0;
  std::string sim_format = "csv", sim_out;
  auto* sim = app.add_subcommand("simulate", "exact Gaussian realization on a regular grid");
  add_model_options(sim, sim_m);
  sim->add_option("--grid", sim_grid, "N or NXxNY")->capture_default_str();
  sim->add_option("--spacing", sim_spacing, "DX[,DY]")->delimiter(',')->capture_default_str();
  sim->add_option("--seed", sim_seed, "random seed")->capture_default_str();
  sim->add_option("--format", sim_format, "csv or raw")->check(CLI::IsMember({"csv", "raw"}))->capture_default_str();
  sim->add_option("--out", sim_out, "CSV path (default stdout) or raw prefix (required for raw)");

  // props
  ModelOpts props_m;
  std::string props_out;
  auto* props = app.add_subcommand("props", "sample-path properties (JSON)");
  add_model_options(props, props_m);
  props->add_option("--out", props_out, "output JSON (default stdout)");

  // psd
  SeriesOpts psd_s;
  std::string psd_method = "welch", psd_out;
  std::size_t psd_segment = 73;
  double psd_overlap = 0.5;
  auto* psd = app.add_subcommand("psd", "Welch or periodogram PSD of a series (CSV)");
  add_series_options(psd, psd_s);
  psd->add_option("--method", psd_method, "welch or periodogram")
      ->check(CLI::IsMember({"welch", "periodogram"}))
      ->capture_default_str();
  psd->add_option("--segment", psd_segment, "Welch block length")->capture_default_str();
  psd->add_option("--overlap", psd_overlap, "Welch block overlap in [0, 1)")->capture_default_str();
  psd->add_option("--out", psd_out, "output CSV (default stdout)");

  // variogram
  SeriesOpts vg_s;
  std::size_t vg_max_lag = 60;
  std::string vg_out;
  auto* vg = app.add_subcommand("variogram", "empirical variogram of a series (CSV)");
  add_series_options(vg, vg_s);
  vg->add_option("--max-lag", vg_max_lag, "largest lag")->capture_default_str();
  vg->add_option("--out", vg_out, "output CSV (default stdout)");

  // fit
  SeriesOpts fit_s;
  std::string fit_family = "gwm", fit_out;
  std::size_t fit_starts = 0, fit_max_lag = 60;
  double fit_rel_tol = gwm::QuadConfig{}.rel_tol;
  auto* fit = app.add_subcommand("fit", "maximum-likelihood fit of the WM or GWM model");
  add_series_options(fit, fit_s);
  fit->add_option("--family", fit_family, "wm or gwm")->check(CLI::IsMember({"wm", "gwm"}))->capture_default_str();
  fit->add_option("--starts", fit_starts, "use the first K default starts (0 = all)")->capture_default_str();
  fit->add_option("--max-lag", fit_max_lag, "largest lag of the variogram overlay")->capture_default_str();
  fit->add_option("--rel-tol", fit_rel_tol, "quadrature relative tolerance")->capture_default_str();
  fit->add_option("--out", fit_out, "prefix for <out>.json, <out>_psd.csv, <out>_variogram.csv");

  // ingest
  SeriesOpts ing_s;
  std::string ing_out;
  auto* ing = app.add_subcommand("ingest", "validate a wind file, report its checksum, emit velocities");
  add_series_options(ing, ing_s);
  ing->add_option("--out", ing_out, "velocity CSV");

  // diagnose
  ModelOpts diag_m;
  std::string diag_grid = "4096", diag_input, diag_out;
  std::vector<double> diag_spacing{1e-3};
  std::vector<std::size_t> diag_lags{1, 10};
  std::uint64_t diag_seed = 0;
  std::size_t diag_reps = 1;
  std::vector<double> diag_tail{20.0, 200.0};
  auto* diag = app.add_subcommand("diagnose", "fractal dimension and memory exponent estimates (JSON)");
  add_model_options(diag, diag_m);
  diag->add_option("--input", diag_input, "raw field prefix written by simulate --format raw");
  diag->add_option("--grid", diag_grid, "N or NXxNY")->capture_default_str();
  diag->add_option("--spacing", diag_spacing, "DX[,DY]")->delimiter(',')->capture_default_str();
  diag->add_option("--seed", diag_seed, "random seed")->capture_default_str();
  diag->add_option("--replicates", diag_reps, "replicate simulations for the dimension mean")->capture_default_str();
  diag->add_option("--lags", diag_lags, "LO,HI grid lags")->delimiter(',')->expected(2)->capture_default_str();
  diag->add_option("--tail-range", diag_tail, "LO,HI lags of the tail fit")->delimiter(',')->expected(2)->capture_default_str();
  diag->add_option("--out", diag_out, "output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    apply_thread_override();

    if (*eval) {
      const auto p = eval_m.params();
      const auto q = eval_m.quad();
      const auto lags = lag_list(eval_r, eval_range, eval_log);
      for (double r : lags) {
        if (!(r >= 0.0) || !std::isfinite(r)) throw UsageError("lags must be finite and >= 0");
      }
      const auto c = gwm::covariance_at(p, lags, q);
      Sink sink(eval_out);
      Csv csv(sink.get(), {"r", "C", "variogram", "tail_asymptote", "small_lag_asymptote"});
      for (std::size_t i = 0; i < lags.size(); ++i) {
        const double r = lags[i];
        const double vg = p.finite_variance() ? std::max(0.0, 2.0 * (gwm::variance(p) - c[i])) : kNaN;
        const double tail = r > 0.0 ? or_nan([&] { return gwm::cov_tail_leading(p, r); }) : kNaN;
        const double small = or_nan([&] { return gwm::variogram_small_lag(p, r); });
        csv.row({r, c[i], vg, tail, small});
      }
    } else if (*sim) {
      const auto p = sim_m.params();
      const auto g = parse_grid(sim_grid, sim_spacing);
      gwm::SimulateOptions opt;
      opt.quad = sim_m.quad();
      const auto s = gwm::simulate(p, g, sim_seed, opt);
      if (sim_format == "raw") {
        if (sim_out.empty()) throw UsageError("--format raw needs --out PREFIX");
        gwm::write_raw(sim_out, s);
      } else {
        Sink sink(sim_out);
        gwm::write_csv(sink.get(), s);
      }
    } else if (*props) {
      const auto p = props_m.params();
      const auto lp = gwm::local_props(p);
      const auto law = gwm::small_lag_law(p);
      auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
      const nlohmann::json j = {{"schema", "gwm.props/1"},
                                {"params", params_json(p)},
                                {"variance", gwm::variance(p)},
                                {"regime", regime_name(law.regime)},
                                {"small_lag_coefficient", law.coefficient},
                                {"small_lag_exponent", law.exponent},
                                {"H", lp.holder_exponent},
                                {"fractal_dim", lp.fractal_dim},
                                {"differentiable", lp.differentiable},
                                {"lass_order", opt(lp.lass_order)},
                                {"lass_amplitude", opt(lp.lass_amplitude)},
                                {"memory_exponent", opt(lp.memory_exponent)},
                                {"exponential_memory", lp.exponential_memory}};
      Sink sink(props_out);
      sink.get() << j.dump(2) << '\n';
    } else if (*psd) {
      const auto series = load_series(psd_s);
      const auto est = psd_method == "welch" ? gwm::welch_psd(series.values, {psd_segment, psd_overlap})
                                             : gwm::periodogram(series.values);
      Sink sink(psd_out);
      gwm::write_columns_csv(sink.get(), "omega", "psd", est.omega, est.psd);
    } else if (*vg) {
      const auto series = load_series(vg_s);
      const auto v = gwm::empirical_variogram(series.values, vg_max_lag);
      const double s2 = sample_variance(series.values);
      Sink sink(vg_out);
      Csv csv(sink.get(), {"h", "variogram", "sample_variance"});
      for (std::size_t h = 0; h < v.size(); ++h) csv.row({static_cast<double>(h + 1), v[h], s2});
    } else if (*fit) {
      const auto series = load_series(fit_s);
      const auto family = gwm::parse_family(fit_family);
      gwm::FitOptions opt;
      opt.quad.rel_tol = fit_rel_tol;
      opt.quad.validate();
      if (fit_starts > 0) {
        opt.starts = gwm::default_starts(family);
        if (fit_starts < opt.starts.size()) opt.starts.resize(fit_starts);
      }
      const auto res = gwm::fit(series.values, family, opt);
      auto j = nlohmann::json::parse(gwm::fit_to_json(res));
      j["input"] = {{"path", fit_s.input}, {"kind", series.wind ? "wind" : "column"}};
      if (series.wind) {
        j["input"]["sha256"] = series.raw.sha256;
        j["input"]["station"] = gwm::kWindStations[wind_query(fit_s).station];
        j["input"]["years"] = fit_s.years;
      }
      j["sample_variance"] = sample_variance(series.values);
      if (fit_out.empty()) {
        std::cout << j.dump(2) << '\n';
      } else {
        Sink json_sink(fit_out + ".json");
        json_sink.get() << j.dump(2) << '\n';

        const auto welch = gwm::welch_psd(series.values);
        Sink psd_sink(fit_out + "_psd.csv");
        Csv psd_csv(psd_sink.get(), {"omega", "empirical", "model"});
        for (std::size_t k = 0; k < welch.omega.size(); ++k) {
          psd_csv.row({welch.omega[k], welch.psd[k], gwm::model_psd(res.params, welch.omega[k])});
        }

        const auto emp = gwm::empirical_variogram(series.values, fit_max_lag);
        Sink vg_sink(fit_out + "_variogram.csv");
        Csv vg_csv(vg_sink.get(), {"h", "empirical", "model"});
        for (std::size_t h = 1; h <= emp.size(); ++h) {
          const double model = 2.0 * (res.params.s2 - gwm::extended_cov(res.params, static_cast<double>(h), opt.quad));
          vg_csv.row({static_cast<double>(h), emp[h - 1], model});
        }
      }
    } else if (*ing) {
      if (ing_s.format == "column") throw UsageError("ingest reads wind files only");
      const auto q = wind_query(ing_s);
      const auto raw = gwm::load_wind(ing_s.input, q);
      const auto d = gwm::deseasonalize(raw.series);
      const nlohmann::json j = {{"schema", "gwm.ingest/1"},
                                {"path", ing_s.input},
                                {"sha256", raw.sha256},
                                {"rows_read", raw.rows_read},
                                {"leap_days_dropped", raw.leap_days_dropped},
                                {"station", gwm::kWindStations[q.station]},
                                {"first_year", q.first_year},
                                {"last_year", q.last_year},
                                {"n", d.velocity.values.size()},
                                {"removed_mean", d.velocity.removed_mean},
                                {"sample_variance", sample_variance(d.velocity.values)},
                                {"seasonal_coefficients", d.seasonal.coefficients}};
      std::cout << j.dump(2) << '\n';
      if (!ing_out.empty()) {
        Sink sink(ing_out);
        Csv csv(sink.get(), {"year", "day", "velocity"});
        for (std::size_t i = 0; i < raw.series.size(); ++i) {
          csv.row({static_cast<double>(raw.series.year[i]), static_cast<double>(raw.series.day[i]),
                   d.velocity.values[i]});
        }
      }
    } else if (*diag) {
      const gwm::LagRange lags{diag_lags.at(0), diag_lags.at(1)};
      gwm::FieldSample s;
      if (!diag_input.empty()) {
        s = gwm::read_raw(diag_input);
      } else {
        const auto p = diag_m.params();
        gwm::SimulateOptions opt;
        opt.quad = diag_m.quad();
        s = gwm::simulate(p, parse_grid(diag_grid, diag_spacing), diag_seed, opt);
      }
      auto j = nlohmann::json::parse(gwm::report_to_json(gwm::diagnose(s, lags, diag_tail.at(0), diag_tail.at(1))));
      if (diag_input.empty() && diag_reps > 1) {
        gwm::SimulateOptions opt;
        opt.quad = diag_m.quad();
        const auto st = gwm::fractal_dim_study(s.params, s.grid, diag_reps, diag_seed, lags, opt);
        j["replicates"] = {{"count", diag_reps}, {"mean_fractal_dim", st.mean}, {"std_error", st.std_error}};
      }
      Sink sink(diag_out);
      sink.get() << j.dump(2) << '\n';
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gwm::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const gwm::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gwm::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
