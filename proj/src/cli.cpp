#include "robust_loss/cli.hpp"

#include "robust_loss/losses.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace robust_loss::cli {

using nlohmann::json;

std::string format_double(double v) {
  if (v == 0.0) return "0";
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

namespace {

std::string shortest(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("shortest: conversion failed");
  return std::string(buf.data(), ptr);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<document>: invalid JSON: ") + e.what());
  }
}

// Reads fields of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_.empty() ? "<document>" : path_, "must be an object");
  }

  std::string field_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* find(std::string_view key) {
    seen_.insert(std::string(key));
    const auto it = obj_.find(std::string(key));
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& require(std::string_view key) {
    const json* v = find(key);
    if (v == nullptr) fail(field_path(key), "is required");
    return *v;
  }

  void finish() const {
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.contains(key)) fail(field_path(key), "unknown key");
    }
  }

  [[noreturn]] static void fail(const std::string& path, std::string_view message) {
    throw ConfigError(path + ": " + std::string(message));
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) ObjectReader::fail(path, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) ObjectReader::fail(path, "must be finite");
  return d;
}

std::uint64_t as_unsigned(const json& v, const std::string& path) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned())) {
    ObjectReader::fail(path, "must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::vector<double> as_number_list(const json& v, const std::string& path) {
  if (!v.is_array()) ObjectReader::fail(path, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<double> positive_list(const json& v, const std::string& path, bool allow_zero) {
  auto values = as_number_list(v, path);
  if (values.empty()) ObjectReader::fail(path, "must not be empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool ok = allow_zero ? values[i] >= 0.0 : values[i] > 0.0;
    if (!ok) {
      ObjectReader::fail(path + "[" + std::to_string(i) + "]",
                         allow_zero ? "must be >= 0" : "must be > 0");
    }
  }
  return values;
}

}  // namespace

// ---- loss-table ----------------------------------------------------------

void LossTableOptions::validate() const {
  if (alphas.empty()) throw ConfigError("alphas: must not be empty");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!std::isfinite(alphas[i]) || !(alphas[i] > 0.0)) {
      throw ConfigError("alphas[" + std::to_string(i) + "]: must be finite and > 0");
    }
  }
  if (!std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw ConfigError("x_min/x_max: must be finite");
  }
  if (!(x_min < x_max)) throw ConfigError("x_max: must be greater than x_min");
  if (n_points < 2) throw ConfigError("n_points: must be >= 2");
}

LossTableOptions parse_loss_table_config(std::string_view json_text) {
  const json doc = parse_json(json_text);
  ObjectReader r(doc, "");
  LossTableOptions o;
  if (const json* v = r.find("alphas")) o.alphas = positive_list(*v, "alphas", false);
  if (const json* v = r.find("x_min")) o.x_min = as_number(*v, "x_min");
  if (const json* v = r.find("x_max")) o.x_max = as_number(*v, "x_max");
  if (const json* v = r.find("n_points")) o.n_points = as_unsigned(*v, "n_points");
  r.finish();
  o.validate();
  return o;
}

std::string loss_table_csv(double alpha, double x_min, double x_max, std::size_t n_points) {
  LossTableOptions check;
  check.alphas = {alpha};
  check.x_min = x_min;
  check.x_max = x_max;
  check.n_points = n_points;
  check.validate();

  const losses::HuberParams huber_params(alpha);
  const auto lower = losses::lower_bound_params(alpha);
  const auto upper = losses::upper_bound_params(alpha);
  std::string out = "x,huber,huber_grad,kl_lower,kl_lower_grad,kl_upper,kl_upper_grad\n";
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x = i + 1 == n_points
                         ? x_max
                         : x_min + (x_max - x_min) * static_cast<double>(i) /
                                       static_cast<double>(n_points - 1);
    const std::array<double, 7> row{x,
                                    losses::huber(x, huber_params),
                                    losses::huber_grad(x, huber_params),
                                    losses::kl_loss(x, lower),
                                    losses::kl_loss_grad(x, lower),
                                    losses::kl_loss(x, upper),
                                    losses::kl_loss_grad(x, upper)};
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::filesystem::path loss_table_path(const std::filesystem::path& out, double alpha) {
  std::filesystem::path p = out;
  const std::string name =
      out.stem().string() + "_alpha=" + shortest(alpha) + out.extension().string();
  p.replace_filename(name);
  return p;
}

std::vector<std::filesystem::path> cmd_loss_table(const LossTableOptions& options,
                                                  const std::filesystem::path& out) {
  options.validate();
  std::vector<std::filesystem::path> written;
  for (double alpha : options.alphas) {
    const auto path = loss_table_path(out, alpha);
    write_file(path, loss_table_csv(alpha, options.x_min, options.x_max, options.n_points));
    written.push_back(path);
  }
  return written;
}

// ---- verify --------------------------------------------------------------

int cmd_verify(const verify::ToleranceProfile& profile, std::uint64_t seed,
               const verify::FaultInjection& faults, std::ostream& out) {
  const verify::Report report = verify::run_all(profile, seed, faults);
  out << "profile " << profile.name << " seed " << seed << '\n';
  for (const auto& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " max=" << format_double(c.max_violation)
        << " tol=" << format_double(c.tolerance);
    if (!c.detail.empty()) out << " (" << c.detail << ')';
    out << '\n';
  }
  for (const auto& l : report.limits) {
    out << "limit alpha=" << shortest(l.alpha) << " upper_minus_huber="
        << format_double(l.upper_gap)
        << " huber_minus_lower_minus_half_alpha_sq=" << format_double(l.lower_gap) << '\n';
  }
  if (const auto* failure = report.first_failure()) {
    out << "FAILED: " << failure->name << '\n';
    return 1;
  }
  out << "OK: " << report.checks.size() << " checks passed\n";
  return 0;
}

// ---- toyfit --------------------------------------------------------------

ToyfitRun parse_toyfit_config(std::string_view json_text) {
  const json doc = parse_json(json_text);
  ObjectReader r(doc, "");
  ToyfitRun run;
  toyfit::ToyConfig& base = run.base;

  if (const json* v = r.find("theta_star")) {
    auto coeffs = as_number_list(*v, "theta_star");
    if (coeffs.empty()) ObjectReader::fail("theta_star", "must not be empty");
    base.theta_star = toyfit::PolyModel(std::move(coeffs));
  }
  if (const json* v = r.find("fit_degree_count")) {
    base.fit_degree_count = as_unsigned(*v, "fit_degree_count");
    if (base.fit_degree_count < 1) ObjectReader::fail("fit_degree_count", "must be >= 1");
  }
  if (const json* v = r.find("n_samples")) base.n_samples = as_unsigned(*v, "n_samples");
  if (base.n_samples < base.fit_degree_count) {
    ObjectReader::fail("n_samples", "must be >= fit_degree_count");
  }
  if (const json* v = r.find("delta")) {
    base.delta = as_number(*v, "delta");
    if (!(base.delta > 0.0)) ObjectReader::fail("delta", "must be > 0");
  }
  auto family = distributions::NoiseFamily::Laplace;
  if (const json* v = r.find("noise_family")) {
    if (!v->is_string()) ObjectReader::fail("noise_family", "must be a string");
    const auto parsed = distributions::parse_noise_family(v->get<std::string>());
    if (!parsed) {
      ObjectReader::fail("noise_family", "must be one of laplace, logistic, cauchy, gaussian, none");
    }
    family = *parsed;
  }
  run.noise_scales = positive_list(r.require("noise_scales"), "noise_scales", true);
  base.noise = distributions::NoiseSpec(family, run.noise_scales.front());
  run.alpha_grid = positive_list(r.require("alpha_grid"), "alpha_grid", false);
  run.lr_grid = positive_list(r.require("lr_grid"), "lr_grid", false);
  if (const json* v = r.find("iterations")) {
    run.iterations = as_unsigned(*v, "iterations");
    if (run.iterations < 1) ObjectReader::fail("iterations", "must be >= 1");
  }
  if (const json* v = r.find("repeats")) {
    run.repeats = as_unsigned(*v, "repeats");
    if (run.repeats < 1) ObjectReader::fail("repeats", "must be >= 1");
  }
  if (const json* v = r.find("seed")) base.seed = as_unsigned(*v, "seed");
  r.finish();
  base.validate();
  return run;
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json config_echo(const ToyfitRun& run) {
  const auto& b = run.base;
  return {{"theta_star", std::vector<double>(b.theta_star.coeffs().begin(),
                                             b.theta_star.coeffs().end())},
          {"fit_degree_count", b.fit_degree_count},
          {"n_samples", b.n_samples},
          {"delta", b.delta},
          {"noise_family", std::string(distributions::to_string(b.noise.family()))},
          {"noise_scales", run.noise_scales},
          {"alpha_grid", run.alpha_grid},
          {"lr_grid", run.lr_grid},
          {"iterations", run.iterations},
          {"repeats", run.repeats},
          {"seed", b.seed}};
}

}  // namespace

ToyfitOutput run_toyfit(const ToyfitRun& run) {
  ToyfitOutput out;
  out.curve = toyfit::noise_sweep(run.base, run.noise_scales, run.alpha_grid, run.lr_grid,
                                  run.iterations, run.repeats);

  out.csv = "noise_scale,repeat,optimal_alpha,best_lr,best_rmse\n";
  json sweep = json::array();
  for (const auto& point : out.curve) {
    json repeats = json::array();
    for (std::size_t r = 0; r < point.repeats.size(); ++r) {
      const auto& outcome = point.repeats[r];
      out.csv += format_double(point.noise_scale) + "," + std::to_string(r) + ",";
      json entry = {{"repeat", r}, {"seed", outcome.seed}};
      if (outcome.result) {
        const auto& res = *outcome.result;
        out.csv += format_double(res.best_alpha) + "," + format_double(res.best_lr) + "," +
                   format_double(res.best_rmse) + "\n";
        entry["status"] = "ok";
        entry["best"] = {{"alpha", res.best_alpha},
                         {"learning_rate", res.best_lr},
                         {"rmse", res.best_rmse}};
      } else {
        out.csv += "nan,nan,nan\n";
        entry["status"] = "all_diverged";
      }
      json cells = json::array();
      const auto& table = outcome.result ? outcome.result->table : std::vector<toyfit::GridCell>{};
      for (const auto& cell : table) {
        cells.push_back({{"alpha", cell.alpha},
                         {"learning_rate", cell.learning_rate},
                         {"rmse", number_or_null(cell.rmse)},
                         {"diverged_at", cell.diverged_at ? json(*cell.diverged_at) : json(nullptr)}});
      }
      entry["cells"] = std::move(cells);
      repeats.push_back(std::move(entry));
    }
    sweep.push_back({{"noise_scale", point.noise_scale},
                     {"mean_optimal_alpha", number_or_null(point.mean_optimal_alpha)},
                     {"repeats", std::move(repeats)}});
  }
  const json sidecar = {{"config", config_echo(run)}, {"sweep", std::move(sweep)}};
  out.sidecar = sidecar.dump(2) + "\n";
  return out;
}

ToyfitOutput cmd_toyfit(const std::filesystem::path& config_path,
                        const std::filesystem::path& out,
                        std::optional<std::uint64_t> seed_override) {
  ToyfitRun run = parse_toyfit_config(read_file(config_path));
  if (seed_override) run.base.seed = *seed_override;
  ToyfitOutput result = run_toyfit(run);
  write_file(out, result.csv);
  write_file(std::filesystem::path(out.string() + ".json"), result.sidecar);
  return result;
}

// ---- interp --------------------------------------------------------------

std::optional<TableFormat> parse_table_format(std::string_view name) noexcept {
  if (name == "csv") return TableFormat::Csv;
  if (name == "json") return TableFormat::Json;
  if (name == "markdown" || name == "md") return TableFormat::Markdown;
  return std::nullopt;
}

namespace {

interp::Rational as_rational(const json& v, const std::string& path) {
  if (v.is_number_integer()) return interp::Rational(v.get<std::int64_t>());
  if (v.is_string()) {
    if (auto r = interp::Rational::parse(v.get<std::string>())) return *r;
  }
  ObjectReader::fail(path, "must be an integer or a fraction string like \"1/9\"");
}

// A field given either once for all coordinates or per coordinate {x,y,w,h}.
std::array<interp::Rational, 4> per_coordinate(const json& v, const std::string& path) {
  if (!v.is_object()) {
    const auto r = as_rational(v, path);
    return {r, r, r, r};
  }
  ObjectReader r(v, path);
  std::array<interp::Rational, 4> out;
  constexpr std::array<std::string_view, 4> keys{"x", "y", "w", "h"};
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = as_rational(r.require(keys[i]), r.field_path(keys[i]));
  }
  r.finish();
  return out;
}

}  // namespace

std::vector<interp::BoxRegressionConfig> parse_interp_config(std::string_view json_text) {
  const json doc = parse_json(json_text);
  ObjectReader top(doc, "");
  const json& list = top.require("configs");
  top.finish();
  if (!list.is_array() || list.empty()) {
    ObjectReader::fail("configs", "must be a non-empty array");
  }

  constexpr std::array coords{interp::Coordinate::CenterX, interp::Coordinate::CenterY,
                              interp::Coordinate::Width, interp::Coordinate::Height};
  std::vector<interp::BoxRegressionConfig> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "configs[" + std::to_string(i) + "]";
    ObjectReader r(list[i], path);
    interp::BoxRegressionConfig cfg;
    const json& name = r.require("name");
    if (!name.is_string()) ObjectReader::fail(r.field_path("name"), "must be a string");
    cfg.name = name.get<std::string>();

    auto form = interp::LossForm::Raw;
    if (const json* v = r.find("loss_form")) {
      const std::string s = v->is_string() ? v->get<std::string>() : "";
      if (s == "raw") {
        form = interp::LossForm::Raw;
      } else if (s == "alpha_scaled") {
        form = interp::LossForm::AlphaScaled;
      } else {
        ObjectReader::fail(r.field_path("loss_form"), "must be \"raw\" or \"alpha_scaled\"");
      }
    }
    const auto lambda = per_coordinate(r.require("lambda"), r.field_path("lambda"));
    const auto alpha = per_coordinate(r.require("alpha"), r.field_path("alpha"));
    const auto sigma = per_coordinate(r.require("sigma"), r.field_path("sigma"));
    std::array<interp::Rational, 4> mu{};
    if (const json* v = r.find("mu")) mu = per_coordinate(*v, r.field_path("mu"));
    r.finish();

    constexpr std::array<std::string_view, 4> keys{"x", "y", "w", "h"};
    for (std::size_t c = 0; c < 4; ++c) {
      cfg.coords[c] = {lambda[c], alpha[c], sigma[c], mu[c], form, coords[c]};
      const interp::Rational zero{0};
      const auto where = [&](std::string_view field) {
        return path + "." + std::string(field) + "." + std::string(keys[c]);
      };
      if (!(lambda[c] > zero)) ObjectReader::fail(where("lambda"), "must be > 0");
      if (!(alpha[c] > zero)) ObjectReader::fail(where("alpha"), "must be > 0");
      if (!(sigma[c] > zero)) ObjectReader::fail(where("sigma"), "must be > 0");
    }
    out.push_back(std::move(cfg));
  }
  return out;
}

std::optional<std::vector<interp::BoxRegressionConfig>> preset_by_name(std::string_view name) {
  if (name == "paper-table1") return interp::published_presets();
  return std::nullopt;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string anchor_name(interp::AnchorDim a) {
  return a == interp::AnchorDim::AnchorWidth ? "w_a" : "h_a";
}

}  // namespace

std::string render_interp(const std::vector<interp::InterpretationTable>& tables,
                          TableFormat format) {
  std::ostringstream os;
  switch (format) {
    case TableFormat::Csv: {
      os << "row";
      for (const auto& t : tables) os << ',' << csv_field(t.name);
      os << '\n';
      for (std::size_t row = 0; row < interp::kRowLabels.size(); ++row) {
        os << interp::kRowLabels[row];
        for (const auto& t : tables) os << ',' << t.rows[row].render();
        os << '\n';
      }
      break;
    }
    case TableFormat::Json: {
      json columns = json::array();
      for (const auto& t : tables) {
        json rows = json::array();
        for (std::size_t row = 0; row < interp::kRowLabels.size(); ++row) {
          rows.push_back({{"row", std::string(interp::kRowLabels[row])},
                          {"value", t.rows[row].render()},
                          {"coefficient", t.rows[row].coefficient.to_string()},
                          {"anchor", anchor_name(t.rows[row].anchor)}});
        }
        json log_domain = json::object();
        for (const auto& c : t.coords) {
          if (!c.has_log_domain) continue;
          const std::string key =
              c.label.anchor == interp::AnchorDim::AnchorWidth ? "w" : "h";
          log_domain[key] = {{"label", c.label_log.to_string()},
                             {"prediction", c.prediction_log.to_string()}};
        }
        columns.push_back(
            {{"name", t.name}, {"rows", std::move(rows)}, {"log_domain", std::move(log_domain)}});
      }
      os << json{{"columns", std::move(columns)}}.dump(2) << '\n';
      break;
    }
    case TableFormat::Markdown: {
      os << "| |";
      for (const auto& t : tables) os << ' ' << t.name << " |";
      os << "\n|---|";
      for (std::size_t i = 0; i < tables.size(); ++i) os << "---|";
      os << '\n';
      for (std::size_t row = 0; row < interp::kRowLabels.size(); ++row) {
        os << "| " << interp::kRowLabels[row] << " |";
        for (const auto& t : tables) os << ' ' << t.rows[row].render() << " |";
        os << '\n';
      }
      os << "\nLog-domain scales for sizes (label, prediction):\n\n| |";
      for (const auto& t : tables) os << ' ' << t.name << " |";
      os << "\n|---|";
      for (std::size_t i = 0; i < tables.size(); ++i) os << "---|";
      os << '\n';
      for (std::size_t c : {std::size_t{2}, std::size_t{3}}) {
        os << "| " << (c == 2 ? "log w" : "log h") << " |";
        for (const auto& t : tables) {
          os << ' ' << t.coords[c].label_log.to_string() << ", "
             << t.coords[c].prediction_log.to_string() << " |";
        }
        os << '\n';
      }
      break;
    }
  }
  return os.str();
}

std::string cmd_interp(const std::vector<interp::BoxRegressionConfig>& configs,
                       TableFormat format, interp::BoundConvention bound) {
  std::vector<interp::InterpretationTable> tables;
  for (const auto& cfg : configs) tables.push_back(interp::interpret_config(cfg, bound));
  return render_interp(tables, format);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace robust_loss::cli
