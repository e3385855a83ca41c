#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "finsler/presets.hpp"

namespace finsler::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& text, const std::string& context) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ConfigError("invalid number '" + text + "' in " + context);
  }
  if (!std::isfinite(v)) throw ConfigError("non-finite number '" + text + "' in " + context);
  return v;
}

Coord parse_coord(const std::string& text, int dim) {
  if (text.size() < 2 || (text[0] != 'x' && text[0] != 'y')) {
    throw ConfigError("scan coordinate must look like x1 or y3, got '" + text + "'");
  }
  int index = 0;
  auto [ptr, ec] = std::from_chars(text.data() + 1, text.data() + text.size(), index);
  if (ec != std::errc() || ptr != text.data() + text.size() || index < 1 || index > dim) {
    throw ConfigError("scan coordinate '" + text + "' out of range for dimension " + std::to_string(dim));
  }
  return text[0] == 'x' ? dx(index) : dy(index);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

Json vector_json(std::span<const double> v) {
  Json out = Json::array();
  for (double c : v) out.push_back(c);
  return out;
}

Json tensor_json(const TensorBlock& t) {
  const int n = t.dim();
  const auto data = t.data();
  // Nest from the innermost axis outwards.
  std::function<Json(int, std::size_t)> build = [&](int axis, std::size_t offset) -> Json {
    if (axis == t.rank()) return data[offset];
    Json arr = Json::array();
    std::size_t stride = 1;
    for (int a = axis + 1; a < t.rank(); ++a) stride *= static_cast<std::size_t>(n);
    for (int i = 0; i < n; ++i) arr.push_back(build(axis + 1, offset + i * stride));
    return arr;
  };
  return build(0, 0);
}

Json subspace_json(const Subspace& s) {
  Json basis = Json::array();
  for (const auto& v : s.basis) basis.push_back(vector_json(v));
  return Json{{"dim", s.dim()}, {"basis", basis}};
}

Json condition_json(const ConditionReport& c) {
  Json out{{"passes", c.passes}, {"residual", c.residual}, {"threshold", c.threshold}};
  if (c.lambda) out["lambda"] = *c.lambda;
  return out;
}

bool all_finite(const TensorBlock& t) {
  return std::all_of(t.data().begin(), t.data().end(), [](double v) { return std::isfinite(v); });
}

/// Largest AD-vs-FD discrepancy over all derivatives of F^2 of order <= 2,
/// measured as |ad - fd| / max(1, |ad|).
double fd_discrepancy(const FinslerSpace& space, const TangentPoint& z) {
  const Expression& f = space.function();
  const int n = z.dim();
  const auto square = [&](auto x, auto y) {
    const auto F = evaluate(f, x, y);
    return F * F;
  };
  double worst = 0.0;
  for (int a = -1; a < 2 * n; ++a) {
    for (int b = a; b < 2 * n; ++b) {
      MultiIndex alpha{};
      if (a >= 0) alpha[a] += 1;
      if (b >= 0) alpha[b] += 1;
      const double ad = partial(square, alpha, z);
      const double fd = fd_partial(square, alpha, z);
      worst = std::max(worst, std::fabs(ad - fd) / std::max(1.0, std::fabs(ad)));
    }
  }
  return worst;
}

Json skip_record(const RawPoint& p, const std::string& reason) {
  return Json{{"x", vector_json(p.x)}, {"y", vector_json(p.y)}, {"skipped", Json{{"reason", reason}}}};
}

void text_value(std::ostringstream& os, const Json& v, int indent);

bool is_flat_array(const Json& v) {
  return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
}

void text_scalar(std::ostringstream& os, const Json& v) {
  if (v.is_number_float()) {
    os << format_double(v.get<double>());
  } else if (v.is_string()) {
    os << v.get<std::string>();
  } else {
    os << v.dump();
  }
}

void text_flat(std::ostringstream& os, const Json& v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    text_scalar(os, v[i]);
  }
  os << ']';
}

void text_value(std::ostringstream& os, const Json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    for (const auto& [key, item] : v.items()) {
      os << pad << key << ':';
      if (item.is_primitive()) {
        os << ' ';
        text_scalar(os, item);
        os << '\n';
      } else if (is_flat_array(item)) {
        os << ' ';
        text_flat(os, item);
        os << '\n';
      } else {
        os << '\n';
        text_value(os, item, indent + 2);
      }
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Json& item = v[i];
      os << pad << '[' << i << ']';
      if (item.is_primitive()) {
        os << ' ';
        text_scalar(os, item);
        os << '\n';
      } else if (is_flat_array(item)) {
        os << ' ';
        text_flat(os, item);
        os << '\n';
      } else {
        os << '\n';
        text_value(os, item, indent + 2);
      }
    }
  } else {
    os << pad;
    text_scalar(os, v);
    os << '\n';
  }
}

void dump_value(std::string& out, const Json& v) {
  switch (v.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        dump_value(out, item);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        dump_value(out, v[i]);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw std::domain_error("non-finite number in report");
      out += format_double(d);
      break;
    }
    default:
      out += v.dump();
  }
}

std::string describe_parse_error(const ParseError& e, const std::string& source) {
  std::string msg = "parse error at offset " + std::to_string(e.span().start) + ": " + e.what() + "\n  " + source + "\n  ";
  msg += std::string(e.span().start, ' ');
  msg += std::string(std::max<std::size_t>(1, e.span().end - e.span().start), '^');
  return msg;
}

}  // namespace

RawPoint parse_point(const std::string& text, int dim) {
  const auto halves = split(text, ';');
  if (halves.size() != 2) throw ConfigError("point must be \"x1,..,xn;y1,..,yn\", got '" + text + "'");
  RawPoint p;
  for (const auto& item : split(halves[0], ',')) p.x.push_back(parse_number(item, "point '" + text + "'"));
  for (const auto& item : split(halves[1], ',')) p.y.push_back(parse_number(item, "point '" + text + "'"));
  if (static_cast<int>(p.x.size()) != dim || static_cast<int>(p.y.size()) != dim) {
    throw ConfigError("point '" + text + "' must have " + std::to_string(dim) + " x and " + std::to_string(dim) +
                      " y coordinates");
  }
  return p;
}

std::vector<ScanAxis> parse_scan(const std::string& text, int dim) {
  std::vector<ScanAxis> axes;
  for (const auto& entry : split(text, ',')) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw ConfigError("scan entry must be <coord>=<lo>:<hi>:<count>, got '" + entry + "'");
    ScanAxis axis;
    axis.coord = parse_coord(trim(entry.substr(0, eq)), dim);
    const auto parts = split(entry.substr(eq + 1), ':');
    if (parts.size() != 3) throw ConfigError("scan range must be <lo>:<hi>:<count>, got '" + entry + "'");
    axis.lo = parse_number(parts[0], "scan entry '" + entry + "'");
    axis.hi = parse_number(parts[1], "scan entry '" + entry + "'");
    int count = -1;
    auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
    if (ec != std::errc() || ptr != parts[2].data() + parts[2].size() || count < 0) {
      throw ConfigError("scan count must be a non-negative integer, got '" + parts[2] + "'");
    }
    axis.count = count;
    for (const auto& other : axes) {
      if (slot(dim, other.coord) == slot(dim, axis.coord)) throw ConfigError("coordinate scanned twice in '" + text + "'");
    }
    axes.push_back(axis);
  }
  return axes;
}

RunConfig parse_args(const std::vector<std::string>& args, const char* env_tol) {
  CLI::App app{"Cartan-connection curvature, nullity and kernel distributions of a Finsler function", "finsler"};
  std::string func;
  std::string preset;
  int dim = 0;
  std::vector<std::string> points;
  std::string scan_spec;
  std::optional<double> tol;
  bool fd_check = false;
  std::string format = "text";
  std::string out_path;
  std::string csv_path;
  std::optional<std::uint64_t> seed;
  double curvature = 1.0;

  auto* func_opt = app.add_option("--func", func, "Finsler function F(x, y) in the expression DSL");
  auto* preset_opt = app.add_option("--preset", preset, "Built-in function")
                         ->check(CLI::IsMember(preset_names()));
  func_opt->excludes(preset_opt);
  app.add_option("--dim", dim, "Dimension n of the base manifold (2..4)");
  app.add_option("--point", points, "Point \"x1,..,xn;y1,..,yn\" (repeatable)");
  app.add_option("--scan", scan_spec, "Grid \"<coord>=<lo>:<hi>:<count>,...\"");
  app.add_option("--tol", tol, "Relative singular-value threshold for nullity/kernel rank decisions");
  app.add_flag("--fd-check", fd_check, "Cross-check derivatives of F^2 against finite differences");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out", out_path, "Write the report or scan summary to this file");
  app.add_option("--csv", csv_path, "Write per-point scan rows as CSV to this file");
  app.add_option("--seed", seed, "Seed for jittering scan grid points");
  app.add_option("--curvature", curvature, "Sectional curvature c of the riemann-constant-curvature preset");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig cfg;
  if (func.empty() && preset.empty()) throw ConfigError("one of --func or --preset is required");
  if (!preset.empty()) {
    const Preset p = find_preset(preset, curvature);
    if (dim != 0 && dim != p.dim) {
      throw ConfigError("preset '" + preset + "' has dimension " + std::to_string(p.dim) + ", not " + std::to_string(dim));
    }
    dim = p.dim;
    cfg.preset = preset;
  } else {
    if (dim == 0) throw ConfigError("--dim is required with --func");
    cfg.function_source = func;
  }
  if (dim < 2 || dim > kMaxJetVars / 2) throw ConfigError("dimension must be between 2 and " + std::to_string(kMaxJetVars / 2));
  cfg.dim = dim;
  cfg.curvature = curvature;
  for (const auto& p : points) cfg.points.push_back(parse_point(p, dim));
  if (!scan_spec.empty()) cfg.scan = parse_scan(scan_spec, dim);
  if (cfg.points.empty() && !cfg.scan && preset.empty()) {
    throw ConfigError("at least one --point or a --scan is required with --func");
  }

  if (env_tol != nullptr && *env_tol != '\0') {
    cfg.tolerances.rank_rel = parse_number(env_tol, "FINSLER_TOL");
  }
  if (tol) {
    if (!std::isfinite(*tol)) throw ConfigError("--tol must be finite");
    cfg.tolerances.rank_rel = *tol;
  }
  if (!(cfg.tolerances.rank_rel > 0.0)) throw ConfigError("tolerance must be positive");

  cfg.fd_check = fd_check;
  cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Text;
  cfg.out_path = out_path;
  cfg.csv_path = csv_path;
  cfg.seed = seed;
  return cfg;
}

ResolvedFunction resolve_function(const RunConfig& config) {
  ResolvedFunction out;
  if (!config.preset.empty()) {
    const Preset p = find_preset(config.preset, config.curvature);
    out.label = p.name;
    out.source = p.source;
    out.dim = p.dim;
    out.default_point = RawPoint{p.default_point.x, p.default_point.y};
  } else {
    out.label = config.function_source;
    out.source = config.function_source;
    out.dim = config.dim;
  }
  return out;
}

Json point_report(const FinslerSpace& space, const RawPoint& p, const Tolerances& tol, bool fd_check) {
  try {
    const TangentPoint z(p.x, p.y);
    const PointGeometry geo = space.compute(z);
    const TensorBlock rhat = geo.contracted_curvature();
    for (const TensorBlock* t : {&geo.g, &geo.g_inv, &geo.barthel, &geo.gamma, &geo.curvature}) {
      if (!all_finite(*t)) return skip_record(p, "NonFinite: " + t->name() + " has non-finite components");
    }

    Json r;
    r["x"] = vector_json(p.x);
    r["y"] = vector_json(p.y);
    r["F"] = geo.F;
    r["tensors"] = Json{{"g", tensor_json(geo.g)},
                        {"N", tensor_json(geo.barthel)},
                        {"Gamma", tensor_json(geo.gamma)},
                        {"R", tensor_json(geo.curvature)},
                        {"Rhat", tensor_json(rhat)}};

    const Subspace nullity = nullity_space(geo, tol);
    const Subspace kernel = kernel_space(geo, tol);
    const CoincidenceVerdict verdict = coincide(nullity, kernel, tol);
    r["nullity"] = subspace_json(nullity);
    r["kernel"] = subspace_json(kernel);
    r["coincide"] = Json{{"verdict", verdict.coincide},
                         {"dim_nullity", verdict.dim_nullity},
                         {"dim_kernel", verdict.dim_kernel},
                         {"angles", vector_json(verdict.principal_angles)}};
    r["conditions"] = Json{{"cyclic", condition_json(cyclic_sum_check(geo, tol).report)},
                           {"integrability", condition_json(integrability_check(geo, tol))},
                           {"isotropy", condition_json(isotropy_check(geo, tol))}};

    if (nullity.dim() > 0) {
      Json obstruction = Json::array();
      for (const auto& X : nullity.basis) {
        try {
          const ObstructionReport rep = nullity_obstruction_check(geo, X, tol);
          Json lhs = Json::array();
          Json rhs = Json::array();
          for (std::size_t i = 0; i < rep.lhs.size(); ++i) {
            lhs.push_back(vector_json(rep.lhs[i].components));
            rhs.push_back(vector_json(rep.rhs[i].components));
          }
          obstruction.push_back(Json{{"X", vector_json(X)}, {"max_mismatch", rep.max_mismatch}, {"lhs", lhs}, {"rhs", rhs}});
        } catch (const NotInNullity& e) {
          obstruction.push_back(Json{{"X", vector_json(X)}, {"error", e.what()}});
        }
      }
      r["obstruction"] = obstruction;
    } else {
      r["obstruction"] = nullptr;
    }

    double route_mismatch = 0.0;
    for (std::size_t i = 0; i < rhat.data().size(); ++i) {
      route_mismatch = std::max(route_mismatch, std::fabs(rhat.data()[i] - geo.rhat_barthel.data()[i]));
    }
    Json diagnostics{{"det_g", geo.det_g}, {"rhat_route_mismatch", route_mismatch}};
    if (fd_check) diagnostics["fd_max_rel_error"] = fd_discrepancy(space, z);
    r["diagnostics"] = diagnostics;
    r["skipped"] = nullptr;
    return r;
  } catch (const DomainError& e) {
    return skip_record(p, std::string("DomainError: ") + e.what());
  } catch (const DegenerateMetric& e) {
    return skip_record(p, std::string("DegenerateMetric: ") + e.what());
  } catch (const InvalidPoint& e) {
    return skip_record(p, std::string("InvalidPoint: ") + e.what());
  }
}

RunResult run(const RunConfig& config) {
  const ResolvedFunction fn = resolve_function(config);
  const FinslerSpace space(parse(fn.source, fn.dim));
  std::vector<RawPoint> points = config.points;
  if (points.empty() && fn.default_point) points.push_back(*fn.default_point);

  RunResult result;
  result.report = Json{{"function", fn.source}, {"dim", fn.dim}, {"points", Json::array()}};
  for (const auto& p : points) {
    Json pr = point_report(space, p, config.tolerances, config.fd_check);
    if (!pr["skipped"].is_null()) result.exit_code = kExitSkipped;
    result.report["points"].push_back(std::move(pr));
  }
  return result;
}

std::vector<RawPoint> scan_grid(const std::vector<ScanAxis>& axes, const RawPoint& base,
                                std::optional<std::uint64_t> seed) {
  const int n = static_cast<int>(base.x.size());
  std::size_t total = axes.empty() ? 0 : 1;
  for (const auto& a : axes) total *= static_cast<std::size_t>(a.count);

  std::optional<std::mt19937_64> rng;
  if (seed) rng.emplace(*seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);

  std::vector<RawPoint> grid;
  grid.reserve(total);
  std::vector<int> counter(axes.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    RawPoint p = base;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const ScanAxis& ax = axes[a];
      const double spacing = ax.count > 1 ? (ax.hi - ax.lo) / (ax.count - 1) : 0.0;
      double v = ax.lo + spacing * counter[a];
      if (rng && ax.count > 1) v += jitter(*rng) * spacing;
      const int s = slot(n, ax.coord);
      (s < n ? p.x[s] : p.y[s - n]) = v;
    }
    grid.push_back(std::move(p));
    // Last axis varies fastest.
    for (std::size_t a = axes.size(); a-- > 0;) {
      if (++counter[a] < axes[a].count) break;
      counter[a] = 0;
    }
  }
  return grid;
}

ScanResult scan(const RunConfig& config, unsigned threads) {
  const ResolvedFunction fn = resolve_function(config);
  const FinslerSpace space(parse(fn.source, fn.dim));
  RawPoint base;
  if (!config.points.empty()) {
    base = config.points.front();
  } else if (fn.default_point) {
    base = *fn.default_point;
  } else {
    base = RawPoint{std::vector<double>(fn.dim, 0.0), std::vector<double>(fn.dim, 0.0)};
  }
  const std::vector<RawPoint> grid = scan_grid(config.scan.value_or(std::vector<ScanAxis>{}), base, config.seed);

  ScanResult result;
  result.rows.resize(grid.size());
  const auto evaluate_row = [&](std::size_t i) {
    ScanRow& row = result.rows[i];
    row.point = grid[i];
    try {
      const TangentPoint z(grid[i].x, grid[i].y);
      const PointGeometry geo = space.compute(z);
      const Subspace nullity = nullity_space(geo, config.tolerances);
      const Subspace kernel = kernel_space(geo, config.tolerances);
      const CoincidenceVerdict v = coincide(nullity, kernel, config.tolerances);
      const ConditionReport iso = isotropy_check(geo, config.tolerances);
      row.valid = true;
      row.F = geo.F;
      row.dim_nullity = v.dim_nullity;
      row.dim_kernel = v.dim_kernel;
      row.coincide = v.coincide;
      row.max_angle = v.principal_angles.empty() ? 0.0 : v.principal_angles.back();
      row.cyclic = cyclic_sum_check(geo, config.tolerances).report.passes;
      row.integrability = integrability_check(geo, config.tolerances).passes;
      row.isotropy = iso.passes;
      row.lambda = iso.lambda.value_or(0.0);
    } catch (const DomainError& e) {
      row.reason = std::string("DomainError: ") + e.what();
    } catch (const DegenerateMetric& e) {
      row.reason = std::string("DegenerateMetric: ") + e.what();
    } catch (const InvalidPoint& e) {
      row.reason = std::string("InvalidPoint: ") + e.what();
    }
  };

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, grid.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) evaluate_row(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) evaluate_row(i);
      });
    }
    for (auto& w : workers) w.join();
  }

  int valid = 0, coincide_count = 0, cyclic = 0, integrable = 0, isotropic = 0;
  for (const auto& row : result.rows) {
    if (!row.valid) continue;
    ++valid;
    coincide_count += row.coincide;
    cyclic += row.cyclic;
    integrable += row.integrability;
    isotropic += row.isotropy;
  }
  result.summary = Json{{"function", fn.source},
                        {"dim", fn.dim},
                        {"points_total", grid.size()},
                        {"points_valid", valid},
                        {"points_skipped", static_cast<int>(grid.size()) - valid},
                        {"coincide_count", coincide_count},
                        {"condition_passes", Json{{"cyclic", cyclic}, {"integrability", integrable}, {"isotropy", isotropic}}}};
  result.exit_code = kExitOk;
  return result;
}

std::string dump_json(const Json& value) {
  std::string out;
  dump_value(out, value);
  return out;
}

std::string format_text(const Json& value) {
  std::ostringstream os;
  text_value(os, value, 0);
  return os.str();
}

std::string scan_csv(const ScanResult& result, int dim) {
  std::ostringstream os;
  os << "index";
  for (int i = 1; i <= dim; ++i) os << ",x" << i;
  for (int i = 1; i <= dim; ++i) os << ",y" << i;
  os << ",valid,F,dim_nullity,dim_kernel,coincide,max_angle,cyclic,integrability,isotropy,lambda,reason\n";
  for (std::size_t r = 0; r < result.rows.size(); ++r) {
    const ScanRow& row = result.rows[r];
    os << r;
    for (double v : row.point.x) os << ',' << format_double(v);
    for (double v : row.point.y) os << ',' << format_double(v);
    os << ',' << (row.valid ? "true" : "false");
    if (row.valid) {
      os << ',' << format_double(row.F) << ',' << row.dim_nullity << ',' << row.dim_kernel << ','
         << (row.coincide ? "true" : "false") << ',' << format_double(row.max_angle) << ','
         << (row.cyclic ? "true" : "false") << ',' << (row.integrability ? "true" : "false") << ','
         << (row.isotropy ? "true" : "false") << ',' << format_double(row.lambda) << ',';
    } else {
      std::string reason = row.reason;
      std::replace(reason.begin(), reason.end(), '"', '\'');
      os << ",,,,,,,,,,\"" << reason << '"';
    }
    os << '\n';
  }
  return os.str();
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const char* env_tol) {
  RunConfig config;
  try {
    config = parse_args(args, env_tol);
  } catch (const HelpRequested& e) {
    out << e.what();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return kExitConfig;
  }

  const ResolvedFunction fn = resolve_function(config);
  try {
    std::string rendered;
    int code = kExitOk;
    if (config.scan) {
      ScanResult result = scan(config);
      rendered = config.format == OutputFormat::Json ? dump_json(result.summary) + "\n" : format_text(result.summary);
      code = result.exit_code;
      if (!config.csv_path.empty()) {
        std::ofstream csv(config.csv_path);
        if (!csv) throw ConfigError("cannot write " + config.csv_path);
        csv << scan_csv(result, fn.dim);
      }
    } else {
      RunResult result = run(config);
      rendered = config.format == OutputFormat::Json ? dump_json(result.report) + "\n" : format_text(result.report);
      code = result.exit_code;
    }
    if (config.out_path.empty()) {
      out << rendered;
    } else {
      std::ofstream file(config.out_path);
      if (!file) throw ConfigError("cannot write " + config.out_path);
      file << rendered;
    }
    return code;
  } catch (const ParseError& e) {
    err << describe_parse_error(e, fn.source) << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace finsler::cli
