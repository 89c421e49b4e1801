#include "lgstab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "lgstab/errors.hpp"

namespace lgstab {

namespace {

constexpr double kSlopeLow = 1.7;
constexpr double kSlopeHigh = 2.3;

std::string fmt(const char* f, double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ProblemDef problem_for(const ExperimentSpec& s, double nu, Scheme scheme) {
  if (s.case_name == "ex42") return example42();
  if (s.case_name == "custom") return zero_problem(s.T.value_or(1.0));
  const ProblemKind kind = is_navier_stokes(scheme) ? ProblemKind::navier_stokes : ProblemKind::oseen;
  return example41(*s.cp, nu, kind);
}

void assign_slope_flags(std::vector<RunRecord>& rows) {
  std::map<std::pair<std::string, double>, std::vector<RunRecord*>> groups;
  for (auto& r : rows) {
    if (!r.error.empty()) continue;
    if (r.errors.E_linf_L2_u == 0.0 && r.errors.E_l2_L2_p == 0.0 && r.errors.final_velocity_L2 == 0.0) {
      r.slope_flag = "trivial";
      continue;
    }
    groups[{to_string(r.config.scheme), r.config.nu}].push_back(&r);
  }
  for (auto& [key, g] : groups) {
    if (g.size() < 3) continue;
    std::vector<double> h;
    std::array<std::vector<double>, 3> e;
    bool positive = true;
    for (const auto* r : g) {
      h.push_back(r->h);
      const double v[3] = {r->errors.E_linf_L2_u, r->errors.E_l2_H10_u, r->errors.E_l2_L2_p};
      for (int i = 0; i < 3; ++i) {
        positive = positive && v[i] > 0.0 && std::isfinite(v[i]);
        e[i].push_back(v[i]);
      }
    }
    if (!positive) continue;
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      const double s = fit_order(h, e[i]).slope;
      ok = ok && s >= kSlopeLow && s <= kSlopeHigh;
    }
    for (auto* r : g) r->slope_flag = ok ? "ok" : "off";
  }
}

}  // namespace

RunRecord run_single(const RunConfig& config, const ProblemDef& problem, double cp,
                     bool keep_final_state) {
  RunRecord rec;
  rec.config = config;
  rec.cp = cp;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ErrorAccumulator acc(problem, config.dt, config.data_degree);
    const int last = config.num_steps();
    rec.summary = run(config, problem, [&](const TrajectoryState& s) {
      if (s.n == 0) rec.h = s.u.space().mesh().h();
      acc.observe(s);
      if (keep_final_state && s.n == last) {
        rec.final_u = s.u;
        rec.final_p = s.p;
      }
    });
    rec.errors = acc.report();
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

ExperimentSpec resolve_preset(ExperimentSpec s) {
  const std::string& c = s.case_name;
  if (c == "a" || c == "b" || c == "c" || c == "d") {
    const bool ns = c == "c" || c == "d";
    if (s.schemes.empty())
      s.schemes = ns ? std::vector{Scheme::NS_TH, Scheme::NS_PS} : std::vector{Scheme::O_TH, Scheme::O_PS};
    if (s.nus.empty()) s.nus = {1e-2, 1e-4};
    if (!s.cp) s.cp = (c == "a" || c == "c") ? 1.0 : 10.0;
    if (!s.delta0) s.delta0 = 0.1;
  } else if (c == "ex42") {
    if (s.schemes.empty()) s.schemes = {Scheme::NS_TH, Scheme::NS_PS};
    if (s.nus.empty()) s.nus = {1e-4};
    if (!s.dt) s.dt = 0.01;
    if (!s.T) s.T = 40.0;
    if (!s.delta0) s.delta0 = 1e-3;
    if (!s.cp) s.cp = 0.0;
  } else if (c == "custom") {
    if (s.schemes.empty()) s.schemes = {Scheme::O_TH, Scheme::O_PS};
    if (s.nus.empty()) s.nus = {1e-2};
    if (!s.delta0) s.delta0 = 0.1;
    if (!s.cp) s.cp = 0.0;
  } else {
    throw InvalidArgument("unknown case '" + c + "'");
  }
  return s;
}

std::string csv_row(const std::string& case_name, const RunRecord& r) {
  std::ostringstream os;
  const bool stab = is_stabilized(r.config.scheme);
  std::string flag = r.error.empty() ? r.slope_flag : "error:" + r.error;
  std::replace(flag.begin(), flag.end(), ',', ';');
  std::replace(flag.begin(), flag.end(), '\n', ' ');
  os << case_name << ',' << to_string(r.config.scheme) << ',' << r.config.k << ',' << r.config.N
     << ',' << fmt("%.10g", r.h) << ',' << fmt("%.10g", r.config.dt) << ','
     << fmt("%.10g", r.config.nu) << ',' << fmt("%.10g", stab ? r.config.delta0 : 0.0) << ','
     << fmt("%.10g", r.cp) << ',';
  if (r.error.empty()) {
    os << fmt("%.10e", r.errors.E_linf_L2_u) << ',' << fmt("%.10e", r.errors.E_l2_H10_u) << ','
       << fmt("%.10e", r.errors.E_l2_L2_p);
  } else {
    os << "nan,nan,nan";
  }
  os << ',' << flag << ',' << fmt("%.3f", r.wall_seconds);
  return os.str();
}

std::string render_svg(const std::string& title, const std::vector<RunRecord>& rows) {
  constexpr double W = 800, H = 600, L = 80, R = 240, Tp = 50, B = 60;
  struct Series {
    std::string label;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  std::map<std::string, std::size_t> index;
  const char* names[3] = {"E_linfL2(u)", "E_l2H10(u)", "E_l2L2(p)"};
  for (const auto& r : rows) {
    if (!r.error.empty() || r.h <= 0.0) continue;
    const double v[3] = {r.errors.E_linf_L2_u, r.errors.E_l2_H10_u, r.errors.E_l2_L2_p};
    for (int i = 0; i < 3; ++i) {
      if (!(v[i] > 0.0) || !std::isfinite(v[i])) continue;
      const std::string key = to_string(r.config.scheme) + " nu=" + fmt("%g", r.config.nu) + " " + names[i];
      auto [it, added] = index.emplace(key, series.size());
      if (added) series.push_back({key, {}});
      series[it->second].pts.emplace_back(std::log10(r.h), std::log10(v[i]));
    }
  }
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series)
    for (const auto& [x, y] : s.pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (series.empty()) x0 = -2, x1 = -1, y0 = -4, y1 = 0;
  x0 = std::floor(x0 * 10) / 10 - 0.05;
  x1 = std::ceil(x1 * 10) / 10 + 0.05;
  y0 = std::floor(y0) - 0.1;
  y1 = std::ceil(y1) + 0.1;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - Tp - B); };

  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
        "viewBox=\"0 0 800 600\">\n";
  os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<text x=\"" << L << "\" y=\"30\" font-family=\"sans-serif\" font-size=\"16\">" << title
     << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << Tp << "\" width=\"" << (W - L - R) << "\" height=\""
     << (H - Tp - B) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(y0)); d <= static_cast<int>(std::floor(y1)); ++d) {
    os << "<text x=\"" << (L - 8) << "\" y=\"" << fmt("%.1f", py(d) + 4)
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">1e" << d
       << "</text>\n";
  }
  for (int t = static_cast<int>(std::ceil(x0 * 10)); t <= static_cast<int>(std::floor(x1 * 10)); ++t) {
    const double x = t / 10.0;
    os << "<text x=\"" << fmt("%.1f", px(x)) << "\" y=\"" << (H - B + 18)
       << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
       << fmt("%.3g", std::pow(10.0, x)) << "</text>\n";
  }
  os << "<text x=\"" << (L + (W - L - R) / 2) << "\" y=\"" << (H - 15)
     << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">h</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    auto& s = series[i];
    std::sort(s.pts.begin(), s.pts.end());
    const char* col = colors[i % 8];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
    for (const auto& [x, y] : s.pts) os << fmt("%.2f", px(x)) << ',' << fmt("%.2f", py(y)) << ' ';
    os << "\"/>\n";
    for (const auto& [x, y] : s.pts)
      os << "<circle cx=\"" << fmt("%.2f", px(x)) << "\" cy=\"" << fmt("%.2f", py(y))
         << "\" r=\"3\" fill=\"" << col << "\"/>\n";
    std::string label = s.label;
    if (s.pts.size() >= 3) {
      std::vector<double> hx, ey;
      for (const auto& [x, y] : s.pts) {
        hx.push_back(std::pow(10.0, x));
        ey.push_back(std::pow(10.0, y));
      }
      label += " slope " + fmt("%.2f", fit_order(hx, ey).slope);
    }
    const double ly = Tp + 14 + 16.0 * i;
    os << "<line x1=\"" << (W - R + 10) << "\" y1=\"" << ly - 4 << "\" x2=\"" << (W - R + 28)
       << "\" y2=\"" << ly - 4 << "\" stroke=\"" << col << "\"/>\n";
    os << "<text x=\"" << (W - R + 32) << "\" y=\"" << ly
       << "\" font-family=\"sans-serif\" font-size=\"10\">" << label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_field_dump(const std::filesystem::path& path, const Field& u, const Field& p, int n) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  char buf[160];
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Point x(static_cast<double>(i) / (n - 1), static_cast<double>(j) / (n - 1));
      const Point uv = u.vector_value_at(x);
      std::snprintf(buf, sizeof buf, "%.6f %.6f %.10e %.10e %.10e\n", x.x(), x.y(), uv.x(), uv.y(),
                    p.value_at(x));
      os << buf;
    }
  }
}

CaseResult run_case(const ExperimentSpec& input) {
  const ExperimentSpec spec = resolve_preset(input);
  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  CaseResult result;
  result.csv = spec.out_dir / ("case_" + spec.case_name + ".csv");
  result.svg = spec.out_dir / ("case_" + spec.case_name + ".svg");
  std::ofstream csv(result.csv, std::ios::binary);
  if (ec || !csv) throw std::runtime_error("cannot write to output directory " + spec.out_dir.string());

  const std::vector<int> meshes = spec.case_name == "ex42" && input.N_list == ExperimentSpec{}.N_list
                                      ? std::vector<int>{16}
                                      : spec.N_list;
  struct Task {
    RunConfig config;
    ProblemDef problem;
  };
  std::vector<Task> tasks;
  std::map<int, std::shared_ptr<const Mesh>> mesh_cache;
  for (Scheme scheme : spec.schemes) {
    for (double nu : spec.nus) {
      for (int N : meshes) {
        auto& mesh = mesh_cache[N];
        if (!mesh) mesh = std::make_shared<const Mesh>(generate_unit_square_mesh(N));
        RunConfig c;
        c.scheme = scheme;
        c.k = spec.k;
        c.N = N;
        c.mesh = mesh;
        c.dt = spec.dt.value_or(mesh->h() * mesh->h());
        c.nu = nu;
        c.delta0 = *spec.delta0;
        c.composite = spec.composite;
        c.solver.kind = spec.solver;
        c.strict = spec.strict;
        c.verbose = spec.verbose;
        ProblemDef prob = problem_for(spec, nu, scheme);
        c.T = spec.T.value_or(prob.T);
        tasks.push_back({c, std::move(prob)});
      }
    }
  }

  const bool keep = spec.case_name == "ex42";
  result.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) {
      result.rows[i] = run_single(tasks[i].config, tasks[i].problem, *spec.cp, keep);
      if (!spec.timing) result.rows[i].wall_seconds = 0.0;
    }
  };
  const int jobs = std::max(1, std::min<int>(spec.jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  assign_slope_flags(result.rows);
  csv << kCsvHeader << '\n';
  for (const auto& r : result.rows) csv << csv_row(spec.case_name, r) << '\n';

  std::ofstream svg(result.svg, std::ios::binary);
  svg << render_svg("case " + spec.case_name + ": relative errors vs h", result.rows);

  if (keep) {
    std::ofstream summary(spec.out_dir / "ex42_summary.csv", std::ios::binary);
    summary << "scheme,N,final_u_L2,ratio_to_first\n";
    double first = std::nan("");
    for (const auto& r : result.rows) {
      if (!r.error.empty() || !r.final_u) {
        summary << to_string(r.config.scheme) << ',' << r.config.N << ",nan,nan\n";
        continue;
      }
      const double v = r.errors.final_velocity_L2;
      if (std::isnan(first)) first = v;
      summary << to_string(r.config.scheme) << ',' << r.config.N << ',' << fmt("%.10e", v) << ','
              << fmt("%.6f", v / first) << '\n';
      write_field_dump(spec.out_dir / ("ex42_" + to_string(r.config.scheme) + "_N" +
                                       std::to_string(r.config.N) + "_final.txt"),
                       *r.final_u, *r.final_p);
    }
  }
  return result;
}

}  // namespace lgstab
