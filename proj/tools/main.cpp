#include <CLI11.hpp>

#include "dgeom/approx.hpp"
#include "dgeom/bounds.hpp"
#include "dgeom/contours.hpp"
#include "dgeom/detect.hpp"
#include "dgeom/ellipse.hpp"
#include "dgeom/json_io.hpp"
#include "dgeom/metrics.hpp"
#include "dgeom/raster.hpp"
#include "dgeom/svg.hpp"
#include "dgeom/synth.hpp"
#include "dgeom/tangent.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace dgeom;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file " + path);
  return out;
}

void emit(const std::string& path, const JValue& doc) {
  auto out = open_out(path);
  doc.dump(out, 1);
  out << "\n";
}

Raster load_raster(const std::string& path) {
  try {
    return read_pnm_file(path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

std::vector<DigitalCurve> load_curves(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw InputError(std::string("bad JSON: ") + e.what());
  }
  auto one = [](const nlohmann::json& cj) {
    DigitalCurve c;
    c.closed = cj.at("closed").get<bool>();
    for (const auto& p : cj.at("points"))
      c.points.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    if (c.size() < 2) throw InputError("curve too short");
    return c;
  };
  std::vector<DigitalCurve> out;
  try {
    if (j.contains("curves"))
      for (const auto& cj : j.at("curves")) out.push_back(one(cj));
    else
      out.push_back(one(j));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("bad curve file: ") + e.what());
  }
  if (out.empty()) throw InputError("no curves in " + path);
  return out;
}

int cmd_contours(const std::string& in, const std::string& out_path, int min_len) {
  const Raster r = load_raster(in);
  JValue arr = JValue::array();
  for (const auto& c : extract_contours(r, min_len)) arr.push(curve_to_json(c));
  emit(out_path, JValue::object().set("curves", std::move(arr)));
  return 0;
}

int cmd_approx(const std::string& in, const std::string& out_path, const std::string& method,
               double dtol, double eps0, double rtol) {
  const auto curves = load_curves(in);
  auto run = [&](const DigitalCurve& c) -> PolyApprox {
    if (method == "break-points") return break_points(c);
    if (method == "rdp") return rdp(c, dtol);
    if (method == "rdp-mod") return rdp_mod(c);
    if (method == "pro") return pro(c, eps0);
    if (method == "masood") return masood(c, dtol);
    if (method == "masood-mod") return masood_mod(c);
    if (method == "carmona") return carmona(c, rtol);
    if (method == "carmona-mod") return carmona_mod(c);
    throw InputError("unknown method " + method);
  };

  if (curves.size() == 1) {
    const PolyApprox pa = run(curves[0]);
    emit(out_path, JValue::object()
                       .set("approx", approx_to_json(pa))
                       .set("report", metric_report_to_json(curve_metrics(curves[0], pa))));
    return 0;
  }
  std::vector<MetricReport> reports;
  JValue results = JValue::array();
  for (const auto& c : curves) {
    const PolyApprox pa = run(c);
    const MetricReport rep = curve_metrics(c, pa);
    reports.push_back(rep);
    results.push(
        JValue::object().set("approx", approx_to_json(pa)).set("report", metric_report_to_json(rep)));
  }
  emit(out_path,
       JValue::object()
           .set("results", std::move(results))
           .set("image_report", metric_report_to_json(aggregate_metrics(AggregateLevel::Image, reports))));
  return 0;
}

int cmd_tangent(const std::string& in, const std::string& out_path, double R) {
  const auto curves = load_curves(in);
  auto out = open_out(out_path);
  out << "curve,index,x,y,angle\n";
  for (size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    for (size_t i = 0; i < c.size(); ++i) {
      out << ci << "," << i << "," << c[i].x << "," << c[i].y << ",";
      try {
        out << format_double(deb_tangent(c, i, R).slope_angle);
      } catch (const std::exception&) {
        out << "nan";
      }
      out << "\n";
    }
  }
  return 0;
}

int cmd_fit(const std::string& in, const std::string& out_path, const std::string& method) {
  const auto curves = load_curves(in);
  auto run = [&](const DigitalCurve& c) -> FitResult {
    if (method == "ellifit") return ellifit(c.points);
    if (method == "fitzgibbon") return fitzgibbon(c.points);
    if (method == "nsaf") return nsaf(c.points);
    throw InputError("unknown method " + method);
  };
  if (curves.size() == 1) {
    emit(out_path, fit_result_to_json(run(curves[0])));
    return 0;
  }
  JValue arr = JValue::array();
  for (const auto& c : curves) arr.push(fit_result_to_json(run(c)));
  emit(out_path, JValue::object().set("fits", std::move(arr)));
  return 0;
}

int cmd_detect(const std::string& in, const std::string& out_path, const std::string& svg_path,
               const DetectParams& params) {
  const Raster r = load_raster(in);
  const auto hyps = detect(r, params);
  JValue arr = JValue::array();
  for (const auto& h : hyps) arr.push(hypothesis_to_json(h));
  emit(out_path, JValue::object()
                     .set("seed", int64_t(params.seed))
                     .set("params", JValue::object()
                                        .set("sets", params.sets)
                                        .set("bin_size", params.bin_size)
                                        .set("eps_ls", params.eps_ls)
                                        .set("deb_radius", params.deb_radius))
                     .set("hypotheses", std::move(arr)));
  if (!svg_path.empty()) {
    std::vector<EllipseGeometric> es;
    for (const auto& h : hyps) es.push_back(h.ellipse);
    auto svg = open_out(svg_path);
    write_svg_overlay(svg, r, es);
  }
  return 0;
}

int cmd_synth(int alpha, const std::string& mode, uint64_t seed, const std::string& out_pgm,
              const std::string& truth_path) {
  if (mode != "occluded" && mode != "overlapping")
    throw InputError("mode must be occluded|overlapping");
  const auto [raster, truth] =
      gen_scene(alpha, mode == "occluded" ? SceneMode::Occluded : SceneMode::Overlapping, seed);
  write_pgm_file(out_pgm, raster);
  if (!truth_path.empty()) emit(truth_path, scene_truth_to_json(truth));
  return 0;
}

int cmd_bench(const std::string& det_path, const std::string& truth_path, double overlap,
              const std::string& out_path) {
  std::vector<EllipseGeometric> hyps;
  SceneTruth truth;
  try {
    hyps = ellipses_from_json_file(det_path);
    truth = scene_truth_from_json_file(truth_path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  const EvalResult r = evaluate(hyps, truth, overlap);
  if (out_path.empty()) {
    eval_result_to_json(r).dump(std::cout, 1);
    std::cout << "\n";
  } else {
    emit(out_path, eval_result_to_json(r));
  }
  return 0;
}

int cmd_bounds(const std::string& out_path, double s_min, double s_max, double s_step,
               double phi_step_deg) {
  auto out = open_out(out_path);
  out << "s,phi_deg,d_dig,d_dss,d_tan\n";
  for (double s = s_min; s <= s_max + 1e-9; s += s_step)
    for (double deg = 0.0; deg <= 90.0 + 1e-9; deg += phi_step_deg) {
      const double phi = deg * 3.141592653589793 / 180.0;
      out << format_double(s) << "," << format_double(deg) << ",";
      const auto dd = d_dig_checked({s, phi});
      out << (dd ? format_double(*dd) : "nan") << "," << format_double(d_dss(phi)) << ","
          << (s > 1.4142135623730951 ? format_double(d_tan(s)) : "nan") << "\n";
    }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometric primitive extraction toolkit"};
  app.require_subcommand(1);

  std::string in, out_path = "out.json", svg_path, method = "rdp-mod", mode = "occluded";
  std::string truth_path, det_path, fit_method = "ellifit", bench_out;
  double dtol = 1.0, eps0 = 0.8, rtol = 0.3, R = 4.0, overlap = 0.95;
  double s_min = 5, s_max = 100, s_step = 5, phi_step = 1;
  int alpha = 4, min_len = 5;
  uint64_t synth_seed = 0;
  DetectParams params;

  auto* c_contours = app.add_subcommand("contours", "edge map -> curve JSON");
  c_contours->add_option("input", in, "PBM/PGM edge map")->required();
  c_contours->add_option("-o,--output", out_path, "output JSON path");
  c_contours->add_option("--min-length", min_len, "minimum chain length");

  auto* c_approx = app.add_subcommand("approx", "polygonal approximation");
  c_approx->add_option("input", in, "curve JSON")->required();
  c_approx->add_option("-o,--output", out_path, "output JSON path");
  c_approx->add_option("--method", method,
                       "rdp|rdp-mod|pro|masood|masood-mod|carmona|carmona-mod|break-points");
  c_approx->add_option("--dtol", dtol, "tolerance for rdp/masood");
  c_approx->add_option("--eps0", eps0, "tolerance for pro");
  c_approx->add_option("--rtol", rtol, "tolerance for carmona");

  auto* c_tangent = app.add_subcommand("tangent", "per-pixel tangent angles (CSV)");
  c_tangent->add_option("input", in, "curve JSON")->required();
  c_tangent->add_option("-o,--output", out_path, "output CSV path");
  c_tangent->add_option("--R", R, "ring radius");

  auto* c_fit = app.add_subcommand("fit-ellipse", "least-squares ellipse fit");
  c_fit->add_option("input", in, "curve JSON")->required();
  c_fit->add_option("-o,--output", out_path, "output JSON path");
  c_fit->add_option("--method", fit_method, "ellifit|fitzgibbon|nsaf");

  auto* c_detect = app.add_subcommand("detect-ellipses", "ellipse detection pipeline");
  c_detect->add_option("input", in, "PBM/PGM edge map")->required();
  c_detect->add_option("-o,--output", out_path, "output JSON path");
  c_detect->add_option("--svg", svg_path, "optional SVG overlay path");
  c_detect->add_option("--seed", params.seed, "random seed");
  c_detect->add_option("--sets", params.sets, "voting sets per contour");
  c_detect->add_option("--bins", params.bin_size, "square bin size, pixels");
  c_detect->add_option("--eps-ls", params.eps_ls, "least-squares residual threshold");

  auto* c_synth = app.add_subcommand("synth", "synthetic ellipse scene");
  c_synth->add_option("--alpha", alpha, "number of ellipses");
  c_synth->add_option("--mode", mode, "occluded|overlapping");
  c_synth->add_option("--seed", synth_seed, "random seed");
  c_synth->add_option("-o,--output", out_path, "output PGM path")->required();
  c_synth->add_option("--truth", truth_path, "ground-truth JSON path");

  auto* c_bench = app.add_subcommand("bench", "evaluate detections against truth");
  c_bench->add_option("detections", det_path, "detection JSON")->required();
  c_bench->add_option("truth", truth_path, "truth JSON")->required();
  c_bench->add_option("--overlap", overlap, "true-positive overlap threshold");
  c_bench->add_option("-o,--output", bench_out, "output JSON path (stdout when omitted)");

  auto* c_bounds = app.add_subcommand("bounds", "CSV tables of the deviation bounds");
  c_bounds->add_option("-o,--output", out_path, "output CSV path");
  c_bounds->add_option("--s-min", s_min, "smallest segment length");
  c_bounds->add_option("--s-max", s_max, "largest segment length");
  c_bounds->add_option("--s-step", s_step, "segment length step");
  c_bounds->add_option("--phi-step", phi_step, "angle step in degrees");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_contours->parsed()) return cmd_contours(in, out_path, min_len);
    if (c_approx->parsed()) return cmd_approx(in, out_path, method, dtol, eps0, rtol);
    if (c_tangent->parsed()) return cmd_tangent(in, out_path, R);
    if (c_fit->parsed()) return cmd_fit(in, out_path, fit_method);
    if (c_detect->parsed()) return cmd_detect(in, out_path, svg_path, params);
    if (c_synth->parsed()) return cmd_synth(alpha, mode, synth_seed, out_path, truth_path);
    if (c_bench->parsed()) return cmd_bench(det_path, truth_path, overlap, bench_out);
    if (c_bounds->parsed()) return cmd_bounds(out_path, s_min, s_max, s_step, phi_step);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
