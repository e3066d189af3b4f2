#include "dgeom/json_io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dgeom {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

JValue::JValue(double d) : v_(d) {
  if (!std::isfinite(d)) throw std::invalid_argument("JValue: non-finite double");
}

JValue& JValue::set(const std::string& key, JValue val) {
  std::get<Object>(v_).emplace_back(key, std::move(val));
  return *this;
}

JValue& JValue::push(JValue val) {
  std::get<Array>(v_).push_back(std::move(val));
  return *this;
}

namespace {
void dump_string(std::ostream& out, const std::string& s) {
  out << '"';
  for (char c : s) {
    switch (c) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      case '\t': out << "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out << buf;
        } else {
          out << c;
        }
    }
  }
  out << '"';
}
}  // namespace

void JValue::dump(std::ostream& out, int indent, int depth) const {
  const std::string pad(size_t(indent) * (depth + 1), ' ');
  const std::string padend(size_t(indent) * depth, ' ');
  const char* nl = indent ? "\n" : "";
  switch (v_.index()) {
    case 0: out << "null"; break;
    case 1: out << (std::get<bool>(v_) ? "true" : "false"); break;
    case 2: out << std::get<int64_t>(v_); break;
    case 3: out << format_double(std::get<double>(v_)); break;
    case 4: dump_string(out, std::get<std::string>(v_)); break;
    case 5: {
      const auto& a = std::get<Array>(v_);
      if (a.empty()) {
        out << "[]";
        break;
      }
      out << '[' << nl;
      for (size_t i = 0; i < a.size(); ++i) {
        out << pad;
        a[i].dump(out, indent, depth + 1);
        out << (i + 1 < a.size() ? "," : "") << nl;
      }
      out << padend << ']';
      break;
    }
    case 6: {
      const auto& o = std::get<Object>(v_);
      if (o.empty()) {
        out << "{}";
        break;
      }
      out << '{' << nl;
      for (size_t i = 0; i < o.size(); ++i) {
        out << pad;
        dump_string(out, o[i].first);
        out << (indent ? ": " : ":");
        o[i].second.dump(out, indent, depth + 1);
        out << (i + 1 < o.size() ? "," : "") << nl;
      }
      out << padend << '}';
      break;
    }
  }
}

std::string JValue::dump(int indent) const {
  std::ostringstream ss;
  dump(ss, indent);
  return ss.str();
}

// --- serializers -------------------------------------------------------------

JValue curve_to_json(const DigitalCurve& c) {
  JValue pts = JValue::array();
  for (const auto& p : c.points) pts.push(JValue::array().push(p.x).push(p.y));
  return JValue::object().set("closed", c.closed).set("points", std::move(pts));
}

JValue metric_report_to_json(const MetricReport& r) {
  JValue j = JValue::object();
  j.set("md", r.md).set("ise", r.ise).set("cr", r.cr).set("dr", r.dr);
  if (r.fom_infinite)
    j.set("fom", nullptr).set("fom_infinite", true);
  else
    j.set("fom", r.fom).set("fom_infinite", false);
  j.set("precision", r.precision).set("reliability", r.reliability);
  j.set("n_points", r.n_points).set("n_dominant", r.n_dominant);
  return j;
}

JValue ellipse_to_json(const EllipseGeometric& e) {
  return JValue::object().set("a", e.a).set("b", e.b).set("theta", e.theta_c).set("xc", e.xc).set(
      "yc", e.yc);
}

JValue fit_result_to_json(const FitResult& f) {
  JValue j = JValue::object();
  if (f.ellipse)
    j.set("ellipse", ellipse_to_json(*f.ellipse)).set("rejected", nullptr);
  else
    j.set("ellipse", nullptr).set("rejected", to_string(*f.rejected_reason));
  j.set("mean_distance", f.mean_distance).set("residual", f.residual);
  return j;
}

JValue approx_to_json(const PolyApprox& a) {
  JValue idx = JValue::array();
  for (size_t i : a.indices) idx.push(i);
  JValue params = JValue::object();
  switch (a.method) {
    case ApproxMethod::Rdp:
    case ApproxMethod::Masood: params.set("d_tol", a.params.d_tol); break;
    case ApproxMethod::Pro: params.set("eps0", a.params.eps0); break;
    case ApproxMethod::Carmona: params.set("r_tol", a.params.r_tol); break;
    default: break;
  }
  return JValue::object()
      .set("method", to_string(a.method))
      .set("closed", a.closed)
      .set("params", std::move(params))
      .set("indices", std::move(idx));
}

JValue hypothesis_to_json(const EllipticHypothesis& h) {
  JValue group = JValue::array();
  for (size_t id : h.group) group.push(id);
  return JValue::object()
      .set("ellipse", ellipse_to_json(h.ellipse))
      .set("saliency",
           JValue::object().set("c", h.saliency_c).set("a", h.saliency_a).set("phi", h.saliency_phi))
      .set("sigma_add", h.sigma_add)
      .set("sigma_mul", h.sigma_mul)
      .set("ls_residual", h.ls_residual)
      .set("bin", JValue::array().push(h.bin_row).push(h.bin_col))
      .set("contours", std::move(group));
}

JValue scene_truth_to_json(const SceneTruth& t) {
  JValue es = JValue::array();
  for (const auto& e : t.ellipses) es.push(ellipse_to_json(e));
  return JValue::object()
      .set("width", t.width)
      .set("height", t.height)
      .set("mode", to_string(t.mode))
      .set("ellipses", std::move(es));
}

JValue eval_result_to_json(const EvalResult& r) {
  return JValue::object()
      .set("precision", r.precision)
      .set("recall", r.recall)
      .set("f_measure", r.f_measure)
      .set("tp", r.tp)
      .set("total_hyp", r.total_hyp)
      .set("total_truth", r.total_truth);
}

// --- parsers -----------------------------------------------------------------

namespace {
nlohmann::json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

EllipseGeometric ellipse_from(const nlohmann::json& j) {
  EllipseGeometric e;
  e.a = j.at("a").get<double>();
  e.b = j.at("b").get<double>();
  e.theta_c = j.at("theta").get<double>();
  e.xc = j.at("xc").get<double>();
  e.yc = j.at("yc").get<double>();
  return e;
}
}  // namespace

DigitalCurve curve_from_json_file(const std::string& path) {
  const auto j = load(path);
  DigitalCurve c;
  c.closed = j.at("closed").get<bool>();
  for (const auto& p : j.at("points")) c.points.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
  return c;
}

SceneTruth scene_truth_from_json_file(const std::string& path) {
  const auto j = load(path);
  SceneTruth t;
  t.width = j.at("width").get<int>();
  t.height = j.at("height").get<int>();
  t.mode = j.at("mode").get<std::string>() == "overlapping" ? SceneMode::Overlapping
                                                            : SceneMode::Occluded;
  for (const auto& e : j.at("ellipses")) t.ellipses.push_back(ellipse_from(e));
  return t;
}

std::vector<EllipseGeometric> ellipses_from_json_file(const std::string& path) {
  const auto j = load(path);
  std::vector<EllipseGeometric> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(ellipse_from(e.contains("ellipse") ? e.at("ellipse") : e));
  } else if (j.contains("hypotheses")) {
    for (const auto& e : j.at("hypotheses")) out.push_back(ellipse_from(e.at("ellipse")));
  } else if (j.contains("ellipses")) {
    for (const auto& e : j.at("ellipses")) out.push_back(ellipse_from(e));
  } else {
    throw std::runtime_error(path + ": no ellipse list found");
  }
  return out;
}

}  // namespace dgeom
