#pragma once

#include "dgeom/approx.hpp"
#include "dgeom/curve.hpp"
#include "dgeom/detect.hpp"
#include "dgeom/ellipse.hpp"
#include "dgeom/metrics.hpp"
#include "dgeom/synth.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace dgeom {

/// Ordered JSON document with deterministic serialization: object keys keep
/// insertion order and doubles print with 9 significant digits, so repeated
/// runs with identical inputs produce byte-identical files.
class JValue {
 public:
  using Array = std::vector<JValue>;
  using Object = std::vector<std::pair<std::string, JValue>>;

  JValue() : v_(nullptr) {}
  JValue(std::nullptr_t) : v_(nullptr) {}
  JValue(bool b) : v_(b) {}
  JValue(double d);  // rejects non-finite values
  JValue(int64_t i) : v_(i) {}
  JValue(size_t i) : v_(int64_t(i)) {}
  JValue(int i) : v_(int64_t(i)) {}
  JValue(std::string s) : v_(std::move(s)) {}
  JValue(const char* s) : v_(std::string(s)) {}
  JValue(Array a) : v_(std::move(a)) {}

  static JValue object() { return JValue(Object{}); }
  static JValue array() { return JValue(Array{}); }

  JValue& set(const std::string& key, JValue val);
  JValue& push(JValue val);

  void dump(std::ostream& out, int indent = 0, int depth = 0) const;
  std::string dump(int indent = 0) const;

 private:
  explicit JValue(Object o) : v_(std::move(o)) {}
  std::variant<std::nullptr_t, bool, int64_t, double, std::string, Array, Object> v_;
};

/// %.9g with "-0" normalized to "0".
std::string format_double(double v);

// --- serializers -------------------------------------------------------------
JValue curve_to_json(const DigitalCurve& c);
JValue metric_report_to_json(const MetricReport& r);
JValue ellipse_to_json(const EllipseGeometric& e);
JValue fit_result_to_json(const FitResult& f);
JValue approx_to_json(const PolyApprox& a);
JValue hypothesis_to_json(const EllipticHypothesis& h);
JValue scene_truth_to_json(const SceneTruth& t);
JValue eval_result_to_json(const EvalResult& r);

// --- parsers -----------------------------------------------------------------
DigitalCurve curve_from_json_file(const std::string& path);
SceneTruth scene_truth_from_json_file(const std::string& path);
/// Reads the "hypotheses" list of a detection file (or a bare ellipse list).
std::vector<EllipseGeometric> ellipses_from_json_file(const std::string& path);

}  // namespace dgeom
