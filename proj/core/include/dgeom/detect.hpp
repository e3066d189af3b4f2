#pragma once

#include "dgeom/approx.hpp"
#include "dgeom/curve.hpp"
#include "dgeom/ellipse.hpp"
#include "dgeom/raster.hpp"

#include <cstdint>
#include <map>
#include <random>

namespace dgeom {

struct DetectParams {
  uint64_t seed = 0;
  int sets = 200;             // S: random 3-pixel sets per contour
  int bin_size = 25;          // square center bins, pixels
  double eps_ls = 0.01;       // C1 threshold on ||D A||^2 / N, ||A|| = 1
  double deb_radius = 4.0;    // R for tangent estimation
  double sharp_turn = 1.5707963267948966;  // theta_0
  double merge_overlap = 0.9;              // D_0
  double align_dist = 2.0;                 // d_0
  double convexity_tol = 2.0;              // pixels of digitization slack
  // ablation switches (full pipeline keeps all three on)
  bool use_search_region = true;
  bool use_convexity = true;
  bool use_relationship_score = true;
};

/// A split edge contour with no interior sharp turn or inflexion.
struct SmoothContour {
  size_t id = 0;
  DigitalCurve curve;
  PolyApprox approx;                 // rdp_mod of the piece
  double tangent_start = 0.0;        // endpoint tangent angles (DEB)
  double tangent_end = 0.0;
  bool tangents_ok = false;
  PixelPoint midpoint;
};

struct CenterBin {
  int row = 0;
  int col = 0;
  double accum_relationship = 0.0;
  std::map<size_t, std::pair<int, double>> voters;  // contour id -> (S_eb, r_eb)
};

struct EllipticHypothesis {
  EllipseGeometric ellipse;
  std::vector<size_t> group;  // contour ids, descending relationship score
  int bin_row = 0;
  int bin_col = 0;
  double ls_residual = 0.0;
  double saliency_c = 0.0;    // angular circumference ratio
  double saliency_a = 0.0;    // alignment ratio
  double saliency_phi = 0.0;  // angular continuity ratio
  double sigma_add = 0.0;
  double sigma_mul = 0.0;     // reported, never used for selection
};

/// Signed turn angles between consecutive polygon edges; angle i is the
/// anticlockwise angle from edge i+1 to edge i, at the shared vertex.
/// Closed polygons yield one angle per vertex (cyclic), open ones N-1.
std::vector<double> turn_angles(const DigitalCurve& curve, const PolyApprox& approx);

/// Vertex positions (into the angle indexing: angle k sits at vertex k+1 for
/// open polygons, at vertex k for closed ones) where |angle| >= theta0.
std::vector<size_t> sharp_turn_vertices(const std::vector<double>& angles, double theta0);

/// Split vertex positions from the inflexion pattern table: b_k flags a sign
/// change between angles k and k+1; an isolated flag splits one vertex, a
/// double flag two, a longer run one.
std::vector<size_t> inflexion_splits(const std::vector<double>& angles);

/// Cuts a contour into smooth pieces at sharp turns and inflexion points
/// (pieces shorter than 5 pixels are dropped), computing the piece
/// approximations and endpoint tangents.
std::vector<SmoothContour> extract_smooth_contours(const std::vector<DigitalCurve>& contours,
                                                   const DetectParams& params);

/// True iff every pixel of `cand` lies inside the search region of `host`
/// (same side as the host midpoint of both endpoint tangents, opposite side
/// of the endpoint chord).
bool search_region_accepts(const SmoothContour& host, const SmoothContour& cand);

/// Collinearity test of Eq.-style |P1'P2'| ~ |P1P1'| + |P1P2| + |P2P2'|
/// within tol pixels, where P1/P2 are the chord midpoints and P1'/P2' the
/// contour pixels nearest to the line P1P2.
bool associated_convexity_ok(const SmoothContour& c1, const SmoothContour& c2, double tol = 2.0);

struct VoteResult {
  std::map<std::pair<int, int>, int> per_bin;  // (row, col) -> S_eb
  int valid_sets = 0;                          // S_e
};

/// S random 3-pixel sets (one pixel per contour third); each non-degenerate
/// set votes its Yuen center into a bin. Degenerate sets are skipped and not
/// counted in S_e.
VoteResult vote_centers(const SmoothContour& contour, int sets, int bin_size, int width,
                        int height, double deb_radius, std::mt19937_64& rng);

/// r_eb = S_eb * r1 * r2 with the exponential dampening ratios; 0 when S_e = 0.
double relationship_score(int s_eb, int s_e, int s);

/// Fits one hypothesis to the bin's (filtered, score-ranked) contour group,
/// dropping the weakest contour until the residual and center-inside checks
/// pass, or the group empties.
std::optional<EllipticHypothesis> group_and_fit(const CenterBin& bin,
                                                const std::vector<SmoothContour>& contours,
                                                const DetectParams& params);

/// Jaccard overlap of the two elliptic regions on the integer grid covering
/// their joint bounding box.
double overlap_ratio(const EllipseGeometric& e1, const EllipseGeometric& e2);

/// Transitive clustering at pairwise overlap > d0; keeps the member with the
/// largest angular circumference ratio per cluster.
std::vector<EllipticHypothesis> merge_similar(std::vector<EllipticHypothesis> hyps,
                                              double d0 = 0.9);

/// Fills saliency_c / saliency_a / saliency_phi / sigma_add / sigma_mul.
void saliency_scores(EllipticHypothesis& h, const std::vector<SmoothContour>& contours,
                     const DetectParams& params);

/// Keeps hypotheses at or above the post-merge average in every criterion.
std::vector<EllipticHypothesis> select_hypotheses(std::vector<EllipticHypothesis> hyps);

/// Full pipeline: smooth contour extraction, center voting, grouping and
/// fitting, similarity merging, saliency selection. Deterministic for a
/// fixed seed.
std::vector<EllipticHypothesis> detect(const Raster& edge_map, const DetectParams& params = {});

/// The smooth contours the last stage of detect() was run on, recomputed;
/// used by the CLI for SVG overlays and group reporting.
std::vector<SmoothContour> detect_contours(const Raster& edge_map, const DetectParams& params = {});

}  // namespace dgeom
