#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zlab/lfunc_model.hpp"

namespace zlab {

/// A holomorphic function handed to the counting machinery: jet(s, k)
/// returns g and its first k derivatives, k <= max_order.
struct Target {
    std::function<Jet(Complex, int)> jet;
    int max_order = 1;
    std::string name;

    Complex value(Complex s) const { return jet(s, 0).value; }
};

enum class Which { F, Fprime };

const char* to_string(Which which);
Which which_from_string(const std::string& name);

Target make_target(const FunctionSpec& spec, Which which, const EvalOptions& opts = {});

enum class SegmentKind { Line, Arc };

/// Line a -> b, or the arc center + radius e^{iφ} for φ from phi0 to phi1
/// (phi1 < phi0 runs clockwise).
struct Segment {
    SegmentKind kind = SegmentKind::Line;
    Complex a{}, b{};
    Complex center{};
    double radius = 0.0;
    double phi0 = 0.0, phi1 = 0.0;

    static Segment line(Complex from, Complex to);
    static Segment arc(Complex center, double radius, double phi0, double phi1);

    Complex point(double p) const;
    /// Offset of point(p) from the arc center, free of cancellation.
    Complex offset(double p) const;
    Complex start() const { return point(0.0); }
    Complex end() const { return point(1.0); }
    double length() const;
};

enum class ContourKind { Rectangle, Circle, HalfDiskLeft, Custom };
enum class Side { Left, Right };

struct Indentation {
    Complex center{};
    double radius = 0.0;
    Side side = Side::Left;
};

/// Closed, positively oriented path.  The geometric parameters are kept so
/// the contour can be rebuilt slightly enlarged when a zero sits on it.
struct Contour {
    ContourKind kind = ContourKind::Custom;
    std::vector<Segment> segments;
    std::vector<Indentation> indentations;

    Complex center{};
    double radius = 0.0;
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

    static Contour rectangle(double x0, double x1, double y0, double y1);
    static Contour circle(Complex center, double radius);
    /// Boundary of {|s - s0| <= r, σ < 1/2}: the arc left of the line run
    /// counter-clockwise, then the chord upward with a left semicircle of
    /// radius `indent_radius` around each listed ordinate.
    static Contour half_disk_left(Complex s0, double r, std::vector<double> line_zeros, double indent_radius);
    static Contour custom(std::vector<Segment> segments);

    Contour expanded(double eps) const;
    double diameter() const;
    bool is_closed(double tol = 1e-12) const;
    /// Signed area by the shoelace formula on a fine polygon; positive for a
    /// positively oriented contour.
    double signed_area(int samples_per_segment = 64) const;
};

struct WindingOptions {
    double max_arg_step = kPi / 2;      // per accepted sub-segment
    double max_logderiv_step = 1.5;     // |Δs| |g'/g| per accepted sub-segment
    int max_depth = 40;
    int initial_samples = 8;            // per segment before refinement
    double zero_rel = 1e-12;            // |g| below zero_rel * scale is a hit
    double taylor_rel = 1e-6;           // arcs this small relative to |center| use a local Taylor model
    int max_nudges = 3;
    double nudge_rel = 1e-6;
};

/// Total change of arg g along the contour, in radians.  Throws
/// OnContourZero or NonConvergence; never nudges.
double arg_change(const Target& g, const Contour& contour, const WindingOptions& opts = {});

/// Change of arg g along one segment; `scale` is the magnitude reference
/// for the on-contour test.
double segment_arg_change(const Target& g, const Segment& seg, double scale, const WindingOptions& opts = {});

/// Zeros minus poles inside the contour.  A zero on the contour makes the
/// contour grow by nudge_rel times its diameter, at most max_nudges times.
int winding_count(const Target& g, const Contour& contour, const WindingOptions& opts = {});
int winding_count(const FunctionSpec& spec, Which which, const Contour& contour, const WindingOptions& opts = {});

/// Radius below which a disk about c cannot be resolved by sampling and is
/// handled by a local Taylor model.
double tiny_radius_threshold(Complex c);

/// Zeros in |s - c| < r by Rouché's theorem applied to the Taylor
/// polynomial of g at c; the remainder is bounded by a Cauchy estimate from
/// the circle of radius `cauchy_radius`.  Throws PrecisionUnreachable when no
/// term dominates.
int taylor_disk_count(const Target& g, Complex c, double r, double cauchy_radius = 0.1);

/// Zeros in the disk |s - c| < r, by Rouché for tiny r and by winding
/// otherwise.
int disk_count(const Target& g, Complex c, double r, const WindingOptions& opts = {});

} // namespace zlab
