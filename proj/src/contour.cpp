#include "zlab/contour.hpp"

#include <algorithm>
#include <cmath>

namespace zlab {

const char* to_string(Which which) { return which == Which::F ? "F" : "Fprime"; }

Which which_from_string(const std::string& name)
{
    if (name == "F" || name == "f") return Which::F;
    if (name == "Fprime" || name == "fprime" || name == "F'") return Which::Fprime;
    throw Error(ErrorCode::InvalidArgument, "unknown target '" + name + "'");
}

Target make_target(const FunctionSpec& spec, Which which, const EvalOptions& opts)
{
    Target t;
    if (which == Which::F) {
        t.jet = [spec, opts](Complex s, int k) { return eval_jet(spec, s, k, opts).jet; };
        t.max_order = 2;
        t.name = "F";
    } else {
        t.jet = [spec, opts](Complex s, int k) {
            const Jet j = eval_jet(spec, s, k + 1, opts).jet;
            return Jet{j.d1, j.d2, 0.0};
        };
        t.max_order = 1;
        t.name = "Fprime";
    }
    return t;
}

Segment Segment::line(Complex from, Complex to)
{
    Segment s;
    s.kind = SegmentKind::Line;
    s.a = from;
    s.b = to;
    return s;
}

Segment Segment::arc(Complex center, double radius, double phi0, double phi1)
{
    Segment s;
    s.kind = SegmentKind::Arc;
    s.center = center;
    s.radius = radius;
    s.phi0 = phi0;
    s.phi1 = phi1;
    return s;
}

Complex Segment::offset(double p) const
{
    if (kind == SegmentKind::Line) return (b - a) * p;
    return std::polar(radius, phi0 + (phi1 - phi0) * p);
}

Complex Segment::point(double p) const
{
    if (kind == SegmentKind::Line) {
        if (p == 1.0) return b;
        return a + (b - a) * p;
    }
    return center + offset(p);
}

double Segment::length() const
{
    if (kind == SegmentKind::Line) return std::abs(b - a);
    return radius * std::abs(phi1 - phi0);
}

Contour Contour::rectangle(double x0, double x1, double y0, double y1)
{
    if (!(x0 < x1 && y0 < y1)) throw Error(ErrorCode::InvalidArgument, "degenerate rectangle");
    Contour c;
    c.kind = ContourKind::Rectangle;
    c.x0 = x0;
    c.x1 = x1;
    c.y0 = y0;
    c.y1 = y1;
    const Complex p00(x0, y0), p10(x1, y0), p11(x1, y1), p01(x0, y1);
    c.segments = {Segment::line(p00, p10), Segment::line(p10, p11), Segment::line(p11, p01), Segment::line(p01, p00)};
    return c;
}

Contour Contour::circle(Complex center, double radius)
{
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "circle radius must be positive");
    Contour c;
    c.kind = ContourKind::Circle;
    c.center = center;
    c.radius = radius;
    c.segments = {Segment::arc(center, radius, 0.0, 2.0 * kPi)};
    return c;
}

Contour Contour::half_disk_left(Complex s0, double r, std::vector<double> line_zeros, double indent_radius)
{
    const double d = 0.5 - s0.real();
    if (!(r > 0.0) || !(d >= 0.0) || !(d < r))
        throw Error(ErrorCode::InvalidArgument, "half disk needs 1/2 - r < Re s0 <= 1/2");
    Contour c;
    c.kind = ContourKind::HalfDiskLeft;
    c.center = s0;
    c.radius = r;
    const double T = s0.imag();
    const double h = std::sqrt((r - d) * (r + d));
    const double alpha = std::atan2(h, d);
    c.segments.push_back(Segment::arc(s0, r, alpha, 2.0 * kPi - alpha));
    std::sort(line_zeros.begin(), line_zeros.end());
    Complex cur(0.5, T - h);
    for (double g : line_zeros) {
        if (!(g - indent_radius > T - h && g + indent_radius < T + h))
            throw Error(ErrorCode::BoundaryZero, "line zero too close to the arc at t = " + std::to_string(g));
        const Complex zc(0.5, g);
        c.segments.push_back(Segment::line(cur, Complex(0.5, g - indent_radius)));
        c.segments.push_back(Segment::arc(zc, indent_radius, -kPi / 2, -3.0 * kPi / 2));
        c.indentations.push_back({zc, indent_radius, Side::Left});
        cur = Complex(0.5, g + indent_radius);
    }
    c.segments.push_back(Segment::line(cur, Complex(0.5, T + h)));
    return c;
}

Contour Contour::custom(std::vector<Segment> segments)
{
    Contour c;
    c.kind = ContourKind::Custom;
    c.segments = std::move(segments);
    return c;
}

Contour Contour::expanded(double eps) const
{
    switch (kind) {
    case ContourKind::Rectangle:
        return rectangle(x0 - eps, x1 + eps, y0 - eps, y1 + eps);
    case ContourKind::Circle:
        return circle(center, radius + eps);
    case ContourKind::HalfDiskLeft: {
        std::vector<double> zeros;
        for (const auto& ind : indentations) zeros.push_back(ind.center.imag());
        const double rho = indentations.empty() ? 0.0 : indentations.front().radius;
        return half_disk_left(center, radius + eps, zeros, rho);
    }
    case ContourKind::Custom:
        break;
    }
    throw Error(ErrorCode::OnContourZero, "custom contour cannot be nudged");
}

double Contour::diameter() const
{
    switch (kind) {
    case ContourKind::Rectangle: return std::hypot(x1 - x0, y1 - y0);
    case ContourKind::Circle:
    case ContourKind::HalfDiskLeft: return 2.0 * radius;
    case ContourKind::Custom: break;
    }
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const auto& s : segments)
        for (int i = 0; i <= 16; ++i) {
            const Complex z = s.point(i / 16.0);
            lo_x = std::min(lo_x, z.real());
            hi_x = std::max(hi_x, z.real());
            lo_y = std::min(lo_y, z.imag());
            hi_y = std::max(hi_y, z.imag());
        }
    return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

bool Contour::is_closed(double tol) const
{
    if (segments.empty()) return false;
    const double scale = std::max(1.0, diameter());
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const Complex e = segments[i].end();
        const Complex s = segments[(i + 1) % segments.size()].start();
        if (std::abs(e - s) > tol * scale + 1e-15 * std::abs(s)) return false;
    }
    return true;
}

double Contour::signed_area(int n) const
{
    double area = 0.0;
    const Complex origin = segments.empty() ? Complex{} : segments.front().start();
    for (const auto& s : segments)
        for (int i = 0; i < n; ++i) {
            const Complex p = s.point(static_cast<double>(i) / n) - origin;
            const Complex q = s.point(static_cast<double>(i + 1) / n) - origin;
            area += 0.5 * (p.real() * q.imag() - q.real() * p.imag());
        }
    return area;
}

namespace {

struct Node {
    double p;
    Complex z;     // position (offset from the anchor for Taylor segments)
    Complex g;
    Complex dg;
};

class SegmentSampler {
public:
    SegmentSampler(const Target& g, const Segment& seg, const WindingOptions& opts) : g_(g), seg_(seg)
    {
        taylor_ = seg.kind == SegmentKind::Arc &&
                  seg.radius < opts.taylor_rel * std::max(1.0, std::abs(seg.center));
        if (taylor_) {
            const Jet j = g.jet(seg.center, g.max_order);
            coef_ = {j.value, j.d1, 0.5 * j.d2};
            order_ = g.max_order;
        }
    }

    Node at(double p) const
    {
        if (taylor_) {
            const Complex w = seg_.offset(p);
            Complex v = coef_[0], d = 0.0;
            if (order_ >= 1) {
                v += coef_[1] * w;
                d += coef_[1];
            }
            if (order_ >= 2) {
                v += coef_[2] * w * w;
                d += 2.0 * coef_[2] * w;
            }
            return {p, w, v, d};
        }
        const Complex z = seg_.point(p);
        const Jet j = g_.jet(z, 1);
        return {p, z, j.value, j.d1};
    }

private:
    const Target& g_;
    const Segment& seg_;
    bool taylor_ = false;
    std::array<Complex, 3> coef_{};
    int order_ = 0;
};

void check_node(const Node& n, double scale, const WindingOptions& opts)
{
    if (!is_finite(n.g) || !is_finite(n.dg))
        throw Error(ErrorCode::PrecisionUnreachable, "non-finite value on contour");
    if (std::abs(n.g) < opts.zero_rel * scale)
        throw Error(ErrorCode::OnContourZero, "zero on contour near s = (" + std::to_string(n.z.real()) + ", " +
                                                  std::to_string(n.z.imag()) + ")");
}

double refine(const SegmentSampler& sampler, const Node& a, const Node& b, int depth, double scale,
              const WindingOptions& opts)
{
    const double darg = std::arg(b.g / a.g);
    const double ds = std::abs(b.z - a.z);
    const double ld = ds * std::max(std::abs(a.dg / a.g), std::abs(b.dg / b.g));
    if (std::abs(darg) < opts.max_arg_step && ld <= opts.max_logderiv_step) return darg;
    const double pm = 0.5 * (a.p + b.p);
    if (!(pm > a.p && pm < b.p) || ds == 0.0)
        throw Error(ErrorCode::OnContourZero, "contour subdivision reached the floating-point resolution");
    if (depth >= opts.max_depth) throw Error(ErrorCode::NonConvergence, "contour subdivision exceeded the depth cap");
    const Node m = sampler.at(pm);
    check_node(m, scale, opts);
    return refine(sampler, a, m, depth + 1, scale, opts) + refine(sampler, m, b, depth + 1, scale, opts);
}

std::vector<Node> initial_nodes(const SegmentSampler& sampler, int n)
{
    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) nodes.push_back(sampler.at(static_cast<double>(i) / n));
    return nodes;
}

double arg_change_of_nodes(const SegmentSampler& sampler, const std::vector<Node>& nodes, double scale,
                           const WindingOptions& opts)
{
    for (const auto& n : nodes) check_node(n, scale, opts);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) total += refine(sampler, nodes[i], nodes[i + 1], 0, scale, opts);
    return total;
}

} // namespace

double segment_arg_change(const Target& g, const Segment& seg, double scale, const WindingOptions& opts)
{
    const SegmentSampler sampler(g, seg, opts);
    return arg_change_of_nodes(sampler, initial_nodes(sampler, std::max(1, opts.initial_samples)), scale, opts);
}

double arg_change(const Target& g, const Contour& contour, const WindingOptions& opts)
{
    std::vector<SegmentSampler> samplers;
    samplers.reserve(contour.segments.size());
    for (const auto& seg : contour.segments) samplers.emplace_back(g, seg, opts);
    std::vector<std::vector<Node>> nodes;
    double scale = 0.0;
    for (const auto& s : samplers) {
        nodes.push_back(initial_nodes(s, std::max(1, opts.initial_samples)));
        for (const auto& n : nodes.back()) scale = std::max(scale, std::abs(n.g));
    }
    if (!std::isfinite(scale)) throw Error(ErrorCode::PrecisionUnreachable, "non-finite value on contour");
    double total = 0.0;
    for (std::size_t i = 0; i < samplers.size(); ++i) total += arg_change_of_nodes(samplers[i], nodes[i], scale, opts);
    return total;
}

int winding_count(const Target& g, const Contour& contour, const WindingOptions& opts)
{
    Contour c = contour;
    for (int attempt = 0;; ++attempt) {
        try {
            const double w = arg_change(g, c, opts) / (2.0 * kPi);
            const double n = std::round(w);
            if (std::abs(w - n) > 0.05)
                throw Error(ErrorCode::NonConvergence, "argument change is not a multiple of 2π: " + std::to_string(w));
            return static_cast<int>(n);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::OnContourZero || attempt >= opts.max_nudges) throw;
            c = c.expanded(opts.nudge_rel * c.diameter());
        }
    }
}

int winding_count(const FunctionSpec& spec, Which which, const Contour& contour, const WindingOptions& opts)
{
    return winding_count(make_target(spec, which), contour, opts);
}

double tiny_radius_threshold(Complex c) { return 1e-9 * std::max(1.0, std::abs(c)); }

int taylor_disk_count(const Target& g, Complex c, double r, double cauchy_radius)
{
    if (!(r > 0.0 && r < cauchy_radius)) throw Error(ErrorCode::InvalidArgument, "need 0 < r < cauchy radius");
    const int n = std::min(g.max_order, 2);
    const Jet j = g.jet(c, n);
    const std::array<Complex, 3> coef{j.value, j.d1, 0.5 * j.d2};
    double M = 0.0;
    constexpr int kSamples = 64;
    for (int i = 0; i < kSamples; ++i) M = std::max(M, std::abs(g.value(c + std::polar(cauchy_radius, 2.0 * kPi * i / kSamples))));
    M *= 1.25;
    const double q = r / cauchy_radius;
    const double remainder = M * std::pow(q, n + 1) / (1.0 - q) + 1e-14 * M;
    std::array<double, 3> term{};
    for (int k = 0; k <= n; ++k) term[static_cast<std::size_t>(k)] = std::abs(coef[static_cast<std::size_t>(k)]) * std::pow(r, k);
    for (int k = 0; k <= n; ++k) {
        double rest = remainder;
        for (int i = 0; i <= n; ++i)
            if (i != k) rest += term[static_cast<std::size_t>(i)];
        if (term[static_cast<std::size_t>(k)] > rest) return k;
    }
    throw Error(ErrorCode::PrecisionUnreachable, "no dominant Taylor term on a circle of radius " + std::to_string(r));
}

int disk_count(const Target& g, Complex c, double r, const WindingOptions& opts)
{
    if (r < tiny_radius_threshold(c)) return taylor_disk_count(g, c, r);
    return winding_count(g, Contour::circle(c, r), opts);
}

} // namespace zlab
