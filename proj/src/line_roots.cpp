#include "zlab/line_roots.hpp"

#include <algorithm>
#include <cmath>

namespace zlab {

double bracketed_root(const RealFunction& f, double a, double b, double fa, double fb)
{
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    double x = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        const RealJet j = f(x);
        if (j.v == 0.0) return x;
        if ((j.v < 0.0) == (fa < 0.0)) {
            a = x;
            fa = j.v;
        } else {
            b = x;
            fb = j.v;
        }
        double next = j.d1 != 0.0 ? x - j.v / j.d1 : 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (std::abs(next - x) <= 4e-16 * std::max(1.0, std::abs(x)) || b - a <= 4e-16 * std::max(1.0, std::abs(x)))
            return next;
        x = next;
    }
    return x;
}

std::vector<double> real_roots(const RealFunction& f, double a, double b, int intervals)
{
    intervals = std::max(2, intervals);
    std::vector<double> t(static_cast<std::size_t>(intervals) + 1);
    std::vector<RealJet> v(t.size());
    for (int i = 0; i <= intervals; ++i) {
        t[static_cast<std::size_t>(i)] = i == intervals ? b : a + (b - a) * i / intervals;
        v[static_cast<std::size_t>(i)] = f(t[static_cast<std::size_t>(i)]);
    }
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double fa = v[i].v, fb = v[i + 1].v;
        if (fa == 0.0 && i > 0) roots.push_back(t[i]);
        if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) roots.push_back(bracketed_root(f, t[i], t[i + 1], fa, fb));
    }
    // Hidden pairs: the slope changes sign inside an interval without f doing so.
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const RealJet& p = v[i];
        const RealJet& q = v[i + 1];
        if ((p.v < 0.0) != (q.v < 0.0) || p.v == 0.0 || q.v == 0.0) continue;
        if ((p.d1 < 0.0) == (q.d1 < 0.0)) continue;
        // f' crosses zero in (t_i, t_{i+1}); the extremum points toward zero when
        // f decreases in magnitude first.
        if ((p.v > 0.0) == (p.d1 > 0.0)) continue;
        const RealFunction slope = [&f](double x) {
            const RealJet j = f(x);
            return RealJet{j.d1, j.d2, 0.0};
        };
        const double c = bracketed_root(slope, t[i], t[i + 1], p.d1, q.d1);
        const RealJet jc = f(c);
        const double tiny = 1e-15 * std::max({std::abs(p.v), std::abs(q.v), 1e-300});
        if (std::abs(jc.v) <= tiny) {
            roots.push_back(c);
            roots.push_back(c);
        } else if ((jc.v < 0.0) != (p.v < 0.0)) {
            roots.push_back(bracketed_root(f, t[i], c, p.v, jc.v));
            roots.push_back(bracketed_root(f, c, t[i + 1], jc.v, q.v));
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

double golden_min(const std::function<double(double)>& f, double a, double b, double tol)
{
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace zlab
