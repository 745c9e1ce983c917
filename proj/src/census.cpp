#include "zlab/census.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <tuple>

#include "zlab/parallel.hpp"

namespace zlab {

bool CensusResult::conservation_ok() const
{
    return std::all_of(conservation.begin(), conservation.end(), [](const ConservationCheck& c) { return c.ok(); });
}

namespace {

StepControl with_checkpoints(const CensusOptions& opts)
{
    StepControl sc = opts.step;
    for (double tau : opts.conservation_taus) sc.checkpoints.push_back(tau);
    std::sort(sc.checkpoints.begin(), sc.checkpoints.end());
    sc.checkpoints.erase(std::unique(sc.checkpoints.begin(), sc.checkpoints.end()), sc.checkpoints.end());
    return sc;
}

Trajectory trace_seed(const ParametricFamily& fam, const CensusSeed& seed, const StepControl& sc)
{
    try {
        return trace(fam, Which::F, seed.rho, 0.0, 1.0, sc);
    } catch (const Error& e) {
        Trajectory tr;
        tr.samples.push_back({0.0, seed.rho});
        tr.status = TrajectoryStatus::Incomplete;
        tr.reason = e.what();
        return tr;
    }
}

// Polishes a seed on the line as a root of Z, which keeps Re ρ = 1/2 exact.
Complex polish_on_line(const ParametricFamily& fam, double t)
{
    for (int it = 0; it < 8; ++it) {
        const LinePoint p = line_point(fam, t, 0.0);
        if (p.z_t == 0.0) break;
        const double d = p.z / p.z_t;
        t -= d;
        if (std::abs(d) <= 1e-15 * std::max(1.0, t)) break;
    }
    return Complex(0.5, t);
}

} // namespace

std::vector<CensusSeed> census_seeds(const ParametricFamily& fam, const CensusOptions& opts)
{
    if (!(opts.H > opts.t_min) || opts.H > 500.0)
        throw Error(ErrorCode::InvalidArgument, "census height must satisfy t_min < H <= 500");
    ScanOptions so;
    so.refine.step_tol = opts.tol;
    so.threads = opts.threads;
    so.strips = 8;  // fixed, so seeds do not depend on the thread count
    const Rect rect{opts.sigma_lo, opts.sigma_hi, opts.t_min, opts.H + opts.margin};
    const auto zeros = scan_zeros(family_target(fam, 0.0, Which::F), rect, so);
    std::vector<CensusSeed> seeds;
    for (const auto& z : zeros) {
        for (int m = 0; m < z.multiplicity; ++m) {
            CensusSeed s;
            s.rho = std::abs(z.rho.real() - 0.5) <= 1e-10 ? polish_on_line(fam, z.rho.imag()) : z.rho;
            s.counted = s.rho.imag() > opts.t_min && s.rho.imag() <= opts.H;
            seeds.push_back(s);
        }
    }
    std::stable_sort(seeds.begin(), seeds.end(), [](const CensusSeed& a, const CensusSeed& b) {
        return std::make_pair(a.rho.imag(), a.rho.real()) < std::make_pair(b.rho.imag(), b.rho.real());
    });
    return seeds;
}

CensusResult census(const ParametricFamily& fam, const CensusOptions& opts,
                    const std::map<std::size_t, Trajectory>* done,
                    const std::function<void(std::size_t, const Trajectory&)>& on_trace)
{
    auto seeds = census_seeds(fam, opts);
    const StepControl sc = with_checkpoints(opts);
    std::vector<Trajectory> trs(seeds.size());
    std::mutex mu;
    parallel_for(seeds.size(), opts.threads, [&](std::size_t i) {
        if (done) {
            const auto it = done->find(i);
            if (it != done->end()) {
                trs[i] = it->second;
                return;
            }
        }
        trs[i] = trace_seed(fam, seeds[i], sc);
        if (on_trace) {
            std::lock_guard<std::mutex> lock(mu);
            on_trace(i, trs[i]);
        }
    });
    return summarize_census(fam, opts, std::move(seeds), std::move(trs));
}

CensusResult summarize_census(const ParametricFamily& fam, const CensusOptions& opts, std::vector<CensusSeed> seeds,
                              std::vector<Trajectory> trajectories)
{
    if (seeds.size() != trajectories.size()) throw Error(ErrorCode::InvalidArgument, "one trajectory per seed");
    CensusResult res;
    res.H = opts.H;
    res.seeds = std::move(seeds);
    res.trajectories = std::move(trajectories);
    const auto& trs = res.trajectories;
    const auto in_region = [&](Complex z, double top) {
        return z.imag() > opts.t_min && z.imag() <= top && z.real() > opts.sigma_lo && z.real() < opts.sigma_hi;
    };

    for (std::size_t i = 0; i < trs.size(); ++i) {
        const Trajectory& tr = trs[i];
        const bool finished = tr.status != TrajectoryStatus::Incomplete;
        if (res.seeds[i].counted) {
            ++res.total;
            if (!finished)
                ++res.incomplete;
            else if (tr.status == TrajectoryStatus::StaysOnLine)
                ++res.stays;
            else
                ++res.leaves;
            if (finished && tr.samples.back().rho.imag() > opts.H) ++res.exits_top;
        } else if (finished && in_region(tr.samples.back().rho, opts.H)) {
            ++res.enters_top;
        }
    }

    // Shared collisions are found once per member; keep one copy.
    std::set<std::tuple<long long, long long, long long>> seen;
    for (const auto& tr : trs) {
        for (const auto& ev : tr.events) {
            const auto key = std::make_tuple(std::llround(ev.tau0 * 1e6), std::llround(ev.rho0.real() * 1e6),
                                             std::llround(ev.rho0.imag() * 1e6));
            if (!seen.insert(key).second) continue;
            if (std::abs(ev.rho0.imag()) < 1e-6)
                res.axis_events.push_back(ev);
            else if (ev.rho0.imag() > opts.t_min && ev.rho0.imag() <= opts.H)
                res.events.push_back(ev);
        }
    }
    const auto by_tau = [](const DoubleZeroEvent& a, const DoubleZeroEvent& b) {
        return std::make_pair(a.tau0, a.rho0.imag()) < std::make_pair(b.tau0, b.rho0.imag());
    };
    std::sort(res.events.begin(), res.events.end(), by_tau);
    std::sort(res.axis_events.begin(), res.axis_events.end(), by_tau);

    for (double tau : opts.conservation_taus) {
        std::vector<Complex> pos;
        bool missing = false;
        for (const auto& tr : trs) {
            const auto p = position_at(tr, tau);
            if (p)
                pos.push_back(*p);
            else
                missing = true;
        }
        ConservationCheck c;
        c.tau = tau;
        // Move the top edge clear of any zero sitting on it.
        c.top = opts.H;
        for (int guard = 0; guard < 8; ++guard) {
            const bool clash = std::any_of(pos.begin(), pos.end(), [&](Complex z) {
                return std::abs(z.imag() - c.top) < 1e-6 && z.real() > opts.sigma_lo && z.real() < opts.sigma_hi;
            });
            if (!clash) break;
            c.top += 1e-4;
        }
        for (Complex z : pos)
            if (in_region(z, c.top)) ++c.traced;
        c.winding = winding_count(family_target(fam, tau, Which::F),
                                  Rect{opts.sigma_lo, opts.sigma_hi, opts.t_min, c.top}.contour());
        if (missing) c.traced = -1;
        res.conservation.push_back(c);

        // Mirror partner of every off-line zero in the region.
        for (Complex z : pos) {
            if (!in_region(z, opts.H) || std::abs(z.real() - 0.5) < 1e-9) continue;
            const Complex m = 1.0 - std::conj(z);
            double best = 1e300;
            for (Complex w : pos) best = std::min(best, std::abs(w - m));
            res.mirror_error = std::max(res.mirror_error, best);
        }
    }
    res.mirror_ok = res.mirror_error <= 1e-8;

    std::vector<Complex> finals;
    for (const auto& tr : trs)
        if (tr.status != TrajectoryStatus::Incomplete && !tr.absorbed_by_pole) finals.push_back(tr.samples.back().rho);
    std::sort(finals.begin(), finals.end(), [](Complex a, Complex b) {
        return std::make_pair(a.imag(), a.real()) < std::make_pair(b.imag(), b.real());
    });
    for (std::size_t i = 1; i < finals.size(); ++i)
        if (std::abs(finals[i] - finals[i - 1]) < 1e-8) res.distinct_ok = false;
    return res;
}

} // namespace zlab
