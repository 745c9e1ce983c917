#pragma once

#include <functional>
#include <map>
#include <vector>

#include "zlab/trajectory.hpp"

namespace zlab {

struct CensusOptions {
    double H = 100.0;
    double t_min = 0.5;          // lower edge, keeps the real axis and the pole outside
    double margin = 10.0;        // auxiliary seeds up to H + margin catch zeros entering from above
    double sigma_lo = -2.0;
    double sigma_hi = 3.0;
    double tol = 1e-12;          // seed refinement
    StepControl step;
    std::vector<double> conservation_taus{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    int threads = 1;

    bool operator==(const CensusOptions&) const = default;
};

struct CensusSeed {
    Complex rho{};
    bool counted = false;        // t_min < Im ρ <= H; otherwise auxiliary
    bool operator==(const CensusSeed&) const = default;
};

/// Traced positions against the winding count of f(·, τ) over the census
/// rectangle.
struct ConservationCheck {
    double tau = 0.0;
    int traced = 0;
    int winding = 0;
    double top = 0.0;            // upper edge used, moved off trajectories sitting on H
    bool ok() const { return traced == winding; }
    bool operator==(const ConservationCheck&) const = default;
};

struct CensusResult {
    double H = 0.0;
    int total = 0;
    int stays = 0;
    int leaves = 0;
    int incomplete = 0;
    int exits_top = 0;           // counted seeds ending above H
    int enters_top = 0;          // auxiliary seeds ending at or below H
    std::vector<CensusSeed> seeds;
    std::vector<Trajectory> trajectories;         // one per seed, same order
    std::vector<DoubleZeroEvent> events;          // collisions with t_min < Im ρ0 <= H
    std::vector<DoubleZeroEvent> axis_events;     // collisions on the real axis
    std::vector<ConservationCheck> conservation;
    double mirror_error = 0.0;   // max |ρ' - (1 - conj ρ)| over off-line checkpoint positions
    bool mirror_ok = true;
    bool distinct_ok = true;     // final positions pairwise distinct

    bool conservation_ok() const;
    bool accepted() const { return incomplete == 0 && conservation_ok() && mirror_ok && distinct_ok; }
};

/// Zeros of f(·, 0) in [σ_lo, σ_hi] × [t_min, H + margin], ordered by height.
std::vector<CensusSeed> census_seeds(const ParametricFamily& fam, const CensusOptions& opts);

/// Traces every seed from τ = 0 to 1.  `done` supplies trajectories from a
/// previous run by seed index; `on_trace` is told about each new one
/// (serialised, so it may write a checkpoint).
CensusResult census(const ParametricFamily& fam, const CensusOptions& opts,
                    const std::map<std::size_t, Trajectory>* done = nullptr,
                    const std::function<void(std::size_t, const Trajectory&)>& on_trace = {});

/// Census from already traced trajectories: counts, events and checks.
CensusResult summarize_census(const ParametricFamily& fam, const CensusOptions& opts, std::vector<CensusSeed> seeds,
                              std::vector<Trajectory> trajectories);

} // namespace zlab
