#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "zlab/serialization.hpp"

namespace zlab {

/// Everything a CLI run depends on.  threads, out and checkpoint do not
/// change the results and are left out of the config hash.
struct RunConfig {
    std::string command = "zeros";       // eval, zeros, count, speiser, trace, census
    std::string function = "zeta";       // zeta, lpsi5, factor_zeta, family
    double tau = 0.0;
    std::map<std::string, double> tolerances{{"tol", 1e-12}};

    Complex s{};                          // eval
    int deriv = 0;
    std::optional<Rect> rect;             // zeros, count
    std::string which = "F";
    int strips = 8;
    double T = 0.0;                       // speiser
    double C = 20.0;
    int shells = 0;                       // 0: chosen from the strip count
    double delta = 0.1;
    std::optional<Complex> s0;            // direct half-disk comparison
    double r = 0.0;
    Complex rho{};                        // trace
    double tau_start = 0.0;
    double tau_end = 1.0;
    double H = 100.0;                     // census
    StepControl step;

    std::string format = "json";
    std::string out;
    std::string checkpoint;
    int threads = 1;

    double tol() const;
    bool operator==(const RunConfig&) const = default;
};

Json to_json(const RunConfig& c);
RunConfig run_config_from_json(const Json& j);
void validate(const RunConfig& c);

std::uint64_t fnv1a(const std::string& bytes);
std::uint64_t config_hash(const RunConfig& c);

/// Completed work units of an interrupted run (trajectory seeds or scan
/// strips), keyed by unit id.
struct Checkpoint {
    std::string run_id;
    std::uint64_t config_hash = 0;
    std::map<std::size_t, Json> units;

    bool operator==(const Checkpoint&) const = default;
};

Json to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(const Json& j);
Checkpoint load_checkpoint(const std::string& path);

/// Writes to a temporary file next to `path`, then renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace zlab
