#include "zlab/commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace zlab {

FunctionSpec spec_from_config(const RunConfig& c)
{
    switch (function_kind_from_string(c.function)) {
    case FunctionKind::RiemannZeta: return FunctionSpec::riemann_zeta();
    case FunctionKind::LPsi5: return FunctionSpec::l_psi5();
    case FunctionKind::FactorZeta: return FunctionSpec::factor_zeta();
    case FunctionKind::FamilyF: return FunctionSpec::family(c.tau);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown function");
}

namespace {

using Clock = std::chrono::steady_clock;

// Series truncation tolerance, separate from the root-finding "tol".
EvalOptions eval_options(const RunConfig& c)
{
    EvalOptions eo;
    const auto it = c.tolerances.find("series");
    if (it != c.tolerances.end()) eo.series.tol = it->second;
    return eo;
}

// Completed work units, persisted to the checkpoint file as they arrive.
class UnitLog {
public:
    UnitLog(const RunConfig& c, const RunControl& ctl) : ctl_(ctl), path_(c.checkpoint.empty() ? ctl.resume : c.checkpoint)
    {
        state_.config_hash = config_hash(c);
        char id[32];
        std::snprintf(id, sizeof id, "%s-%016llx", c.command.c_str(), static_cast<unsigned long long>(state_.config_hash));
        state_.run_id = id;
        if (!ctl.resume.empty()) {
            const Checkpoint prev = load_checkpoint(ctl.resume);
            if (prev.config_hash != state_.config_hash)
                throw Error(ErrorCode::InvalidArgument, "checkpoint " + ctl.resume + " belongs to a different config");
            state_.units = prev.units;
        }
        resumed_ = state_.units;
    }

    const std::map<std::size_t, Json>& resumed() const { return resumed_; }

    void add(std::size_t id, Json result)
    {
        std::lock_guard<std::mutex> lock(mu_);
        state_.units[id] = std::move(result);
        ++added_;
        if (ctl_.stop_after >= 0 && added_ >= ctl_.stop_after) {
            flush_locked();
            std::fflush(nullptr);
            std::_Exit(kInterruptedExit);
        }
        if (std::chrono::duration<double>(Clock::now() - last_).count() >= ctl_.checkpoint_interval) flush_locked();
    }

    void finish()
    {
        std::lock_guard<std::mutex> lock(mu_);
        flush_locked();
    }

private:
    void flush_locked()
    {
        last_ = Clock::now();
        if (!path_.empty()) write_file_atomic(path_, to_json(state_).dump() + '\n');
    }

    RunControl ctl_;
    std::string path_;
    Checkpoint state_;
    std::map<std::size_t, Json> resumed_;
    long added_ = 0;
    Clock::time_point last_ = Clock::now();
    std::mutex mu_;
};

std::string stem(const std::string& path)
{
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

void emit(const RunConfig& c, std::ostream& out, const std::string& data, const std::string& summary)
{
    if (c.out.empty()) {
        out << data;
        if (!data.empty() && data.back() != '\n') out << '\n';
    } else {
        write_file_atomic(c.out, data);
        out << summary << '\n';
    }
}

Rect require_rect(const RunConfig& c, const FunctionSpec& spec)
{
    if (!c.rect) throw Error(ErrorCode::InvalidArgument, "--rect is required");
    const Rect& r = *c.rect;
    if (!(r.x0 < r.x1 && r.y0 < r.y1)) throw Error(ErrorCode::InvalidArgument, "rect must have x0 < x1 and y0 < y1");
    if (spec.pole_order > 0 && r.contains(Complex(1.0, 0.0)))
        throw Error(ErrorCode::Pole, "rect contains the pole at s = 1");
    return r;
}

void cmd_eval(const RunConfig& c, std::ostream& out)
{
    const FunctionSpec spec = spec_from_config(c);
    const EvalResult r = eval(spec, c.s, c.deriv, eval_options(c));
    std::string data;
    if (c.format == "csv") {
        data = "re,im,est_abs_error\n" + format_double(r.value.real()) + ',' + format_double(r.value.imag()) + ',' +
               format_double(r.est_abs_error) + '\n';
    } else {
        data = Json{{"function", c.function},
                    {"tau", c.tau},
                    {"s", to_json(c.s)},
                    {"deriv", c.deriv},
                    {"value", to_json(r.value)},
                    {"est_abs_error", r.est_abs_error}}
                   .dump() +
               '\n';
    }
    emit(c, out, data, "eval: |value| = " + format_double(std::abs(r.value)));
}

void cmd_count(const RunConfig& c, std::ostream& out)
{
    const FunctionSpec spec = spec_from_config(c);
    const Rect rect = require_rect(c, spec);
    const int n = winding_count(make_target(spec, which_from_string(c.which)), rect.contour());
    if (c.out.empty()) {
        out << n << '\n';
        return;
    }
    const std::string data = c.format == "csv"
                                 ? "count\n" + std::to_string(n) + '\n'
                                 : Json{{"function", c.function}, {"rect", Json::array({rect.x0, rect.x1, rect.y0, rect.y1})}, {"count", n}}.dump() + '\n';
    write_file_atomic(c.out, data);
    out << n << '\n';
}

void cmd_zeros(const RunConfig& c, const RunControl& ctl, std::ostream& out)
{
    const FunctionSpec spec = spec_from_config(c);
    const Rect rect = require_rect(c, spec);
    ScanOptions so;
    so.refine.step_tol = c.tol();
    so.strips = c.strips;
    so.threads = c.threads;
    UnitLog log(c, ctl);
    std::map<int, std::vector<ZeroRecord>> done;
    for (const auto& [id, v] : log.resumed()) done[static_cast<int>(id)] = zero_records_from_json(v);
    const auto zeros = scan_zeros(make_target(spec, which_from_string(c.which)), rect, so, &done,
                                  [&](int id, const std::vector<ZeroRecord>& z) {
                                      log.add(static_cast<std::size_t>(id), to_json(z));
                                  });
    log.finish();
    const std::string data = c.format == "csv" ? zeros_csv(zeros) : to_json(zeros).dump() + '\n';
    emit(c, out, data, "zeros: " + std::to_string(zeros.size()));
}

void cmd_speiser(const RunConfig& c, std::ostream& out)
{
    const FunctionSpec spec = spec_from_config(c);
    SpeiserReport rep;
    if (c.s0) {
        rep = speiser_compare(spec, *c.s0, c.r);
    } else {
        if (!(c.T > 0.0)) throw Error(ErrorCode::InvalidArgument, "--T is required");
        const int shells = c.shells > 0 ? c.shells : pipeline_shell_count(spec, c.T, c.C, c.delta);
        rep = speiser_pipeline(spec, c.T, c.C, shells, c.delta);
    }
    const std::string data = c.format == "csv" ? speiser_csv_header() + speiser_csv_row(rep) : to_json(rep).dump() + '\n';
    emit(c, out, data,
         "speiser: n_F = " + std::to_string(rep.n_F) + ", n_Fprime = " + std::to_string(rep.n_Fprime) +
             (rep.equal ? ", equal" : ", NOT equal"));
}

std::shared_ptr<const ParametricFamily> require_family(const RunConfig& c)
{
    if (function_kind_from_string(c.function) != FunctionKind::FamilyF)
        throw Error(ErrorCode::InvalidArgument, "trajectories need --f family");
    return family_f(eval_options(c));
}

void cmd_trace(const RunConfig& c, std::ostream& out)
{
    const auto fam = require_family(c);
    const Trajectory tr = trace(*fam, which_from_string(c.which), c.rho, c.tau_start, c.tau_end, c.step);
    emit(c, out, trajectory_jsonl(c.rho, tr), std::string("trace: ") + to_string(tr.status));
    if (tr.status == TrajectoryStatus::Incomplete)
        throw Error(ErrorCode::NonConvergence, "trajectory incomplete: " + tr.reason);
}

void cmd_census(const RunConfig& c, const RunControl& ctl, std::ostream& out)
{
    const auto fam = require_family(c);
    CensusOptions opts;
    opts.H = c.H;
    opts.tol = c.tol();
    opts.step = c.step;
    opts.threads = c.threads;
    UnitLog log(c, ctl);
    std::map<std::size_t, Trajectory> done;
    for (const auto& [id, v] : log.resumed()) done[id] = trajectory_from_json(v);
    const CensusResult res = census(*fam, opts, &done, [&](std::size_t i, const Trajectory& tr) { log.add(i, to_json(tr)); });
    log.finish();

    const std::string summary_line = "census H=" + format_double(res.H) + " total=" + std::to_string(res.total) +
                                     " stays=" + std::to_string(res.stays) + " leaves=" + std::to_string(res.leaves) +
                                     " incomplete=" + std::to_string(res.incomplete) +
                                     " events=" + std::to_string(res.events.size());
    const std::string data =
        c.format == "csv" ? census_summary_csv(res) : census_summary_json(res).dump(2) + '\n';
    if (!c.out.empty()) {
        std::string lines;
        for (std::size_t i = 0; i < res.trajectories.size(); ++i)
            lines += trajectory_jsonl(res.seeds[i].rho, res.trajectories[i]);
        const std::string base = stem(c.out);
        write_file_atomic(base + ".trajectories.jsonl", lines);
        write_file_atomic(base + ".plot.csv", census_plot_csv(res));
    }
    emit(c, out, data, summary_line);
    if (!res.accepted()) {
        std::string why;
        for (std::size_t i = 0; i < res.trajectories.size(); ++i)
            if (res.trajectories[i].status == TrajectoryStatus::Incomplete)
                why += "\n  seed " + std::to_string(i) + " at t = " + format_double(res.seeds[i].rho.imag()) + ": " +
                       res.trajectories[i].reason;
        if (!res.conservation_ok()) why += "\n  zero conservation failed";
        if (!res.mirror_ok) why += "\n  mirror symmetry failed";
        if (!res.distinct_ok) why += "\n  final positions coincide";
        throw Error(ErrorCode::NonConvergence, "census rejected:" + why);
    }
}

} // namespace

void run_command(const RunConfig& c, const RunControl& ctl, std::ostream& out)
{
    validate(c);
    if (c.command == "eval")
        cmd_eval(c, out);
    else if (c.command == "count")
        cmd_count(c, out);
    else if (c.command == "zeros")
        cmd_zeros(c, ctl, out);
    else if (c.command == "speiser")
        cmd_speiser(c, out);
    else if (c.command == "trace")
        cmd_trace(c, out);
    else
        cmd_census(c, ctl, out);
}

} // namespace zlab
