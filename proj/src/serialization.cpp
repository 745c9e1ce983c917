#include "zlab/serialization.hpp"

#include <charconv>
#include <sstream>

namespace zlab {

std::string format_double(double x)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j)
{
    if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidArgument, "complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

namespace {

template <class F>
auto parse_field(const Json& j, const char* key, F&& f)
{
    if (!j.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("missing field ") + key);
    try {
        return f(j.at(key));
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("bad field ") + key + ": " + e.what());
    }
}

double num(const Json& j, const char* key)
{
    return parse_field(j, key, [](const Json& v) { return v.get<double>(); });
}

} // namespace

Json to_json(const FunctionSpec& spec)
{
    Json gammas = Json::array();
    for (const auto& g : spec.fe.gamma_factors) gammas.push_back({{"lambda", g.lambda}, {"mu", to_json(g.mu)}});
    return {
        {"kind", to_string(spec.kind)},
        {"tau", spec.tau},
        {"fe", {{"Q", spec.fe.Q}, {"gamma_factors", gammas}, {"omega", to_json(spec.fe.omega)}, {"degree", spec.fe.degree}}},
        {"pole_order", spec.pole_order},
        {"growth", {{"sigma1", spec.growth.sigma1}, {"c", spec.growth.c}, {"B", spec.growth.B}}},
        {"density", {{"epsilon", spec.density.epsilon}, {"delta", spec.density.delta}, {"T_bar", spec.density.T_bar}}},
        {"zero_free_sigma", spec.zero_free_sigma},
    };
}

FunctionSpec function_spec_from_json(const Json& j)
{
    FunctionSpec s;
    s.kind = function_kind_from_string(parse_field(j, "kind", [](const Json& v) { return v.get<std::string>(); }));
    s.tau = num(j, "tau");
    const Json& fe = parse_field(j, "fe", [](const Json& v) -> const Json& { return v; });
    s.fe.Q = num(fe, "Q");
    s.fe.gamma_factors.clear();
    for (const auto& g : parse_field(fe, "gamma_factors", [](const Json& v) -> const Json& { return v; }))
        s.fe.gamma_factors.push_back({num(g, "lambda"), parse_field(g, "mu", complex_from_json)});
    s.fe.omega = parse_field(fe, "omega", complex_from_json);
    s.fe.degree = num(fe, "degree");
    s.pole_order = parse_field(j, "pole_order", [](const Json& v) { return v.get<int>(); });
    const Json& g = parse_field(j, "growth", [](const Json& v) -> const Json& { return v; });
    s.growth = {num(g, "sigma1"), num(g, "c"), num(g, "B")};
    const Json& d = parse_field(j, "density", [](const Json& v) -> const Json& { return v; });
    s.density = {num(d, "epsilon"), num(d, "delta"), num(d, "T_bar")};
    s.zero_free_sigma = num(j, "zero_free_sigma");
    validate(s);
    return s;
}

Json to_json(const ZeroRecord& z)
{
    return {{"rho", to_json(z.rho)}, {"multiplicity", z.multiplicity}, {"residual", z.residual}, {"method", to_string(z.method)}};
}

ZeroRecord zero_record_from_json(const Json& j)
{
    ZeroRecord z;
    z.rho = parse_field(j, "rho", complex_from_json);
    z.multiplicity = parse_field(j, "multiplicity", [](const Json& v) { return v.get<int>(); });
    z.residual = num(j, "residual");
    z.method = zero_method_from_string(parse_field(j, "method", [](const Json& v) { return v.get<std::string>(); }));
    return z;
}

Json to_json(const std::vector<ZeroRecord>& zeros)
{
    Json a = Json::array();
    for (const auto& z : zeros) a.push_back(to_json(z));
    return a;
}

std::vector<ZeroRecord> zero_records_from_json(const Json& j)
{
    std::vector<ZeroRecord> out;
    for (const auto& z : j) out.push_back(zero_record_from_json(z));
    return out;
}

std::string zeros_csv(const std::vector<ZeroRecord>& zeros)
{
    std::ostringstream os;
    os << "beta,gamma,multiplicity,residual,method\n";
    for (const auto& z : zeros)
        os << format_double(z.rho.real()) << ',' << format_double(z.rho.imag()) << ',' << z.multiplicity << ','
           << format_double(z.residual) << ',' << to_string(z.method) << '\n';
    return os.str();
}

Json to_json(const AnnulusResult& a)
{
    return {{"j", a.j},
            {"r_inner", a.r_inner},
            {"r_outer", a.r_outer},
            {"r_final", a.r_final},
            {"zero_counts_per_shell", a.zero_counts_per_shell},
            {"radii", a.radii}};
}

Json to_json(const SpeiserReport& r)
{
    Json j = {{"s0", to_json(r.s0)},          {"r", r.r},
              {"n_F", r.n_F},                 {"n_Fprime", r.n_Fprime},
              {"equal", r.equal},             {"line_zeros_bypassed", r.line_zeros_bypassed},
              {"indent_radius", r.indent_radius}, {"taylor_model", r.taylor_model}};
    j["annulus"] = r.annulus ? to_json(*r.annulus) : Json(nullptr);
    return j;
}

std::string speiser_csv_header() { return "T,r,n_F,n_Fprime,equal\n"; }

std::string speiser_csv_row(const SpeiserReport& r)
{
    return format_double(r.s0.imag()) + ',' + format_double(r.r) + ',' + std::to_string(r.n_F) + ',' +
           std::to_string(r.n_Fprime) + ',' + (r.equal ? "true" : "false") + '\n';
}

Json to_json(const DoubleZeroEvent& ev)
{
    return {{"tau0", ev.tau0}, {"rho0", to_json(ev.rho0)}, {"f_second_deriv", to_json(ev.f_second_deriv)}, {"kind", to_string(ev.kind)}};
}

DoubleZeroEvent double_zero_event_from_json(const Json& j)
{
    DoubleZeroEvent ev;
    ev.tau0 = num(j, "tau0");
    ev.rho0 = parse_field(j, "rho0", complex_from_json);
    ev.f_second_deriv = parse_field(j, "f_second_deriv", complex_from_json);
    const auto kind = parse_field(j, "kind", [](const Json& v) { return v.get<std::string>(); });
    if (kind != "leave" && kind != "land") throw Error(ErrorCode::InvalidArgument, "unknown event kind " + kind);
    ev.kind = kind == "leave" ? DoubleZeroEvent::Kind::Leave : DoubleZeroEvent::Kind::Land;
    return ev;
}

Json to_json(const Trajectory& tr)
{
    Json samples = Json::array();
    for (const auto& s : tr.samples) samples.push_back(Json::array({s.tau, s.rho.real(), s.rho.imag()}));
    Json cls = {{"status", to_string(tr.status)}};
    if (tr.status == TrajectoryStatus::LeavesAt) {
        cls["tau_star"] = tr.tau_star;
        cls["rho_star"] = to_json(tr.rho_star);
    }
    if (tr.status == TrajectoryStatus::Incomplete) cls["reason"] = tr.reason;
    Json events = Json::array();
    for (const auto& ev : tr.events) events.push_back(to_json(ev));
    return {{"target", to_string(tr.target)},
            {"classification", cls},
            {"absorbed_by_pole", tr.absorbed_by_pole},
            {"events", events},
            {"samples", samples}};
}

Trajectory trajectory_from_json(const Json& j)
{
    Trajectory tr;
    tr.target = which_from_string(parse_field(j, "target", [](const Json& v) { return v.get<std::string>(); }));
    const Json& cls = parse_field(j, "classification", [](const Json& v) -> const Json& { return v; });
    const auto status = parse_field(cls, "status", [](const Json& v) { return v.get<std::string>(); });
    if (status == "stays_on_line") {
        tr.status = TrajectoryStatus::StaysOnLine;
    } else if (status == "leaves_at") {
        tr.status = TrajectoryStatus::LeavesAt;
        tr.tau_star = num(cls, "tau_star");
        tr.rho_star = parse_field(cls, "rho_star", complex_from_json);
    } else if (status == "incomplete") {
        tr.status = TrajectoryStatus::Incomplete;
        tr.reason = parse_field(cls, "reason", [](const Json& v) { return v.get<std::string>(); });
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown trajectory status " + status);
    }
    tr.absorbed_by_pole = parse_field(j, "absorbed_by_pole", [](const Json& v) { return v.get<bool>(); });
    for (const auto& ev : parse_field(j, "events", [](const Json& v) -> const Json& { return v; }))
        tr.events.push_back(double_zero_event_from_json(ev));
    for (const auto& s : parse_field(j, "samples", [](const Json& v) -> const Json& { return v; }))
        tr.samples.push_back({s.at(0).get<double>(), Complex(s.at(1).get<double>(), s.at(2).get<double>())});
    return tr;
}

std::string trajectory_jsonl(Complex seed, const Trajectory& tr)
{
    Json j = {{"seed", to_json(seed)}};
    const Json body = to_json(tr);
    for (const auto& [k, v] : body.items()) j[k] = v;
    return j.dump() + '\n';
}

Json to_json(const StepControl& c)
{
    return {{"dtau_min", c.dtau_min},
            {"dtau_max", c.dtau_max},
            {"dtau_init", c.dtau_init},
            {"max_corrector_iter", c.max_corrector_iter},
            {"max_slope_change", c.max_slope_change},
            {"grow_after", c.grow_after},
            {"fs_floor", c.fs_floor},
            {"tol", c.tol},
            {"step_cap", c.step_cap},
            {"max_steps", c.max_steps},
            {"checkpoints", c.checkpoints}};
}

StepControl step_control_from_json(const Json& j)
{
    StepControl c;
    c.dtau_min = num(j, "dtau_min");
    c.dtau_max = num(j, "dtau_max");
    c.dtau_init = num(j, "dtau_init");
    c.max_corrector_iter = parse_field(j, "max_corrector_iter", [](const Json& v) { return v.get<int>(); });
    c.max_slope_change = num(j, "max_slope_change");
    c.grow_after = parse_field(j, "grow_after", [](const Json& v) { return v.get<int>(); });
    c.fs_floor = num(j, "fs_floor");
    c.tol = num(j, "tol");
    c.step_cap = num(j, "step_cap");
    c.max_steps = parse_field(j, "max_steps", [](const Json& v) { return v.get<long>(); });
    c.checkpoints = parse_field(j, "checkpoints", [](const Json& v) { return v.get<std::vector<double>>(); });
    return c;
}

namespace {

Json to_json(const LocalQuadraticModel& m)
{
    return {{"tau", m.tau},           {"a1", zlab::to_json(m.a1)}, {"a0", zlab::to_json(m.a0)},
            {"s1", zlab::to_json(m.s1)}, {"s2", zlab::to_json(m.s2)}, {"discriminant", zlab::to_json(m.discriminant)}};
}

} // namespace

Json to_json(const Theorem3Result& r)
{
    return {{"theta", r.theta},
            {"statement1", r.statement1},
            {"statement2", r.statement2},
            {"statement1_mirror", r.statement1_mirror},
            {"statement2_mirror", r.statement2_mirror},
            {"equivalent", r.equivalent()},
            {"mirror_error", r.mirror_error},
            {"line_error", r.line_error},
            {"before", to_json(r.before)},
            {"after", to_json(r.after)}};
}

Json census_summary_json(const CensusResult& r)
{
    Json events = Json::array(), axis = Json::array(), cons = Json::array();
    for (const auto& ev : r.events) events.push_back(to_json(ev));
    for (const auto& ev : r.axis_events) axis.push_back(to_json(ev));
    for (const auto& c : r.conservation)
        cons.push_back({{"tau", c.tau}, {"traced", c.traced}, {"winding", c.winding}, {"top", c.top}, {"ok", c.ok()}});
    return {{"H", r.H},
            {"total", r.total},
            {"stays", r.stays},
            {"leaves", r.leaves},
            {"incomplete", r.incomplete},
            {"exits_top", r.exits_top},
            {"enters_top", r.enters_top},
            {"events", events},
            {"axis_events", axis},
            {"conservation", cons},
            {"mirror_error", r.mirror_error},
            {"mirror_ok", r.mirror_ok},
            {"distinct_ok", r.distinct_ok},
            {"accepted", r.accepted()}};
}

std::string census_summary_csv(const CensusResult& r)
{
    std::ostringstream os;
    os << "H,total,stays,leaves,incomplete\n"
       << format_double(r.H) << ',' << r.total << ',' << r.stays << ',' << r.leaves << ',' << r.incomplete << '\n'
       << "kind,tau0,beta0,gamma0\n";
    for (const auto& ev : r.events)
        os << to_string(ev.kind) << ',' << format_double(ev.tau0) << ',' << format_double(ev.rho0.real()) << ','
           << format_double(ev.rho0.imag()) << '\n';
    return os.str();
}

std::string census_plot_csv(const CensusResult& r)
{
    std::ostringstream os;
    os << "seed,tau,re,im\n";
    for (std::size_t i = 0; i < r.trajectories.size(); ++i)
        for (const auto& s : r.trajectories[i].samples)
            os << i << ',' << format_double(s.tau) << ',' << format_double(s.rho.real()) << ','
               << format_double(s.rho.imag()) << '\n';
    return os.str();
}

} // namespace zlab
