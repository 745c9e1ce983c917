#include <algorithm>
#include <cctype>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zlab/commands.hpp"

using namespace zlab;

namespace {

std::vector<double> parse_numbers(const std::string& text, std::size_t n, const std::string& what)
{
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, what + ": cannot parse '" + item + "'");
        }
    }
    if (v.size() != n) throw Error(ErrorCode::InvalidArgument, what + ": expected " + std::to_string(n) + " comma-separated numbers");
    return v;
}

Complex parse_complex(const std::string& text, const std::string& what)
{
    const auto v = parse_numbers(text, 2, what);
    return {v[0], v[1]};
}

double parse_double(const std::string& text, const std::string& what) { return parse_numbers(text, 1, what)[0]; }

int parse_int(const std::string& text, const std::string& what)
{
    const double v = parse_double(text, what);
    if (v != static_cast<int>(v)) throw Error(ErrorCode::InvalidArgument, what + " must be an integer");
    return static_cast<int>(v);
}

std::string env_name(const std::string& flag)
{
    std::string e = "ZLAB_";
    for (char ch : flag) e += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return e;
}

// Raw option text by flag name; empty when not given.
struct Flags {
    std::map<std::string, std::string> value;

    CLI::Option* add(CLI::App* app, const std::string& name, const std::string& help)
    {
        return app->add_option("--" + name, value[name], help)->envname(env_name(name));
    }
    bool has(const std::string& name) const
    {
        const auto it = value.find(name);
        return it != value.end() && !it->second.empty();
    }
    const std::string& operator[](const std::string& name) const { return value.at(name); }
};

RunConfig build_config(const std::string& command, const Flags& f)
{
    RunConfig c;
    if (f.has("config")) c = run_config_from_json(Json::parse(read_file(f["config"])));
    else if (command == "trace" || command == "census") c.function = "family";
    c.command = command;
    if (f.has("f")) c.function = f["f"];
    if (f.has("tau")) c.tau = parse_double(f["tau"], "--tau");
    if (f.has("tol")) c.tolerances["tol"] = parse_double(f["tol"], "--tol");
    if (f.has("series-tol")) c.tolerances["series"] = parse_double(f["series-tol"], "--series-tol");
    if (f.has("s")) c.s = parse_complex(f["s"], "--s");
    if (f.has("deriv")) c.deriv = parse_int(f["deriv"], "--deriv");
    if (f.has("rect")) {
        const auto v = parse_numbers(f["rect"], 4, "--rect");
        c.rect = Rect{v[0], v[1], v[2], v[3]};
    }
    if (f.has("which")) c.which = f["which"];
    if (f.has("strips")) c.strips = parse_int(f["strips"], "--strips");
    if (f.has("T")) c.T = parse_double(f["T"], "--T");
    if (f.has("C")) c.C = parse_double(f["C"], "--C");
    if (f.has("shells")) c.shells = parse_int(f["shells"], "--shells");
    if (f.has("delta")) c.delta = parse_double(f["delta"], "--delta");
    if (f.has("s0")) c.s0 = parse_complex(f["s0"], "--s0");
    if (f.has("r")) c.r = parse_double(f["r"], "--r");
    if (f.has("rho")) c.rho = parse_complex(f["rho"], "--rho");
    if (f.has("tau-start")) c.tau_start = parse_double(f["tau-start"], "--tau-start");
    if (f.has("tau-end")) c.tau_end = parse_double(f["tau-end"], "--tau-end");
    if (f.has("H")) c.H = parse_double(f["H"], "--H");
    if (f.has("dtau-max")) c.step.dtau_max = parse_double(f["dtau-max"], "--dtau-max");
    if (f.has("dtau-min")) c.step.dtau_min = parse_double(f["dtau-min"], "--dtau-min");
    if (f.has("dtau-init")) c.step.dtau_init = parse_double(f["dtau-init"], "--dtau-init");
    if (f.has("step-tol")) c.step.tol = parse_double(f["step-tol"], "--step-tol");
    if (f.has("format")) c.format = f["format"];
    if (f.has("out")) c.out = f["out"];
    if (f.has("checkpoint")) c.checkpoint = f["checkpoint"];
    if (f.has("threads")) c.threads = parse_int(f["threads"], "--threads");
    validate(c);
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Zeros of L-functions, Speiser-type comparisons and zero trajectories"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    f.add(&app, "threads", "worker threads (results do not depend on it)");
    f.add(&app, "tol", "root refinement tolerance, relative");
    f.add(&app, "series-tol", "series truncation tolerance");
    f.add(&app, "out", "output file; a summary line goes to stdout");
    f.add(&app, "format", "json or csv");
    f.add(&app, "checkpoint", "checkpoint file for zeros and census");
    f.add(&app, "config", "RunConfig JSON; flags override its fields");
    f.add(&app, "resume", "continue from this checkpoint");
    f.add(&app, "stop-after", "")->group("");
    f.add(&app, "checkpoint-interval", "")->group("");

    struct Sub {
        const char* name;
        const char* help;
        std::vector<std::pair<const char*, const char*>> flags;
    };
    const std::vector<Sub> subs{
        {"eval", "value or derivative at one point",
         {{"f", "zeta, lpsi5, factor_zeta or family"}, {"tau", "family parameter"}, {"s", "point re,im"}, {"deriv", "0, 1 or 2"}}},
        {"zeros", "all zeros in a rectangle",
         {{"f", "function"}, {"tau", "family parameter"}, {"rect", "x0,x1,y0,y1"}, {"which", "F or Fprime"}, {"strips", "work units"}}},
        {"count", "winding count on a rectangle",
         {{"f", "function"}, {"tau", "family parameter"}, {"rect", "x0,x1,y0,y1"}, {"which", "F or Fprime"}}},
        {"speiser", "zeros of F and F' left of the line in a half-disk",
         {{"f", "function"}, {"tau", "family parameter"}, {"T", "height"}, {"C", "surrogate radius constant"},
          {"shells", "annulus shells (default: from the strip count)"}, {"delta", "shell ratio exponent"},
          {"s0", "direct comparison centre re,im"}, {"r", "direct comparison radius"}}},
        {"trace", "continue one zero of the family in τ",
         {{"f", "family"}, {"rho", "start re,im"}, {"tau-start", "start τ"}, {"tau-end", "end τ"}, {"which", "F or Fprime"},
          {"dtau-max", "largest τ step"}, {"dtau-min", "smallest τ step"}, {"dtau-init", "first τ step"}, {"step-tol", "corrector tolerance"}}},
        {"census", "trace every zero of the family up to height H from τ = 0 to 1",
         {{"f", "family"}, {"H", "height"}, {"dtau-max", "largest τ step"}, {"dtau-min", "smallest τ step"},
          {"dtau-init", "first τ step"}, {"step-tol", "corrector tolerance"}}},
    };
    std::map<std::string, Flags> sub_flags;
    std::map<std::string, CLI::App*> sub_apps;
    for (const auto& s : subs) {
        CLI::App* sa = app.add_subcommand(s.name, s.help);
        for (const auto& [name, help] : s.flags) sub_flags[s.name].add(sa, name, help);
        sub_apps[s.name] = sa;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        std::string command;
        for (const auto& [name, sa] : sub_apps)
            if (sa->parsed()) command = name;
        Flags all = f;
        for (const auto& [k, v] : sub_flags[command].value) all.value[k] = v;
        const RunConfig cfg = build_config(command, all);
        RunControl ctl;
        if (f.has("resume")) ctl.resume = f["resume"];
        if (f.has("stop-after")) ctl.stop_after = parse_int(f["stop-after"], "--stop-after");
        if (f.has("checkpoint-interval")) ctl.checkpoint_interval = parse_double(f["checkpoint-interval"], "--checkpoint-interval");
        run_command(cfg, ctl, std::cout);
        return 0;
    } catch (const Error& e) {
        std::cout.flush();
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: bad JSON: " << e.what() << '\n';
        return 2;
    }
}
