#include "zlab/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace zlab {

double RunConfig::tol() const
{
    const auto it = tolerances.find("tol");
    return it == tolerances.end() ? 1e-12 : it->second;
}

namespace {

const std::set<std::string> kCommands{"eval", "zeros", "count", "speiser", "trace", "census"};

Json rect_json(const std::optional<Rect>& r)
{
    if (!r) return nullptr;
    return Json::array({r->x0, r->x1, r->y0, r->y1});
}

std::optional<Rect> rect_from_json(const Json& j)
{
    if (j.is_null()) return std::nullopt;
    if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::InvalidArgument, "rect must be [x0, x1, y0, y1]");
    return Rect{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

template <class T>
T get(const Json& j, const char* key)
{
    if (!j.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("config lacks ") + key);
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("config field ") + key + ": " + e.what());
    }
}

Json hashed_fields(const RunConfig& c)
{
    Json j = to_json(c);
    j.erase("threads");
    j.erase("out");
    j.erase("checkpoint");
    return j;
}

std::string hex(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace

Json to_json(const RunConfig& c)
{
    Json tol = Json::object();
    for (const auto& [k, v] : c.tolerances) tol[k] = v;
    return {{"command", c.command},
            {"function", c.function},
            {"tau", c.tau},
            {"tolerances", tol},
            {"s", to_json(c.s)},
            {"deriv", c.deriv},
            {"rect", rect_json(c.rect)},
            {"which", c.which},
            {"strips", c.strips},
            {"T", c.T},
            {"C", c.C},
            {"shells", c.shells},
            {"delta", c.delta},
            {"s0", c.s0 ? to_json(*c.s0) : Json(nullptr)},
            {"r", c.r},
            {"rho", to_json(c.rho)},
            {"tau_start", c.tau_start},
            {"tau_end", c.tau_end},
            {"H", c.H},
            {"step", to_json(c.step)},
            {"format", c.format},
            {"out", c.out},
            {"checkpoint", c.checkpoint},
            {"threads", c.threads}};
}

RunConfig run_config_from_json(const Json& j)
{
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
    RunConfig c;
    c.command = get<std::string>(j, "command");
    c.function = get<std::string>(j, "function");
    c.tau = get<double>(j, "tau");
    c.tolerances = get<std::map<std::string, double>>(j, "tolerances");
    c.s = complex_from_json(j.at("s"));
    c.deriv = get<int>(j, "deriv");
    c.rect = rect_from_json(j.at("rect"));
    c.which = get<std::string>(j, "which");
    c.strips = get<int>(j, "strips");
    c.T = get<double>(j, "T");
    c.C = get<double>(j, "C");
    c.shells = get<int>(j, "shells");
    c.delta = get<double>(j, "delta");
    c.s0 = j.at("s0").is_null() ? std::nullopt : std::optional<Complex>(complex_from_json(j.at("s0")));
    c.r = get<double>(j, "r");
    c.rho = complex_from_json(j.at("rho"));
    c.tau_start = get<double>(j, "tau_start");
    c.tau_end = get<double>(j, "tau_end");
    c.H = get<double>(j, "H");
    c.step = step_control_from_json(j.at("step"));
    c.format = get<std::string>(j, "format");
    c.out = get<std::string>(j, "out");
    c.checkpoint = get<std::string>(j, "checkpoint");
    c.threads = get<int>(j, "threads");
    validate(c);
    return c;
}

void validate(const RunConfig& c)
{
    if (!kCommands.count(c.command)) throw Error(ErrorCode::InvalidArgument, "unknown command " + c.command);
    function_kind_from_string(c.function);
    which_from_string(c.which);
    if (c.format != "json" && c.format != "csv") throw Error(ErrorCode::InvalidArgument, "format must be json or csv");
    if (c.threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be at least 1");
    if (c.strips < 1) throw Error(ErrorCode::InvalidArgument, "strips must be at least 1");
    if (!(c.tau >= 0.0 && c.tau <= 1.0)) throw Error(ErrorCode::InvalidArgument, "tau must lie in [0, 1]");
    if (c.deriv < 0 || c.deriv > 2) throw Error(ErrorCode::InvalidArgument, "deriv must be 0, 1 or 2");
    for (const auto& [k, v] : c.tolerances)
        if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance " + k + " must be positive");
}

std::uint64_t fnv1a(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t config_hash(const RunConfig& c) { return fnv1a(hashed_fields(c).dump()); }

Json to_json(const Checkpoint& c)
{
    Json units = Json::array();
    for (const auto& [id, v] : c.units) units.push_back({{"id", id}, {"result", v}});
    return {{"run_id", c.run_id}, {"config_hash", hex(c.config_hash)}, {"units", units}};
}

Checkpoint checkpoint_from_json(const Json& j)
{
    Checkpoint c;
    c.run_id = get<std::string>(j, "run_id");
    c.config_hash = std::stoull(get<std::string>(j, "config_hash"), nullptr, 16);
    for (const auto& u : j.at("units")) c.units[u.at("id").get<std::size_t>()] = u.at("result");
    return c;
}

Checkpoint load_checkpoint(const std::string& path)
{
    try {
        return checkpoint_from_json(Json::parse(read_file(path)));
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::Io, "corrupt checkpoint " + path + ": " + e.what());
    }
}

void write_file_atomic(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorCode::Io, "cannot write " + tmp);
        f << content;
        f.flush();
        if (!f) throw Error(ErrorCode::Io, "write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error(ErrorCode::Io, "cannot rename " + tmp + " to " + path);
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace zlab
