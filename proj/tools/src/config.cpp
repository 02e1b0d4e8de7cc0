#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gsv/error.hpp"

namespace gsv::cli {

namespace {

enum class Kind { number, integer, string, boolean, number_list, integer_list };

const std::map<std::string, Kind>& schema() {
    static const std::map<std::string, Kind> keys{
        {"task", Kind::string},          {"kernel", Kind::string},
        {"H", Kind::number},             {"a", Kind::number},
        {"T", Kind::number},             {"sigma", Kind::string},
        {"sigma.c0", Kind::number},      {"sigma.c1", Kind::number},
        {"sigma.k", Kind::integer},      {"rho", Kind::number},
        {"beta", Kind::number},          {"alpha", Kind::number},
        {"eps", Kind::number_list},      {"n", Kind::integer},
        {"mc.count", Kind::integer},     {"mc.seed", Kind::integer},
        {"mc.tilt", Kind::string},       {"mc.bridge", Kind::boolean},
        {"x", Kind::number},             {"path", Kind::number_list},
        {"interval", Kind::number_list}, {"t", Kind::number},
        {"gamma", Kind::number},         {"M", Kind::number_list},
        {"solver.levels", Kind::integer_list},
        {"solver.restarts", Kind::integer},
        {"output.dir", Kind::string},    {"output.format", Kind::string},
    };
    return keys;
}

[[noreturn]] void invalid(const std::string& field, const std::string& reason) {
    fail(ErrorCode::config_invalid, field + ": " + reason);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        invalid(key, "expected a number, got '" + text + "'");
    }
    if (used != text.size()) invalid(key, "expected a number, got '" + text + "'");
    return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        invalid(key, "expected an integer, got '" + text + "'");
    }
    if (used != text.size()) invalid(key, "expected an integer, got '" + text + "'");
    return v;
}

nlohmann::json typed_value(const std::string& key, Kind kind, const std::string& text) {
    switch (kind) {
        case Kind::number: return parse_number(key, text);
        case Kind::integer: return parse_integer(key, text);
        case Kind::string: return text;
        case Kind::boolean:
            if (text == "true") return true;
            if (text == "false") return false;
            invalid(key, "expected true or false");
        case Kind::number_list:
        case Kind::integer_list: {
            nlohmann::json list = nlohmann::json::array();
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item.empty()) invalid(key, "empty list element");
                if (kind == Kind::number_list)
                    list.push_back(parse_number(key, item));
                else
                    list.push_back(parse_integer(key, item));
            }
            return list;
        }
    }
    return nullptr;
}

double get_number(const nlohmann::json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number()) invalid(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) invalid(key, "must be finite");
    return d;
}

long long get_integer(const nlohmann::json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) invalid(key, "expected an integer");
    return v.get<long long>();
}

std::string get_string(const nlohmann::json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_string()) invalid(key, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_numbers(const nlohmann::json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_array()) invalid(key, "expected a list");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) invalid(key, "expected a list of numbers");
        out.push_back(e.get<double>());
        if (!std::isfinite(out.back())) invalid(key, "entries must be finite");
    }
    return out;
}

void need(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key)) invalid(key, "required key is missing");
}

std::size_t positive_size(const nlohmann::json& j, const std::string& key) {
    const long long v = get_integer(j, key);
    if (v <= 0) invalid(key, "must be a positive integer");
    return static_cast<std::size_t>(v);
}

}  // namespace

std::string to_string(Task task) {
    switch (task) {
        case Task::simulate: return "simulate";
        case Task::rate: return "rate";
        case Task::exit_rate: return "exit-rate";
        case Task::callprice: return "callprice";
        case Task::impliedvol: return "impliedvol";
        case Task::explode: return "explode";
        case Task::verify: return "verify";
    }
    return "unknown";
}

Task parse_task(const std::string& name) {
    for (Task t : {Task::simulate, Task::rate, Task::exit_rate, Task::callprice, Task::impliedvol, Task::explode,
                   Task::verify})
        if (to_string(t) == name) return t;
    invalid("task", "unknown task '" + name + "'");
}

ModelSpec ExperimentConfig::model() const {
    KernelSpec k;
    if (kernel == "fbm")
        k = KernelSpec::fbm(H, T);
    else if (kernel == "rl")
        k = KernelSpec::riemann_liouville(H, T);
    else
        k = KernelSpec::fractional_ou(H, a, T);
    VolFunction s;
    if (sigma == "constant")
        s = VolFunction::constant(sigma_c0);
    else if (sigma == "affine")
        s = VolFunction::affine(sigma_c0, sigma_c1);
    else if (sigma == "exp")
        s = VolFunction::exponential(sigma_c0, sigma_c1);
    else if (sigma == "poly_plus")
        s = VolFunction::poly_plus(sigma_c0, sigma_k);
    else
        s = VolFunction::bounded_smooth(sigma_c0, sigma_c1);
    ModelSpec m{k, s, rho, T, 1.0};
    m.validate();
    return m;
}

ScalingParams ExperimentConfig::scaling(double e) const {
    ScalingParams p{e, H, beta, alpha};
    p.validate();
    return p;
}

SolverOptions ExperimentConfig::solver() const {
    SolverOptions o;
    o.levels = levels;
    o.restarts = restarts;
    o.seed = seed;
    return o;
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["task"] = to_string(task);
    j["kernel"] = kernel;
    j["H"] = H;
    if (kernel == "fou") j["a"] = a;
    j["T"] = T;
    j["sigma"] = sigma;
    j["sigma.c0"] = sigma_c0;
    if (sigma == "affine" || sigma == "exp" || sigma == "bounded_smooth") j["sigma.c1"] = sigma_c1;
    if (sigma == "poly_plus") j["sigma.k"] = sigma_k;
    j["rho"] = rho;
    j["beta"] = beta;
    j["alpha"] = alpha;
    j["eps"] = eps;
    j["n"] = n;
    j["mc.count"] = mc_count;
    j["mc.seed"] = seed;
    j["mc.tilt"] = tilt;
    j["mc.bridge"] = bridge;
    if (x) j["x"] = *x;
    if (path) j["path"] = *path;
    if (lower && upper) j["interval"] = {*lower, *upper};
    if (t) j["t"] = *t;
    if (gamma) j["gamma"] = *gamma;
    if (!M.empty()) j["M"] = M;
    j["solver.levels"] = levels;
    j["solver.restarts"] = restarts;
    j["output.dir"] = out_dir;
    j["output.format"] = format == OutputFormat::json ? "json" : (format == OutputFormat::csv ? "csv" : "both");
    return j;
}

ExperimentConfig parse_config_json(const nlohmann::json& j) {
    if (!j.is_object()) invalid("config", "top level must be an object");
    for (const auto& [key, value] : j.items())
        if (!schema().count(key)) invalid(key, "unknown key");

    ExperimentConfig c;
    if (j.contains("task")) c.task = parse_task(get_string(j, "task"));

    for (const char* key : {"kernel", "H", "T", "sigma", "sigma.c0", "rho", "beta", "alpha", "eps"}) need(j, key);

    c.kernel = get_string(j, "kernel");
    if (c.kernel == "custom") invalid("kernel", "custom kernels are only available through the library API");
    if (c.kernel != "fbm" && c.kernel != "rl" && c.kernel != "fou") invalid("kernel", "expected fbm, rl or fou");
    c.H = get_number(j, "H");
    if (!(c.H > 0.0 && c.H < 1.0)) invalid("H", "must lie in (0,1)");
    if (c.kernel == "fou") {
        need(j, "a");
        c.a = get_number(j, "a");
        if (!(c.a > 0.0)) invalid("a", "must be positive");
    } else if (j.contains("a")) {
        invalid("a", "only used by the fou kernel");
    }
    c.T = get_number(j, "T");
    if (!(c.T > 0.0)) invalid("T", "must be positive");

    c.sigma = get_string(j, "sigma");
    const bool two = c.sigma == "affine" || c.sigma == "exp" || c.sigma == "bounded_smooth";
    if (c.sigma != "constant" && c.sigma != "poly_plus" && !two)
        invalid("sigma", "expected constant, affine, exp, poly_plus or bounded_smooth");
    c.sigma_c0 = get_number(j, "sigma.c0");
    if (!(c.sigma_c0 > 0.0)) invalid("sigma.c0", "must be positive");
    if (two) {
        need(j, "sigma.c1");
        c.sigma_c1 = get_number(j, "sigma.c1");
        if (c.sigma == "affine" && c.sigma_c1 < 0.0) invalid("sigma.c1", "must be nonnegative for affine");
        if (c.sigma == "bounded_smooth" && !(std::abs(c.sigma_c1) < 1.0))
            invalid("sigma.c1", "must satisfy |c1| < 1 for bounded_smooth");
    } else if (j.contains("sigma.c1")) {
        invalid("sigma.c1", "not used by sigma = " + c.sigma);
    }
    if (c.sigma == "poly_plus") {
        need(j, "sigma.k");
        const long long k = get_integer(j, "sigma.k");
        if (k < 2 || k % 2 != 0) invalid("sigma.k", "must be an even integer >= 2");
        c.sigma_k = static_cast<int>(k);
    } else if (j.contains("sigma.k")) {
        invalid("sigma.k", "only used by poly_plus");
    }

    c.rho = get_number(j, "rho");
    if (std::abs(c.rho) > 1.0) invalid("rho", "must lie in [-1,1]");
    c.beta = get_number(j, "beta");
    if (c.beta < 0.0) invalid("beta", "must be nonnegative");
    if (c.beta > c.H * (1.0 + 1e-12)) invalid("beta", "must not exceed H");
    c.alpha = get_number(j, "alpha");
    if (c.alpha < 0.0) invalid("alpha", "must be nonnegative");
    if (c.alpha + c.beta > c.H * (1.0 + 1e-12)) invalid("alpha", "alpha + beta must not exceed H");
    if (std::abs(c.beta - c.H) <= 1e-12 * c.H && c.alpha > 1e-12 * c.H) invalid("alpha", "beta = H requires alpha = 0");

    c.eps = get_numbers(j, "eps");
    if (c.eps.empty()) invalid("eps", "needs at least one value");
    for (std::size_t i = 0; i < c.eps.size(); ++i) {
        if (!(c.eps[i] > 0.0 && c.eps[i] <= 1.0)) invalid("eps", "values must lie in (0,1]");
        if (i > 0 && !(c.eps[i] < c.eps[i - 1])) invalid("eps", "list must be strictly decreasing");
    }

    if (j.contains("n")) c.n = positive_size(j, "n");
    if (j.contains("mc.count")) {
        const long long v = get_integer(j, "mc.count");
        if (v < 0) invalid("mc.count", "must be nonnegative");
        c.mc_count = static_cast<std::size_t>(v);
    }
    if (j.contains("mc.seed")) {
        const long long v = get_integer(j, "mc.seed");
        if (v < 0) invalid("mc.seed", "must be nonnegative");
        c.seed = static_cast<std::uint64_t>(v);
    }
    if (j.contains("mc.tilt")) {
        c.tilt = get_string(j, "mc.tilt");
        if (c.tilt != "none" && c.tilt != "constant" && c.tilt != "control")
            invalid("mc.tilt", "expected none, constant or control");
    }
    if (j.contains("mc.bridge")) {
        if (!j.at("mc.bridge").is_boolean()) invalid("mc.bridge", "expected true or false");
        c.bridge = j.at("mc.bridge").get<bool>();
    }

    if (j.contains("x")) c.x = get_number(j, "x");
    if (j.contains("path")) {
        c.path = get_numbers(j, "path");
        if (c.path->size() < 2) invalid("path", "needs at least two node values");
        if (c.path->front() != 0.0) invalid("path", "must start at 0");
    }
    if (j.contains("interval")) {
        const auto iv = get_numbers(j, "interval");
        if (iv.size() != 2) invalid("interval", "expected two values lower,upper");
        if (!(iv[0] < 0.0 && 0.0 < iv[1])) invalid("interval", "must contain 0 in its interior");
        c.lower = iv[0];
        c.upper = iv[1];
    }
    if (j.contains("t")) {
        c.t = get_number(j, "t");
        if (!(*c.t > 0.0 && *c.t <= c.T * (1.0 + 1e-12))) invalid("t", "must lie in (0,T]");
    }
    if (j.contains("gamma")) c.gamma = get_number(j, "gamma");
    if (j.contains("M")) {
        c.M = get_numbers(j, "M");
        for (double m : c.M)
            if (!(m > 0.0)) invalid("M", "thresholds must be positive");
    }
    if (j.contains("solver.levels")) {
        c.levels.clear();
        const auto& v = j.at("solver.levels");
        if (!v.is_array() || v.empty()) invalid("solver.levels", "expected a nonempty list");
        for (const auto& e : v) {
            if (!e.is_number_integer() || e.get<long long>() <= 0)
                invalid("solver.levels", "levels must be positive integers");
            c.levels.push_back(e.get<std::size_t>());
        }
        if (!std::is_sorted(c.levels.begin(), c.levels.end())) invalid("solver.levels", "must be increasing");
        for (std::size_t l : c.levels)
            if (c.levels.back() % l != 0) invalid("solver.levels", "every level must divide the finest");
    }
    if (j.contains("solver.restarts")) c.restarts = positive_size(j, "solver.restarts");
    if (j.contains("output.dir")) c.out_dir = get_string(j, "output.dir");
    if (j.contains("output.format")) {
        const std::string f = get_string(j, "output.format");
        if (f == "json")
            c.format = OutputFormat::json;
        else if (f == "csv")
            c.format = OutputFormat::csv;
        else if (f == "both")
            c.format = OutputFormat::both;
        else
            invalid("output.format", "expected json, csv or both");
    }

    // task parameters
    switch (c.task) {
        case Task::simulate:
        case Task::callprice:
        case Task::impliedvol:
            if (!c.x) invalid("x", "required by task " + to_string(c.task));
            if (c.mc_count == 0) invalid("mc.count", "required by task " + to_string(c.task));
            break;
        case Task::rate:
            if (!c.x && !c.path) invalid("x", "task rate needs x or path");
            break;
        case Task::exit_rate:
            if (!c.lower) invalid("interval", "required by task exit-rate");
            if (!c.t) invalid("t", "required by task exit-rate");
            break;
        case Task::explode:
            if (!c.gamma) invalid("gamma", "required by task explode");
            if (!c.t) invalid("t", "required by task explode");
            if (c.M.empty()) invalid("M", "required by task explode");
            break;
        case Task::verify:
            if (c.mc_count == 0) invalid("mc.count", "required by task verify");
            break;
    }
    if (c.tilt == "control" && c.task != Task::simulate) invalid("mc.tilt", "control tilt is only used by simulate");

    // library-level checks, reported against the nearest key
    try {
        (void)c.model();
    } catch (const Error& e) {
        invalid("model", e.what());
    }
    return c;
}

nlohmann::json config_text_to_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::object();
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) invalid("line " + std::to_string(lineno), "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = schema().find(key);
        if (it == schema().end()) invalid(key, "unknown key");
        if (j.contains(key)) invalid(key, "duplicate key");
        if (value.empty()) invalid(key, "empty value");
        j[key] = typed_value(key, it->second, value);
    }
    return j;
}

ExperimentConfig parse_config_text(const std::string& text) { return parse_config_json(config_text_to_json(text)); }

nlohmann::json read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) invalid("config", "cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            invalid("config", std::string("malformed JSON: ") + e.what());
        }
        return j;
    }
    return config_text_to_json(text);
}

ExperimentConfig load_config(const std::string& path) { return parse_config_json(read_config_file(path)); }

}  // namespace gsv::cli
