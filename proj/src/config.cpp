#include "equijac/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "equijac/errors.hpp"

namespace equijac {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& field, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(field, "not a real number: '" + v + "'");
    }
}

long parse_int(const std::string& field, const std::string& v) {
    try {
        size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(field, "not an integer: '" + v + "'");
    }
}

std::vector<double> parse_double_list(const std::string& field, const std::string& v) {
    std::vector<double> out;
    for (const auto& item : split(v, ',')) out.push_back(parse_double(field, item));
    return out;
}

// Integer lists accept "a,b,c" or the range form "lo:hi:step".
std::vector<int> parse_int_list(const std::string& field, const std::string& v) {
    std::vector<int> out;
    if (v.find(':') != std::string::npos) {
        const auto parts = split(v, ':');
        if (parts.size() != 3) throw ConfigError(field, "range form is lo:hi:step");
        const long lo = parse_int(field, parts[0]);
        const long hi = parse_int(field, parts[1]);
        const long step = parse_int(field, parts[2]);
        if (step <= 0 || hi < lo) throw ConfigError(field, "bad range bounds");
        for (long n = lo; n <= hi; n += step) out.push_back(static_cast<int>(n));
        return out;
    }
    for (const auto& item : split(v, ','))
        out.push_back(static_cast<int>(parse_int(field, item)));
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F fmt) {
    std::string s;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) s += ",";
        s += fmt(items[i]);
    }
    return s;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("(line)", "expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "experiment") c.experiment = val;
        else if (key == "alpha") c.alpha = parse_double(key, val);
        else if (key == "beta") c.beta = parse_double(key, val);
        else if (key == "b_coeffs") c.b_coeffs = parse_double_list(key, val);
        else if (key == "basis_size") c.basis_size = static_cast<int>(parse_int(key, val));
        else if (key == "quad_points") c.quad_points = static_cast<int>(parse_int(key, val));
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, val));
        else if (key == "output_dir") c.output_dir = val;
        else if (key == "n_max") c.n_max = static_cast<int>(parse_int(key, val));
        else if (key == "n_list") c.n_list = parse_int_list(key, val);
        else if (key == "grid_points") c.grid_points = static_cast<int>(parse_int(key, val));
        else if (key == "lemmas") c.lemmas = split(val, ',');
        else if (key == "n_lo") c.n_lo = static_cast<int>(parse_int(key, val));
        else if (key == "n_hi") c.n_hi = static_cast<int>(parse_int(key, val));
        else if (key == "t_points") c.t_points = static_cast<int>(parse_int(key, val));
        else if (key == "weights") c.weights = val;
        else if (key == "theta") c.theta = parse_double(key, val);
        else if (key == "x_list") c.x_list = parse_double_list(key, val);
        else if (key == "N_list") c.N_list = parse_int_list(key, val);
        else if (key == "y_points") c.y_points = static_cast<int>(parse_int(key, val));
        else if (key == "function") c.function = val;
        else if (key == "gamma_lo") c.gamma_lo = parse_double(key, val);
        else if (key == "gamma_hi") c.gamma_hi = parse_double(key, val);
        else throw ConfigError(key, "unknown configuration key");
    }
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("(file)", "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "experiment = " << c.experiment << "\n";
    out << "alpha = " << fmt_double(c.alpha) << "\n";
    out << "beta = " << fmt_double(c.beta) << "\n";
    if (!c.b_coeffs.empty()) out << "b_coeffs = " << join(c.b_coeffs, fmt_double) << "\n";
    out << "basis_size = " << c.basis_size << "\n";
    out << "quad_points = " << c.quad_points << "\n";
    out << "seed = " << c.seed << "\n";
    out << "output_dir = " << c.output_dir << "\n";
    out << "n_max = " << c.n_max << "\n";
    out << "n_list = " << join(c.n_list, [](int v) { return std::to_string(v); }) << "\n";
    out << "grid_points = " << c.grid_points << "\n";
    if (!c.lemmas.empty())
        out << "lemmas = " << join(c.lemmas, [](const std::string& s) { return s; }) << "\n";
    out << "n_lo = " << c.n_lo << "\n";
    out << "n_hi = " << c.n_hi << "\n";
    out << "t_points = " << c.t_points << "\n";
    out << "weights = " << c.weights << "\n";
    out << "theta = " << fmt_double(c.theta) << "\n";
    if (!c.x_list.empty()) out << "x_list = " << join(c.x_list, fmt_double) << "\n";
    if (!c.N_list.empty())
        out << "N_list = " << join(c.N_list, [](int v) { return std::to_string(v); }) << "\n";
    out << "y_points = " << c.y_points << "\n";
    out << "function = " << c.function << "\n";
    out << "gamma_lo = " << fmt_double(c.gamma_lo) << "\n";
    out << "gamma_hi = " << fmt_double(c.gamma_hi) << "\n";
    return out.str();
}

PiecewiseFunction parse_function_descriptor(const std::string& descriptor) {
    std::stringstream ss(descriptor);
    std::string kind;
    ss >> kind;
    std::vector<double> args;
    double v;
    while (ss >> v) args.push_back(v);
    if (kind == "indicator" && args.size() == 2)
        return PiecewiseFunction::indicator(args[0], args[1]);
    if (kind == "bump" && args.size() == 2)
        return PiecewiseFunction::smooth_bump(args[0], args[1]);
    if (kind == "poly") return PiecewiseFunction::polynomial(args);
    if (kind == "zero" && args.empty()) return PiecewiseFunction::polynomial({});
    if (kind == "cosine" && args.size() == 1)
        return PiecewiseFunction::cosine_mode(static_cast<int>(args[0]));
    throw ConfigError("function",
                      "expected 'indicator a b', 'bump center width', 'poly c0 c1 ...', "
                      "'cosine k' or 'zero', got '" +
                          descriptor + "'");
}

SummabilitySequence summability_from_config(const RunConfig& c) {
    if (c.weights == "rectangular") return SummabilitySequence::rectangular();
    if (c.weights == "cesaro") return SummabilitySequence::cesaro(c.theta);
    throw ConfigError("weights", "expected 'rectangular' or 'cesaro', got '" + c.weights + "'");
}

void validate_config(const RunConfig& c) {
    static const std::set<std::string> kExperiments{
        "spectrum", "eigfun", "asymptotics", "kernel-diff", "equiconv", "selftest"};
    if (!kExperiments.count(c.experiment))
        throw ConfigError("experiment", "unknown experiment '" + c.experiment + "'");
    if (c.experiment == "selftest") return;

    if (!(c.beta > -0.5)) throw ConfigError("beta", "requires beta > -1/2");
    if (!(c.alpha >= c.beta))
        throw ConfigError("alpha", "requires alpha >= beta (reflect t -> pi/2 - t otherwise)");
    double bsum = 0.0;
    for (double a : c.b_coeffs) bsum += std::fabs(a);
    if (!(bsum < 1.0)) throw ConfigError("b_coeffs", "requires sum |a_k| < 1");
    if (c.basis_size < 8) throw ConfigError("basis_size", "requires basis_size >= 8");
    if (c.resolved_quad_points() < 2 * c.basis_size)
        throw ConfigError("quad_points", "requires quad_points >= 2 * basis_size");
    const int usable = (3 * c.basis_size) / 4;

    if (c.experiment == "spectrum") {
        if (c.n_max < 0 || c.n_max >= usable)
            throw ConfigError("n_max", "requires 0 <= n_max < 3/4 * basis_size");
    } else if (c.experiment == "eigfun") {
        if (c.n_list.empty()) throw ConfigError("n_list", "requires at least one index");
        for (int n : c.n_list)
            if (n < 0 || n >= usable)
                throw ConfigError("n_list", "indices must lie in [0, 3/4 * basis_size)");
        if (c.grid_points < 2) throw ConfigError("grid_points", "requires >= 2");
    } else if (c.experiment == "asymptotics") {
        if (c.n_lo < 1 || c.n_hi < c.n_lo)
            throw ConfigError("n_lo", "requires 1 <= n_lo <= n_hi");
        if (c.n_hi + 1 >= usable)
            throw ConfigError("n_hi", "requires n_hi + 1 < 3/4 * basis_size");
        if (c.t_points < 2) throw ConfigError("t_points", "requires >= 2");
        summability_from_config(c);
    } else if (c.experiment == "kernel-diff") {
        if (c.x_list.empty()) throw ConfigError("x_list", "requires at least one point");
        for (double x : c.x_list)
            if (!(x > 0.0) || !(x < kHalfPi))
                throw ConfigError("x_list", "points must lie in (0, pi/2)");
        if (c.N_list.empty()) throw ConfigError("N_list", "requires at least one N");
        for (int n : c.N_list)
            if (n < 0 || n >= usable)
                throw ConfigError("N_list", "entries must lie in [0, 3/4 * basis_size)");
        if (c.y_points < 2) throw ConfigError("y_points", "requires >= 2");
        summability_from_config(c);
    } else if (c.experiment == "equiconv") {
        parse_function_descriptor(c.function);
        if (!(c.gamma_lo > 0.0) || !(c.gamma_lo < c.gamma_hi) || !(c.gamma_hi < kHalfPi))
            throw ConfigError("gamma_lo", "requires 0 < gamma_lo < gamma_hi < pi/2");
        if (c.N_list.empty()) throw ConfigError("N_list", "requires at least one N");
        for (int n : c.N_list)
            if (n < 0 || n >= usable)
                throw ConfigError("N_list", "entries must lie in [0, 3/4 * basis_size)");
        if (c.grid_points < 2) throw ConfigError("grid_points", "requires >= 2");
        summability_from_config(c);
    }
    if (c.theta < 0.0) throw ConfigError("theta", "requires theta >= 0");
}

}  // namespace equijac
