#include "kahlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "kahlab/errors.hpp"
#include "kahlab/generators.hpp"
#include "kahlab/io.hpp"

namespace kahlab {

namespace pt = boost::property_tree;

namespace {

const std::vector<std::string> kGenerators = {
    "complex_line",     "holomorphic_graph", "conj_graph",  "perturbed_graph",
    "perturbed_holomorphic_graph", "lagrangian_torus", "round_torus", "clifford_torus"};
const std::vector<std::string> kChecks = {"variation", "gradient", "laplacian", "critical",
                                          "conditions"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(trim(text), &used);
        if (used == trim(text).size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(what + ": expected a number, got '" + text + "'");
}

int to_int(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(trim(text), &used);
        if (used == trim(text).size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(what + ": expected an integer, got '" + text + "'");
}

bool to_bool(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(what + ": expected true or false, got '" + text + "'");
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(trim(item));
    return out;
}

// 1-based line of `key` inside `[section]` of the raw config text, 0 when not found.
int line_of(const std::string& text, const std::string& section, const std::string& key) {
    std::istringstream in(text);
    std::string line, current;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            current = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (current == section && eq != std::string::npos && trim(t.substr(0, eq)) == key)
            return number;
    }
    return 0;
}

// Applies every key of one section through `apply`, rejecting unknown keys.
template <typename F>
void read_section(const std::string& text, const pt::ptree& section, const std::string& name,
                  const std::set<std::string>& known, F apply) {
    for (const auto& kv : section) {
        const int line = line_of(text, name, kv.first);
        try {
            if (!known.count(kv.first))
                throw ConfigError("[" + name + "]: unknown key '" + kv.first + "'");
            apply(kv.first, kv.second.data(), "[" + name + "] " + kv.first);
        } catch (const ConfigError& e) {
            throw ConfigError(e.what(), line);
        }
    }
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const auto& item : split(text)) out.push_back(to_double(item, what));
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (const auto& item : split(text)) out.push_back(to_int(item, what));
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

bool is_known_generator(const std::string& name) {
    return std::find(kGenerators.begin(), kGenerators.end(), name) != kGenerators.end();
}

bool is_known_check(const std::string& name) {
    return std::find(kChecks.begin(), kChecks.end(), name) != kChecks.end();
}

RunConfig parse_config(std::istream& in) {
    std::ostringstream raw;
    raw << in.rdbuf();
    const std::string text = raw.str();
    std::istringstream source(text);
    pt::ptree tree;
    try {
        pt::read_ini(source, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(e.message(), static_cast<int>(e.line()));
    }

    RunConfig c;
    for (const auto& sec : tree) {
        const std::string& name = sec.first;
        if (name == "ambient") {
            read_section(text, sec.second, name, {"kind", "lambda", "fd_step", "analytic_derivatives"},
                         [&](const std::string& k, const std::string& v, const std::string& w) {
                             if (k == "kind") c.ambient.kind = trim(v);
                             else if (k == "lambda") c.ambient.lambda = trim(v);
                             else if (k == "fd_step") c.ambient.fd_step = to_double(v, w);
                             else c.ambient.analytic_derivatives = to_bool(v, w);
                         });
        } else if (name == "surface") {
            read_section(
                text, sec.second, name,
                {"file", "generator", "c", "a_re", "a_im", "b_re", "b_im", "epsilon", "m_theta",
                 "m_phi", "r", "r1", "r2", "major", "minor", "n", "n_theta", "n_phi"},
                [&](const std::string& k, const std::string& v, const std::string& w) {
                    SurfaceConfig& s = c.surface;
                    if (k == "file") s.file = trim(v);
                    else if (k == "generator") s.generator = trim(v);
                    else if (k == "c") s.c = to_double(v, w);
                    else if (k == "a_re") s.a.real(to_double(v, w));
                    else if (k == "a_im") s.a.imag(to_double(v, w));
                    else if (k == "b_re") s.b.real(to_double(v, w));
                    else if (k == "b_im") s.b.imag(to_double(v, w));
                    else if (k == "epsilon") s.epsilon = to_double(v, w);
                    else if (k == "m_theta") s.m_theta = to_int(v, w);
                    else if (k == "m_phi") s.m_phi = to_int(v, w);
                    else if (k == "r") s.r = to_double(v, w);
                    else if (k == "r1") s.r1 = to_double(v, w);
                    else if (k == "r2") s.r2 = to_double(v, w);
                    else if (k == "major") s.major = to_double(v, w);
                    else if (k == "minor") s.minor = to_double(v, w);
                    else if (k == "n") s.n_theta = s.n_phi = to_int(v, w);
                    else if (k == "n_theta") s.n_theta = to_int(v, w);
                    else s.n_phi = to_int(v, w);
                });
        } else if (name == "task") {
            read_section(
                text, sec.second, name,
                {"checks", "beta", "levels", "tol", "condition_tol", "min_order", "delta", "min_sin", "calibrate",
                 "residual", "max_iterations", "snapshot_every"},
                [&](const std::string& k, const std::string& v, const std::string& w) {
                    TaskConfig& t = c.task;
                    if (k == "checks") t.checks = split(v);
                    else if (k == "beta") {
                        t.betas = parse_double_list(v, w);
                        for (double b : t.betas)
                            if (b == -1.0) throw ConfigError(w + ": beta must differ from -1");
                    }
                    else if (k == "levels") t.levels = parse_int_list(v, w);
                    else if (k == "tol") t.tol = to_double(v, w);
                    else if (k == "condition_tol") t.condition_tol = to_double(v, w);
                    else if (k == "min_order") t.min_order = to_double(v, w);
                    else if (k == "delta") t.delta = to_double(v, w);
                    else if (k == "min_sin") t.min_sin = to_double(v, w);
                    else if (k == "calibrate") t.calibrate = to_bool(v, w);
                    else if (k == "residual") t.residual = to_double(v, w);
                    else if (k == "max_iterations") t.max_iterations = to_int(v, w);
                    else t.snapshot_every = to_int(v, w);
                });
        } else if (name == "output") {
            read_section(text, sec.second, name, {"directory"},
                         [&](const std::string&, const std::string& v, const std::string&) {
                             c.output.directory = trim(v);
                         });
        } else if (sec.second.empty() && !sec.second.data().empty()) {
            throw ConfigError("key '" + name + "' outside of a section");
        } else {
            throw ConfigError("unknown section [" + name + "]");
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

void validate_config(const RunConfig& c) {
    if (c.ambient.kind != "euclidean_c2" && c.ambient.kind != "conformal")
        throw ConfigError("[ambient] kind: unknown ambient '" + c.ambient.kind + "'");
    if (c.ambient.kind == "conformal" && c.ambient.lambda.empty())
        throw ConfigError("[ambient] lambda: required for a conformal ambient");
    if (!(c.ambient.fd_step > 0.0)) throw ConfigError("[ambient] fd_step: must be positive");
    if (c.surface.file.empty() && !is_known_generator(c.surface.generator))
        throw ConfigError("[surface] generator: unknown generator '" + c.surface.generator + "'");
    if (c.surface.n_theta < 8 || c.surface.n_phi < 8)
        throw ConfigError("[surface] resolutions must be at least 8");
    for (double b : c.task.betas)
        if (b == -1.0) throw ConfigError("[task] beta: beta must differ from -1");
    for (int n : c.task.levels)
        if (n < 8) throw ConfigError("[task] levels: resolutions must be at least 8");
    for (const auto& check : c.task.checks)
        if (!is_known_check(check)) throw ConfigError("[task] checks: unknown check '" + check + "'");
    if (!(c.task.tol > 0.0)) throw ConfigError("[task] tol: must be positive");
    if (!(c.task.delta > 0.0)) throw ConfigError("[task] delta: must be positive");
    if (c.task.max_iterations < 0) throw ConfigError("[task] max_iterations: must be >= 0");
    if (c.output.directory.empty()) throw ConfigError("[output] directory: must not be empty");
}

AmbientManifold build_ambient(const AmbientConfig& c) {
    if (c.kind == "euclidean_c2") {
        AmbientManifold m = euclidean_c2();
        m.fd_step = c.fd_step;
        return m;
    }
    if (c.kind == "conformal") {
        ConformalOptions o;
        o.fd_step = c.fd_step;
        o.analytic_derivatives = c.analytic_derivatives;
        try {
            return conformal(c.lambda, o);
        } catch (const ExpressionError& e) {
            throw ConfigError(std::string("[ambient] lambda: ") + e.what());
        }
    }
    throw ConfigError("[ambient] kind: unknown ambient '" + c.kind + "'");
}

namespace {

ImmersedSurface generate(const SurfaceConfig& c, int nt, int np) {
    const Perturbation p{c.epsilon, c.m_theta, c.m_phi};
    const std::string& g = c.generator;
    if (g == "complex_line") return complex_line(nt, np);
    if (g == "holomorphic_graph") return holomorphic_graph(nt, np, c.a, c.b);
    if (g == "conj_graph") return conj_graph(nt, np, c.c);
    if (g == "perturbed_graph") return perturbed_graph(nt, np, c.c, p);
    if (g == "perturbed_holomorphic_graph") return perturbed_holomorphic_graph(nt, np, c.a, p);
    if (g == "lagrangian_torus") return lagrangian_torus(nt, np, c.r);
    if (g == "round_torus") return round_torus(nt, np, c.major, c.minor);
    if (g == "clifford_torus") return clifford_torus(nt, np, c.r1, c.r2);
    throw ConfigError("[surface] generator: unknown generator '" + g + "'");
}

}  // namespace

ImmersedSurface build_surface(const SurfaceConfig& c) {
    if (!c.file.empty()) {
        try {
            return load_surface(c.file);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("[surface] file: ") + e.what());
        }
    }
    return generate(c, c.n_theta, c.n_phi);
}

SurfaceFamily surface_family(const SurfaceConfig& c) {
    if (!c.file.empty())
        throw ConfigError("[surface] file: refinement studies need a generator");
    if (!is_known_generator(c.generator))
        throw ConfigError("[surface] generator: unknown generator '" + c.generator + "'");
    return [c](int n) { return generate(c, n, n); };
}

}  // namespace kahlab
