#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "kahlab/ambient.hpp"
#include "kahlab/verify.hpp"

namespace kahlab {

struct AmbientConfig {
    std::string kind = "euclidean_c2";  ///< euclidean_c2 | conformal
    std::string lambda;                 ///< conformal factor expression
    double fd_step = 1e-3;
    bool analytic_derivatives = true;
};

struct SurfaceConfig {
    std::string file;  ///< surface file; takes precedence over the generator
    std::string generator = "perturbed_graph";
    double c = 0.5;
    std::complex<double> a = 0.0;
    std::complex<double> b = 0.0;
    double epsilon = 0.1;
    int m_theta = 1;
    int m_phi = 1;
    double r = 1.0;
    double r1 = 1.0;
    double r2 = 1.0;
    double major = 2.0;
    double minor = 1.0;
    int n_theta = 64;
    int n_phi = 64;
};

struct TaskConfig {
    /// variation, gradient, laplacian, critical, conditions
    std::vector<std::string> checks = {"gradient", "laplacian"};
    std::vector<double> betas = {1.0};
    std::vector<int> levels = {32, 64, 128};
    double tol = 1e-3;
    /// Threshold for the pointwise conditions on nabla J.
    double condition_tol = 1e-10;
    double min_order = 1.9;
    double delta = 1e-4;
    double min_sin = 0.1;
    bool calibrate = false;
    double residual = 1e-3;
    int max_iterations = 20000;
    int snapshot_every = 0;
};

struct OutputConfig {
    std::string directory = "kahlab_out";
};

struct RunConfig {
    AmbientConfig ambient;
    SurfaceConfig surface;
    TaskConfig task;
    OutputConfig output;
};

/// Parses sectioned key = value text ([ambient], [surface], [task], [output]). Unknown
/// sections or keys and malformed values raise ConfigError.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Throws ConfigError unless generators and checks exist, betas differ from -1 and
/// resolutions are at least 8.
void validate_config(const RunConfig& c);

std::vector<double> parse_double_list(const std::string& text, const std::string& what);
std::vector<int> parse_int_list(const std::string& text, const std::string& what);

AmbientManifold build_ambient(const AmbientConfig& c);
/// Surface from the file, or from the generator at the configured resolution.
ImmersedSurface build_surface(const SurfaceConfig& c);
/// Generator family at n x n; throws ConfigError for file-based surfaces.
SurfaceFamily surface_family(const SurfaceConfig& c);

bool is_known_generator(const std::string& name);
bool is_known_check(const std::string& name);

}  // namespace kahlab
