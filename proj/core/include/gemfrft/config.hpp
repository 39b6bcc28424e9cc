#ifndef GEMFRFT_CONFIG_HPP
#define GEMFRFT_CONFIG_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "gemfrft/errors.hpp"

namespace gemfrft {

// Structured run configuration. Sections and keys are fixed; unknown keys
// are rejected at load time. Inline overrides use "section.key=value".
struct ConfigDoc {
    // [medium]
    double d = 500.0;
    double gamma = 0.0; // 0 = rubidium-87 D1 default
    double gamma_s = 0.0;

    // [grid]
    std::size_t n_z = 0; // 0 = resolution rule
    double dt = 1e-3;

    // [protocol]
    std::string kind = "gem_eit"; // gem_eit | gem_gem
    double theta_extra = 0.0;
    int ft_sign = 1;
    std::string input = "hg"; // hg | gaussian_pair
    int n = 0;
    int m = 1;
    double t_i = 10.0;
    double kappa = 0.8;
    double omega_gem = 0.0; // 0 = built-in default
    double chirp_scale_in = 1.0;
    double chirp_scale_out = 1.0;
    double hold = 0.0;
    double separation_sigma = 4.0; // gaussian_pair spacing in units of sigma
    double dispersion = 0.0;       // gem_gem hold-stage quadratic detuning; 0 = default

    // [sweep]
    std::string sweep_mode = "eigenphase"; // eigenphase | fidelity | efficiency_m
    std::vector<std::string> sweep_protocols = {"gem_eit"};
    std::vector<double> theta_list;
    std::vector<int> n_list;
    int sweep_m = 10;
    std::vector<int> m_list;
    bool calibrate = false;
    std::string sweep_out = "results.csv";
    unsigned threads = 1;

    // [output]
    std::string out_dir = ".";
    bool write_dumps = true;
    bool write_wigner = false;
    bool write_svg = false;
};

// Parse a config file and apply "section.key=value" overrides in order.
// Throws config_error with the offending key/section/line named.
ConfigDoc load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Parse from an in-memory document (used by tests and by load_config).
ConfigDoc parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

} // namespace gemfrft

#endif
