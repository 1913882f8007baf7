#pragma once

// Registry of the analytic limit-state functions with their random-vector
// specifications, reference failure probabilities, and per-problem default
// method configuration.

#include "cfak/driver.hpp"
#include "cfak/probspace.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfak {

struct LsfSpec {
    std::string id;
    std::size_t dim = 0;
    RandomVectorSpec rvs;
    std::function<double(std::span<const double>)> evaluate; // physical space
    std::optional<double> pf_ref;
    std::string pf_ref_source;
    MethodConfig defaults;
};

class RegistryError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// ids: four_branch, modified_two_branch(k), two_component, parabolic,
// highly_nonlinear, rastrigin, oscillator(case), truss(v_max),
// high_dim(beta, n_d)
LsfSpec make_benchmark(const std::string& id, const std::map<std::string, double>& params = {});
std::vector<std::string> registry_ids();

// Undamped nonlinear oscillator under a rectangular pulse; x = (c_s1, c_s2,
// m_s, r_s, t_1, F_1). Throws std::domain_error when the natural frequency is
// undefined (non-positive mass or stiffness sum).
double oscillator_lsf(std::span<const double> x);

} // namespace cfak
