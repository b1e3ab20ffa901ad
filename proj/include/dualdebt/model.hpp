#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dualdebt {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised by parameter validation; `field` names the offending parameter.
class ParamError : public DomainError {
public:
    ParamError(std::string field, const std::string& what) : DomainError(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct Proportional {
    double lambda = 0.5;
};

// L(k) = 2 nu sqrt(k)
struct SqrtForm {
    double nu = 0.1;
};

using LiquidationSpec = std::variant<Proportional, SqrtForm>;

struct ModelParams {
    double A = 1.0;
    double alpha = 0.5;
    double tau = 0.2;
    double delta = 0.1;
    double beta = 0.96;
    double rho = 0.04;
    double b_lo = -1.0;
    double b_hi = 2.0;
    LiquidationSpec liquidation = Proportional{0.5};

    void validate() const;
    double risk_free_price() const { return 1.0 / (1.0 + rho); }
};

struct ShockChain {
    std::vector<double> states;
    std::vector<double> transition;  // row-major n x n
    double z_bar = 0.0;

    std::size_t size() const { return states.size(); }
    double prob(std::size_t i, std::size_t j) const { return transition[i * states.size() + j]; }
    double expected_state(std::size_t i) const;
};

ShockChain build_shock_chain(const std::vector<double>& states, const std::vector<std::vector<double>>& transition);

enum class Spacing { Uniform, Geometric };

struct GridSizes {
    std::size_t k = 50;
    std::size_t b = 40;
    std::size_t v = 40;
    double k_max = 25.0;
    Spacing k_spacing = Spacing::Uniform;
    double k_growth = 0.05;         // geometric spacing only
    std::optional<double> v_max;    // default bound when absent
};

struct Grids {
    std::vector<double> k;
    std::vector<double> b;
    std::vector<double> v;
    std::size_t b_zero = 0;  // index of the exact b = 0 node

    double v_max() const { return v.back(); }
    double k_cell() const;   // widest adjacent gap
    double b_cell() const;
    double v_cell() const;
};

double production(double z, double k, const ModelParams& p);
double resources(double z, double k, const ModelParams& p);
double liquidation_value(double k_next, const LiquidationSpec& spec);

// d = R(z,k) + [tau + (1-tau) q] b' - k' - b
double budget_residual(double z, double b, double k, double b_next, double k_next, double q, const ModelParams& p);

double default_v_max(const ModelParams& p, const ShockChain& chain, double k_max);

Grids build_grids(const ModelParams& p, const ShockChain& chain, const GridSizes& sizes);

// Bond grid on [b_lo, b_hi] with 0 as an exact node. Collapses to {0} when b_lo = b_hi = 0.
std::vector<double> bond_grid(double b_lo, double b_hi, std::size_t n);
std::vector<double> capital_grid(const GridSizes& sizes);
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

}  // namespace dualdebt
