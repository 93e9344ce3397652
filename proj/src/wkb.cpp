#include "qdot/wkb.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qdot::wkb {

namespace {

constexpr double pi = boost::math::constants::pi<double>();

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

// Second root of E rho^2 - Z rho - m^2 (product of roots is -m^2/E).
double lower_root(double energy, double rho_t, const RadialProblem& problem)
{
    if (rho_t <= 0.0)
        return 0.0;
    return -problem.m_sq() / (energy * rho_t);
}

struct Integral {
    double value;
    double error;
};

// int_{rho_t}^{rho_t + width} Gamma drho  (sign = +1), or
// int_{rho_t - width}^{rho_t} kappa drho  (sign = -1),
// both after rho = rho_t +- s^2. Gamma^2 = E (rho - rho_t)(rho - rho_minus)/rho^2
// so the transformed integrand 2 s^2 sqrt(E (rho - rho_minus)) / rho is smooth.
Integral branch_integral(double energy, const RadialProblem& problem,
                         double rho_t, double width, double sign,
                         const QuadratureOptions& opts)
{
    if (width <= 0.0)
        return {0.0, 0.0};
    const double rho_minus = lower_root(energy, rho_t, problem);
    auto f = [&](double s) {
        if (s <= 0.0)
            return 0.0;
        const double rho = rho_t + sign * s * s;
        const double stretch = std::max(rho - rho_minus, 0.0);
        return 2.0 * s * s * std::sqrt(energy * stretch) / rho;
    };
    double err = 0.0;
    const double value = Kronrod::integrate(f, 0.0, std::sqrt(width),
                                            opts.max_depth, opts.rel_tol, &err);
    return {value, err};
}

double checked_turning_point(double energy, const RadialProblem& problem)
{
    if (!(energy > 0.0))
        throw std::domain_error("WKB action: energy must be positive");
    return turning_point(energy, problem);
}

} // namespace

const char* to_string(ActionMethod method) noexcept
{
    switch (method) {
    case ActionMethod::quadrature_rho: return "quadrature_rho";
    case ActionMethod::quadrature_w: return "quadrature_w";
    case ActionMethod::closed_form: return "closed_form";
    }
    return "unknown";
}

ActionResult action_quadrature(double energy, const RadialProblem& problem,
                               const QuadratureOptions& opts)
{
    const double rho_t = checked_turning_point(energy, problem);
    const auto integral = branch_integral(energy, problem, rho_t,
                                          problem.r0 - rho_t, +1.0, opts);
    return {integral.value, rho_t, ActionMethod::quadrature_rho, integral.error};
}

ActionResult action_quadrature_w(double energy, const RadialProblem& problem,
                                 const QuadratureOptions& opts)
{
    const double rho_t = checked_turning_point(energy, problem);
    double err = 0.0;
    double value = 0.0;
    if (rho_t <= 0.0) {
        // Z = m = 0: Gamma(w) = sqrt(E) e^w on (-inf, ln r0]; w = ln r0 - t.
        const double k = std::sqrt(energy) * problem.r0;
        auto f = [k](double t) { return k * std::exp(-t); };
        value = Kronrod::integrate(f, 0.0, 80.0, opts.max_depth, opts.rel_tol, &err);
    } else {
        // w = w_t + s^2, e^w - rho_t = rho_t expm1(s^2).
        const double rho_minus = lower_root(energy, rho_t, problem);
        auto f = [&](double s) {
            if (s <= 0.0)
                return 0.0;
            const double s2 = s * s;
            const double rho = rho_t * std::exp(s2);
            const double g2 = energy * rho_t * std::expm1(s2) * (rho - rho_minus);
            return 2.0 * s * std::sqrt(std::max(g2, 0.0));
        };
        const double upper = std::sqrt(std::log(problem.r0 / rho_t));
        value = Kronrod::integrate(f, 0.0, upper, opts.max_depth, opts.rel_tol, &err);
    }
    return {value, rho_t, ActionMethod::quadrature_w, err};
}

ActionResult action_closed_form(double energy, const RadialProblem& problem)
{
    const double rho_t = checked_turning_point(energy, problem);
    const double a = energy;
    const double b = 0.5 * problem.coulomb_strength;
    const double c = problem.m_sq();
    const double r0 = problem.r0;
    const double q = std::max(a * r0 * r0 - 2.0 * b * r0 - c, 0.0);

    const double root_term = std::sqrt(q);
    double log_term = 0.0;
    if (b > 0.0) {
        // A rho_t - B = sqrt(B^2 + A C)
        const double d = std::sqrt(b * b + a * c);
        log_term = b / std::sqrt(a) * std::log((a * r0 - b + std::sqrt(a * q)) / d);
    }
    double angle_term = 0.0;
    if (c > 0.0) {
        // pi/2 - arcsin(x) = arccos(x); sqrt(1 - x^2) = sqrt(C Q) / (r0 D).
        angle_term = problem.abs_m() * std::atan2(std::sqrt(c * q), b * r0 + c);
    }
    const double alpha = root_term - log_term - angle_term;
    const double scale = root_term + std::abs(log_term) + angle_term;
    return {alpha, rho_t, ActionMethod::closed_form,
            8.0 * std::numeric_limits<double>::epsilon() * scale};
}

ActionResult action(double energy, const RadialProblem& problem, ActionMethod method)
{
    switch (method) {
    case ActionMethod::quadrature_rho: return action_quadrature(energy, problem);
    case ActionMethod::quadrature_w: return action_quadrature_w(energy, problem);
    case ActionMethod::closed_form: return action_closed_form(energy, problem);
    }
    throw std::invalid_argument("unknown action method");
}

double quantization_residual(double energy, const QuantumNumbers& qn,
                             const RadialProblem& problem, ActionMethod method)
{
    const double target = (qn.n_r + 0.75) * pi;
    if (!(energy > 0.0) || energy <= wall_potential(problem))
        return -target;
    if (turning_point_unchecked(energy, problem) >= problem.r0)
        return -target;
    return action(energy, problem, method).alpha - target;
}

EigenResult solve_wkb(const QuantumNumbers& qn, const RadialProblem& problem,
                      const SolveOptions& opts)
{
    if (qn.n_r < 0)
        throw std::domain_error("solve_wkb: n_r must be >= 0");
    const auto f = [&](double e) {
        return quantization_residual(e, qn, problem, opts.method);
    };

    const double v_wall = wall_potential(problem);
    double lo = v_wall * (1.0 + 1e-12) + std::numeric_limits<double>::min();
    double hi = std::max(2.0 * lo, 1.0 / (problem.r0 * problem.r0));
    double f_lo = f(lo);
    double f_hi = f(hi);
    while (f_hi < 0.0) {
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        if (hi > opts.energy_cap) {
            std::ostringstream os;
            os << "bracket failure: no sign change of the quantization residual"
               << " below E = " << opts.energy_cap;
            throw NumericalError(NumericalError::Kind::bracket_failure, os.str());
        }
        f_hi = f(hi);
    }

    EigenResult out;
    out.node_count = qn.n_r;
    if (f_hi == 0.0) {
        out.energy = out.bracket_lo = out.bracket_hi = hi;
        return out;
    }
    const int bits = std::clamp(
        static_cast<int>(-std::log2(std::min(opts.rel_tol, 1e-4))) + 14, 20, 50);
    boost::math::tools::eps_tolerance<double> tol(bits);
    std::uintmax_t max_iter = 200;
    const auto [a, b] =
        boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, max_iter);
    out.bracket_lo = a;
    out.bracket_hi = b;
    out.energy = 0.5 * (a + b);
    out.endpoint_residual = f(out.energy);
    return out;
}

WkbWavefunction::WkbWavefunction(const RadialProblem& problem, double energy,
                                 double amplitude)
    : problem_(problem), energy_(energy), amplitude_(amplitude),
      rho_t_(turning_point_unchecked(energy, problem))
{
}

bool WkbWavefunction::excluded(double rho) const noexcept
{
    return rho_t_ > 0.0 && std::abs(rho - rho_t_) < delta();
}

WkbWavefunction::Region WkbWavefunction::region(double rho) const noexcept
{
    return rho < rho_t_ ? Region::forbidden : Region::allowed;
}

double WkbWavefunction::phase(double rho) const
{
    if (rho <= rho_t_)
        return 0.0;
    return branch_integral(energy_, problem_, rho_t_, rho - rho_t_, +1.0, {}).value;
}

double WkbWavefunction::operator()(double rho) const
{
    if (!(rho > 0.0) || rho > problem_.r0)
        throw std::domain_error("WKB wavefunction: rho outside (0, r0]");
    if (excluded(rho)) {
        std::ostringstream os;
        os << "turning-point neighborhood: |rho - rho_t| < " << delta()
           << " at rho = " << rho;
        throw NumericalError(NumericalError::Kind::turning_point_neighborhood, os.str());
    }
    const double rho_minus = lower_root(energy_, rho_t_, problem_);
    const double local =
        std::sqrt(energy_ * std::abs(rho - rho_t_) * (rho - rho_minus)) / rho;
    if (rho < rho_t_) {
        const double decay =
            branch_integral(energy_, problem_, rho_t_, rho_t_ - rho, -1.0, {}).value;
        return amplitude_ / std::sqrt(local) * std::exp(-decay);
    }
    return 2.0 * amplitude_ / std::sqrt(local) * std::sin(phase(rho) + 0.25 * pi);
}

double wkb_wavefunction_eval(const WkbWavefunction& wf, double rho)
{
    return wf(rho);
}

} // namespace qdot::wkb
