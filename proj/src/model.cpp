#include "qdot/model.hpp"

#include <cmath>
#include <sstream>

namespace qdot {

RadialProblem::RadialProblem(double r0_, double z, int m_)
    : r0(r0_), coulomb_strength(z), m(m_)
{
    if (!(r0 > 0.0) || !std::isfinite(r0))
        throw std::domain_error("RadialProblem: r0 must be positive and finite");
    if (!(coulomb_strength >= 0.0) || !std::isfinite(coulomb_strength))
        throw std::domain_error("RadialProblem: Coulomb strength must be >= 0");
}

QuantumNumbers::QuantumNumbers(int n_r_, int m_) : n_r(n_r_), m(m_)
{
    if (n_r < 0)
        throw std::domain_error("QuantumNumbers: n_r must be >= 0");
}

double effective_potential(double rho, const RadialProblem& problem,
                           CentrifugalConvention convention)
{
    if (!(rho > 0.0))
        throw std::domain_error("effective_potential: rho must be positive");
    double c = problem.m_sq();
    if (convention == CentrifugalConvention::physical_2d)
        c -= 0.25;
    return problem.coulomb_strength / rho + c / (rho * rho);
}

double wall_potential(const RadialProblem& problem)
{
    return effective_potential(problem.r0, problem);
}

double turning_point_unchecked(double energy, const RadialProblem& problem)
{
    if (!(energy > 0.0))
        throw std::domain_error("turning_point: energy must be positive");
    const double z = problem.coulomb_strength;
    const double msq = problem.m_sq();
    if (msq == 0.0)
        return z / energy;
    // (Z + sqrt(Z^2 + 4 E m^2)) / (2E), written without cancellation.
    return (z + std::sqrt(z * z + 4.0 * energy * msq)) / (2.0 * energy);
}

double turning_point(double energy, const RadialProblem& problem)
{
    const double rho_t = turning_point_unchecked(energy, problem);
    if (rho_t >= problem.r0) {
        std::ostringstream os;
        os << "no classically allowed region: turning point " << rho_t
           << " >= r0 = " << problem.r0 << " at E = " << energy;
        throw NumericalError(NumericalError::Kind::no_allowed_region, os.str());
    }
    return rho_t;
}

RadialProblem scale_problem(const RadialProblem& problem, double lambda)
{
    if (!(lambda > 0.0))
        throw std::domain_error("scale_problem: lambda must be positive");
    return RadialProblem(lambda * problem.r0, problem.coulomb_strength / lambda,
                         problem.m);
}

} // namespace qdot
