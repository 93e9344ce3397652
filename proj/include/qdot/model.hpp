#pragma once

// Dimensionless confined-Coulomb radial problem.
//
// Units are fixed for the whole library: hbar = 1 and 2 mu* = 1. The WKB
// local wavenumber is then
//
//     Gamma^2(rho) = E - Z/rho - m^2/rho^2
//
// and the w = ln(rho) form used by the Numerov solver is
//
//     Gamma^2(w) = e^{2w} (E - Z e^{-w}) - m^2 .

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qdot {

/// Failure of a numerical procedure (as opposed to a bad argument).
class NumericalError : public std::runtime_error {
public:
    enum class Kind {
        no_allowed_region,
        bracket_failure,
        bracket_exhausted,
        mesh_not_converged,
        overflow,
        turning_point_neighborhood,
    };

    NumericalError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Coefficient of the 1/rho^2 term in the r-space u-equation.
enum class CentrifugalConvention {
    wkb_modified, ///< m^2 (conformal-map modified barrier)
    physical_2d,  ///< m^2 - 1/4
};

struct RadialProblem {
    double r0 = 1.0;               ///< hard-wall radius
    double coulomb_strength = 1.0; ///< Z, coefficient of 1/rho
    int m = 0;                     ///< azimuthal number, only |m| matters

    RadialProblem() = default;
    RadialProblem(double r0_, double z, int m_);

    int abs_m() const noexcept { return std::abs(m); }
    double m_sq() const noexcept { return static_cast<double>(m) * m; }
};

struct QuantumNumbers {
    int n_r = 0;
    int m = 0;

    QuantumNumbers() = default;
    QuantumNumbers(int n_r_, int m_);
};

/// Z/rho + c/rho^2 with c = m^2 or m^2 - 1/4.
double effective_potential(double rho, const RadialProblem& problem,
                           CentrifugalConvention convention =
                               CentrifugalConvention::wkb_modified);

/// Effective potential (WKB convention) evaluated at the wall.
double wall_potential(const RadialProblem& problem);

/// Largest root of E rho^2 - Z rho - m^2 = 0. Returns 0 when Z = m = 0.
/// Throws NumericalError(no_allowed_region) when the root is at or beyond r0.
double turning_point(double energy, const RadialProblem& problem);

/// Same root without the wall check; used where rho_t may exceed r0.
double turning_point_unchecked(double energy, const RadialProblem& problem);

/// Similarity transform (r0, Z, m) -> (lambda r0, Z/lambda, m).
/// Every level of the scaled problem has energy E/lambda^2.
RadialProblem scale_problem(const RadialProblem& problem, double lambda);

} // namespace qdot
