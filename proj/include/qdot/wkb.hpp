#pragma once

// Semiclassical quantization for the hard-wall disc with a central charge.
//
// For one linear turning point rho_t and a hard wall at r0 the phase
//
//     alpha(E) = int_{rho_t}^{r0} sqrt(E - Z/rho - m^2/rho^2) drho
//
// is quantized as alpha = (n_r + 3/4) pi. Three equivalent routes to alpha
// are provided; quadrature in rho is the reference the others are tested
// against.

#include "qdot/eigen_result.hpp"
#include "qdot/model.hpp"

namespace qdot::wkb {

enum class ActionMethod { quadrature_rho, quadrature_w, closed_form };

const char* to_string(ActionMethod method) noexcept;

struct ActionResult {
    double alpha = 0.0;
    double turning_point = 0.0;
    ActionMethod method = ActionMethod::quadrature_rho;
    double est_error = 0.0;
};

struct QuadratureOptions {
    double rel_tol = 1e-13;
    unsigned max_depth = 8;
};

/// alpha by adaptive quadrature in rho after rho = rho_t + s^2.
ActionResult action_quadrature(double energy, const RadialProblem& problem,
                               const QuadratureOptions& opts = {});

/// alpha by adaptive quadrature in w = ln(rho) after w = w_t + s^2.
ActionResult action_quadrature_w(double energy, const RadialProblem& problem,
                                 const QuadratureOptions& opts = {});

/// alpha from the antiderivative of sqrt(A rho^2 - 2B rho - C) / rho with
/// A = E, B = Z/2, C = m^2:
///
///   alpha = sqrt(Q(r0))
///         - B/sqrt(A) ln[(A r0 - B + sqrt(A Q(r0))) / (A rho_t - B)]
///         - |m| [pi/2 - arcsin((B r0 + C) / (r0 sqrt(B^2 + A C)))]
///
/// where Q(rho) = A rho^2 - 2B rho - C. The logarithm is absent for Z = 0
/// and the arcsin term for m = 0.
ActionResult action_closed_form(double energy, const RadialProblem& problem);

ActionResult action(double energy, const RadialProblem& problem,
                    ActionMethod method);

/// alpha(E) - (n_r + 3/4) pi. Strictly increasing in E above V(r0).
/// Returns -(n_r + 3/4) pi when E is at or below V(r0).
double quantization_residual(double energy, const QuantumNumbers& qn,
                             const RadialProblem& problem,
                             ActionMethod method = ActionMethod::quadrature_rho);

struct SolveOptions {
    ActionMethod method = ActionMethod::quadrature_rho;
    double energy_cap = 1e12;
    double rel_tol = 1e-10;
};

/// Energy of level qn from the quantization condition.
/// Throws NumericalError(bracket_failure) if no sign change below energy_cap.
EigenResult solve_wkb(const QuantumNumbers& qn, const RadialProblem& problem,
                      const SolveOptions& opts = {});

/// Connection-formula WKB radial function u(rho) with free amplitude A.
///
///   region I  (rho < rho_t): A / sqrt(kappa) exp(-int_rho^{rho_t} kappa)
///   region II (rho > rho_t): 2A / sqrt(Gamma) sin(int_{rho_t}^rho Gamma + pi/4)
///
/// with kappa^2 = -Gamma^2. Neither branch is evaluated within delta of rho_t.
class WkbWavefunction {
public:
    enum class Region { forbidden, allowed };

    WkbWavefunction(const RadialProblem& problem, double energy,
                    double amplitude = 1.0);

    const RadialProblem& problem() const noexcept { return problem_; }
    double energy() const noexcept { return energy_; }
    double amplitude() const noexcept { return amplitude_; }
    double turning_point() const noexcept { return rho_t_; }
    /// Exclusion half-width around the turning point, 1e-3 rho_t.
    double delta() const noexcept { return 1e-3 * rho_t_; }

    bool excluded(double rho) const noexcept;
    Region region(double rho) const noexcept;

    /// Throws NumericalError(turning_point_neighborhood) within delta of rho_t
    /// and std::domain_error outside (0, r0].
    double operator()(double rho) const;

    /// Accumulated phase int_{rho_t}^{rho} Gamma drho for rho > rho_t.
    double phase(double rho) const;

private:
    RadialProblem problem_;
    double energy_;
    double amplitude_;
    double rho_t_;
};

double wkb_wavefunction_eval(const WkbWavefunction& wf, double rho);

} // namespace qdot::wkb
