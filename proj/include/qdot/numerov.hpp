#pragma once

// Shooting solver for chi'' + Gamma^2(w) chi = 0 on a uniform mesh in
// w = ln r, with Gamma^2(w) = e^{2w}(E - Z e^{-w}) - m^2. In r-space this is
// the physical 2D radial equation with centrifugal coefficient m^2 - 1/4;
// chi(w) = psi(r) = e^{-w/2} u(r).

#include "qdot/eigen_result.hpp"
#include "qdot/model.hpp"

#include <span>
#include <vector>

namespace qdot::numerov {

struct LogMesh {
    double w_min = 0.0;
    double w_max = 0.0;
    int n_intervals = 0;

    LogMesh() = default;
    LogMesh(double w_min_, double w_max_, int n_intervals_);

    double h() const noexcept { return (w_max - w_min) / n_intervals; }
    double w(int i) const noexcept { return w_min + i * h(); }
    int size() const noexcept { return n_intervals + 1; }
    LogMesh refined() const { return LogMesh(w_min, w_max, 2 * n_intervals); }
};

inline constexpr int default_intervals = 16384;
inline constexpr double origin_margin = 14.0;

double gamma_sq_w(double w, double energy, const RadialProblem& problem);

/// w_max = ln r0, w_min = ln(min(rho_t(E_hint), r0)) - 14.
LogMesh build_mesh(const RadialProblem& problem, double energy_hint,
                   int n_intervals = default_intervals);

struct Propagation {
    double endpoint_value = 0.0;
    /// Strict sign changes among chi_0 .. chi_{N-1}.
    int node_count = 0;
    /// Sign changes among chi_0 .. chi_N (counts a node that reached the wall).
    int crossings = 0;
    double max_abs = 0.0;
    std::vector<double> chi;
};

/// Outward Numerov integration started from the regular series
/// chi ~ e^{|m| w}(1 + a e^w + b e^{2w}).
Propagation numerov_propagate(double energy, const LogMesh& mesh,
                              const RadialProblem& problem);

struct ExactOptions {
    int n_intervals = default_intervals;
    int max_mesh_doublings = 4;
    int max_bracket_doublings = 60;
    double bisection_rel_width = 1e-10;
    double mesh_rel_tol = 1e-8;
};

/// Eigenvalue with n_r interior nodes on one fixed mesh (no extrapolation).
/// [lo, hi] must straddle the level or it is widened by doubling.
EigenResult shoot_on_mesh(const QuantumNumbers& qn, const RadialProblem& problem,
                          const LogMesh& mesh, double lo, double hi,
                          const ExactOptions& opts = {});

/// Bracket from the WKB estimate, node-count bisection, mesh doubling until
/// |E_N - E_2N| / E <= mesh_rel_tol, Richardson-extrapolated result.
EigenResult solve_exact(const QuantumNumbers& qn, const RadialProblem& problem,
                        const ExactOptions& opts = {});

class RadialWavefunction {
public:
    RadialWavefunction(LogMesh mesh, std::vector<double> chi);

    const LogMesh& mesh() const noexcept { return mesh_; }
    std::span<const double> chi() const noexcept { return chi_; }

    double r(int i) const;
    double psi(int i) const { return chi_.at(i); }
    double u(int i) const;

    /// psi at arbitrary r in [e^{w_min}, r0], 4-point Lagrange in w.
    double psi_at(double r) const;
    double u_at(double r) const;

    int node_count() const;
    /// int psi^2 r dr = int chi^2 e^{2w} dw, trapezoidal on the mesh.
    double norm_integral() const;

private:
    LogMesh mesh_;
    std::vector<double> chi_;
};

/// chi at result.energy on mesh, normalized so that int psi^2 r dr = 1 and
/// psi > 0 near the origin.
RadialWavefunction wavefunction_exact(const EigenResult& result, const LogMesh& mesh,
                                      const RadialProblem& problem);

} // namespace qdot::numerov
