#include "qdot/numerov.hpp"

#include "qdot/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qdot::numerov {

namespace {

constexpr double overflow_guard = 1e250;

int sign_of(double x) noexcept { return (x > 0.0) - (x < 0.0); }

} // namespace

LogMesh::LogMesh(double w_min_, double w_max_, int n_intervals_)
    : w_min(w_min_), w_max(w_max_), n_intervals(n_intervals_)
{
    if (!(w_min < w_max))
        throw std::domain_error("LogMesh: w_min must be below w_max");
    if (n_intervals < 64)
        throw std::domain_error("LogMesh: at least 64 intervals required");
}

double gamma_sq_w(double w, double energy, const RadialProblem& problem)
{
    const double r = std::exp(w);
    return r * (r * energy - problem.coulomb_strength) - problem.m_sq();
}

LogMesh build_mesh(const RadialProblem& problem, double energy_hint, int n_intervals)
{
    if (!(energy_hint > 0.0))
        throw std::domain_error("build_mesh: energy hint must be positive");
    double rho_t = turning_point_unchecked(energy_hint, problem);
    if (!(rho_t > 0.0))
        rho_t = problem.r0;
    const double w_max = std::log(problem.r0);
    const double w_min = std::log(std::min(rho_t, problem.r0)) - origin_margin;
    return LogMesh(w_min, w_max, n_intervals);
}

Propagation numerov_propagate(double energy, const LogMesh& mesh,
                              const RadialProblem& problem)
{
    const int n = mesh.n_intervals;
    const double h = mesh.h();
    const double h2_12 = h * h / 12.0;
    const double z = problem.coulomb_strength;
    const double msq = problem.m_sq();
    const int am = problem.abs_m();

    Propagation out;
    out.chi.resize(static_cast<std::size_t>(n) + 1);
    auto& chi = out.chi;

    auto weight = [&](int i) {
        const double r = std::exp(mesh.w(i));
        return 1.0 + h2_12 * (r * (r * energy - z) - msq);
    };

    // Regular series about the origin, scaled by e^{-|m| w_min}.
    const double a = z / (2.0 * am + 1.0);
    const double b = (a * z - energy) / (4.0 * am + 4.0);
    auto series = [&](int i) {
        const double r = std::exp(mesh.w(i));
        return std::exp(am * (mesh.w(i) - mesh.w_min)) * (1.0 + r * (a + b * r));
    };
    chi[0] = series(0);
    chi[1] = series(1);

    double f_prev = weight(0);
    double f_cur = weight(1);
    for (int i = 1; i < n; ++i) {
        const double f_next = weight(i + 1);
        chi[i + 1] = ((12.0 - 10.0 * f_cur) * chi[i] - f_prev * chi[i - 1]) / f_next;
        if (std::abs(chi[i + 1]) > overflow_guard) {
            for (int k = 0; k <= i + 1; ++k)
                chi[k] /= overflow_guard;
        }
        if (!std::isfinite(chi[i + 1])) {
            std::ostringstream os;
            os << "overflow; rescaling failed at w = " << mesh.w(i + 1)
               << ", E = " << energy;
            throw NumericalError(NumericalError::Kind::overflow, os.str());
        }
        f_prev = f_cur;
        f_cur = f_next;
    }

    int last = 0;
    for (int i = 0; i <= n; ++i) {
        const int s = sign_of(chi[i]);
        if (s != 0) {
            if (last != 0 && s != last) {
                ++out.crossings;
                if (i < n)
                    ++out.node_count;
            }
            last = s;
        }
        out.max_abs = std::max(out.max_abs, std::abs(chi[i]));
    }
    out.endpoint_value = chi[n];
    return out;
}

EigenResult shoot_on_mesh(const QuantumNumbers& qn, const RadialProblem& problem,
                          const LogMesh& mesh, double lo, double hi,
                          const ExactOptions& opts)
{
    if (qn.n_r < 0)
        throw std::domain_error("shoot_on_mesh: n_r must be >= 0");
    if (!(lo > 0.0) || !(hi > lo))
        throw std::domain_error("shoot_on_mesh: need 0 < lo < hi");
    const int target = qn.n_r;
    auto above = [&](double e) {
        return numerov_propagate(e, mesh, problem).crossings > target;
    };

    int doublings = 0;
    auto exhausted = [&] {
        std::ostringstream os;
        os << "bracket exhausted after " << opts.max_bracket_doublings
           << " doublings (n_r = " << target << ", r0 = " << problem.r0 << ")";
        throw NumericalError(NumericalError::Kind::bracket_exhausted, os.str());
    };
    while (above(lo)) {
        lo *= 0.5;
        if (++doublings > opts.max_bracket_doublings)
            exhausted();
    }
    while (!above(hi)) {
        hi *= 2.0;
        if (++doublings > opts.max_bracket_doublings)
            exhausted();
    }

    while (hi - lo > opts.bisection_rel_width * hi) {
        const double mid = 0.5 * (lo + hi);
        if (above(mid))
            hi = mid;
        else
            lo = mid;
    }

    // The endpoint value changes sign across the level; one secant step on
    // the scale-free endpoint value pins E well inside the final bracket.
    const auto p_lo = numerov_propagate(lo, mesh, problem);
    const auto p_hi = numerov_propagate(hi, mesh, problem);
    const double y_lo = p_lo.endpoint_value / p_lo.max_abs;
    const double y_hi = p_hi.endpoint_value / p_hi.max_abs;
    double energy = 0.5 * (lo + hi);
    if (sign_of(y_lo) != sign_of(y_hi) && y_hi != y_lo)
        energy = std::clamp(lo - y_lo * (hi - lo) / (y_hi - y_lo), lo, hi);

    const auto p = numerov_propagate(energy, mesh, problem);
    EigenResult out;
    out.energy = energy;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    out.node_count = p.node_count;
    out.endpoint_residual = p.endpoint_value / p.max_abs;
    out.n_intervals_used = mesh.n_intervals;
    return out;
}

EigenResult solve_exact(const QuantumNumbers& qn, const RadialProblem& problem,
                        const ExactOptions& opts)
{
    const double e_wkb = wkb::solve_wkb(qn, problem).energy;
    LogMesh mesh = build_mesh(problem, e_wkb, opts.n_intervals);
    EigenResult coarse = shoot_on_mesh(qn, problem, mesh, 0.5 * e_wkb, 2.0 * e_wkb, opts);

    for (int k = 0; k < opts.max_mesh_doublings; ++k) {
        mesh = mesh.refined();
        const double e = coarse.energy;
        EigenResult fine =
            shoot_on_mesh(qn, problem, mesh, e * (1.0 - 1e-4), e * (1.0 + 1e-4), opts);
        const double diff = fine.energy - coarse.energy;
        if (std::abs(diff) <= opts.mesh_rel_tol * std::abs(fine.energy)) {
            EigenResult out = fine;
            out.energy = fine.energy + diff / 15.0;
            out.mesh_error_estimate = std::abs(diff) / 15.0;
            out.bracket_lo = std::min(fine.bracket_lo, out.energy);
            out.bracket_hi = std::max(fine.bracket_hi, out.energy);
            return out;
        }
        coarse = fine;
    }
    std::ostringstream os;
    os << "mesh not converged after " << opts.max_mesh_doublings
       << " doublings (n_r = " << qn.n_r << ", r0 = " << problem.r0 << ")";
    throw NumericalError(NumericalError::Kind::mesh_not_converged, os.str());
}

RadialWavefunction::RadialWavefunction(LogMesh mesh, std::vector<double> chi)
    : mesh_(mesh), chi_(std::move(chi))
{
    if (static_cast<int>(chi_.size()) != mesh_.size())
        throw std::invalid_argument("RadialWavefunction: chi does not match mesh");
}

double RadialWavefunction::r(int i) const { return std::exp(mesh_.w(i)); }

double RadialWavefunction::u(int i) const
{
    return std::exp(0.5 * mesh_.w(i)) * chi_.at(i);
}

double RadialWavefunction::psi_at(double r) const
{
    if (!(r > 0.0))
        throw std::domain_error("psi_at: r must be positive");
    const double w = std::log(r);
    const double h = mesh_.h();
    const int n = mesh_.n_intervals;
    const double x = (w - mesh_.w_min) / h;
    const int i0 = std::clamp(static_cast<int>(std::floor(x)) - 1, 0, n - 3);
    double sum = 0.0;
    for (int j = 0; j < 4; ++j) {
        double basis = 1.0;
        for (int k = 0; k < 4; ++k)
            if (k != j)
                basis *= (x - (i0 + k)) / static_cast<double>(j - k);
        sum += basis * chi_[i0 + j];
    }
    return sum;
}

double RadialWavefunction::u_at(double r) const { return std::sqrt(r) * psi_at(r); }

int RadialWavefunction::node_count() const
{
    int count = 0;
    int last = 0;
    for (std::size_t i = 0; i + 1 < chi_.size(); ++i) {
        const int s = sign_of(chi_[i]);
        if (s != 0) {
            if (last != 0 && s != last)
                ++count;
            last = s;
        }
    }
    return count;
}

double RadialWavefunction::norm_integral() const
{
    const int n = mesh_.n_intervals;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double value = chi_[i] * chi_[i] * std::exp(2.0 * mesh_.w(i));
        sum += (i == 0 || i == n) ? 0.5 * value : value;
    }
    return sum * mesh_.h();
}

RadialWavefunction wavefunction_exact(const EigenResult& result, const LogMesh& mesh,
                                      const RadialProblem& problem)
{
    auto p = numerov_propagate(result.energy, mesh, problem);
    RadialWavefunction raw(mesh, std::move(p.chi));
    double scale = 1.0 / std::sqrt(raw.norm_integral());
    if (raw.psi(0) < 0.0)
        scale = -scale;
    std::vector<double> chi(raw.chi().begin(), raw.chi().end());
    for (double& c : chi)
        c *= scale;
    return RadialWavefunction(mesh, std::move(chi));
}

} // namespace qdot::numerov
