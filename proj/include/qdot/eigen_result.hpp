#pragma once

namespace qdot {

/// An energy eigenvalue with solver diagnostics.
struct EigenResult {
    double energy = 0.0;
    int node_count = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    /// WKB: quantization residual at the root. Numerov: chi(w_max) / max|chi|.
    double endpoint_residual = 0.0;
    /// Richardson estimate of the remaining discretization error (0 for WKB).
    double mesh_error_estimate = 0.0;
    /// Finest mesh used by the Numerov solver (0 for WKB).
    int n_intervals_used = 0;
};

} // namespace qdot
