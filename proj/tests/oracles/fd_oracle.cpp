#include "fd_oracle.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qdot::oracle {

double fd_eigenvalue(double r0, double z, int m, int n_r, int cells)
{
    const double h = r0 / (cells + 0.5);
    std::vector<double> diag(cells), off(cells > 1 ? cells - 1 : 1);
    for (int i = 0; i < cells; ++i) {
        const double r = (i + 0.5) * h;
        const double r_in = r - 0.5 * h;
        const double r_out = r + 0.5 * h;
        const double a = (r_in + r_out) / (h * h) + z + m * m / r;
        diag[i] = a / r;
        if (i + 1 < cells) {
            const double r_next = r + h;
            off[i] = -r_out / (h * h) / std::sqrt(r * r_next);
        }
    }
    lapack_int found = 0, nsplit = 0, info = 0;
    std::vector<double> w(cells);
    std::vector<lapack_int> iblock(cells), isplit(cells);
    const lapack_int k = n_r + 1;
    info = LAPACKE_dstebz('I', 'E', cells, 0.0, 0.0, k, k, 0.0, diag.data(), off.data(),
                          &found, &nsplit, w.data(), iblock.data(), isplit.data());
    if (info != 0 || found != 1)
        throw std::runtime_error("dstebz failed");
    return w[0];
}

double fd_eigenvalue_extrapolated(double r0, double z, int m, int n_r, int cells)
{
    const double e1 = fd_eigenvalue(r0, z, m, n_r, cells);
    const double e2 = fd_eigenvalue(r0, z, m, n_r, 2 * cells);
    const double e4 = fd_eigenvalue(r0, z, m, n_r, 4 * cells);
    const double r12 = (4.0 * e2 - e1) / 3.0;
    const double r24 = (4.0 * e4 - e2) / 3.0;
    return (16.0 * r24 - r12) / 15.0;
}

} // namespace qdot::oracle
