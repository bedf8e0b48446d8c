#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "nlslab/common.hpp"

namespace nlslab {

// Centered periodic grid for 1-D or 2-D fields. Nodes along an axis sit at
// x_j = -L/2 + j*dx, j = 0..n-1, dx = L/n, n a power of two. The conjugate
// frequency nodes are xi_k = (2*pi/L)*m_k with m_k = k for k <= n/2 and
// k - n otherwise, spanning (-pi*n/L, pi*n/L].
struct SpectralGrid {
    int dim = 1;
    std::array<int, 2> n{0, 0};
    std::array<double, 2> length{0.0, 0.0};

    static SpectralGrid make1d(int n0, double L0);
    static SpectralGrid make2d(int n0, double L0, int n1, double L1);

    double dx(int axis) const { return length[axis] / n[axis]; }
    double x(int axis, int j) const { return -0.5 * length[axis] + j * dx(axis); }
    int freq_index(int axis, int k) const { return k <= n[axis] / 2 ? k : k - n[axis]; }
    double xi(int axis, int k) const { return 2.0 * PI * freq_index(axis, k) / length[axis]; }
    double nyquist(int axis) const { return PI * n[axis] / length[axis]; }
    double max_abs_x(int axis) const { return 0.5 * length[axis]; }

    std::size_t size() const;
    double cell_volume() const;       // product of dx over axes
    double cell_volume_freq() const;  // product of (2*pi/L) over axes

    bool operator==(const SpectralGrid& o) const = default;
};

// Complex-valued samples over a SpectralGrid, row-major (axis 0 slow).
// The same storage carries either spatial samples (at x-nodes) or spectral
// samples (at xi-nodes, wrapped order); ops document which side they expect.
struct ComplexField {
    SpectralGrid grid;
    std::vector<cplx> v;

    static ComplexField zeros(const SpectralGrid& g);

    std::size_t idx(int i0, int i1 = 0) const {
        return grid.dim == 1 ? static_cast<std::size_t>(i0)
                             : static_cast<std::size_t>(i0) * grid.n[1] + i1;
    }

    double norm_l2() const;       // spatial-side L2 (dx weights)
    double norm_l2_freq() const;  // spectral-side L2 (dxi weights)
    double norm_sup() const;
};

// || f - g ||_2 on the spatial side; grids must match.
double l2_distance(const ComplexField& f, const ComplexField& g);

}  // namespace nlslab
