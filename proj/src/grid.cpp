#include "nlslab/grid.hpp"

#include <cmath>

#include "nlslab/fft.hpp"

namespace nlslab {

namespace {
void check_axis(int n, double L) {
    if (n < 8 || !fft::is_pow2(static_cast<std::size_t>(n)))
        throw domain_error("grid: points per axis must be a power of two >= 8");
    if (!(L > 0.0) || !std::isfinite(L)) throw domain_error("grid: length must be positive");
}
}  // namespace

SpectralGrid SpectralGrid::make1d(int n0, double L0) {
    check_axis(n0, L0);
    SpectralGrid g;
    g.dim = 1;
    g.n = {n0, 1};
    g.length = {L0, 0.0};
    return g;
}

SpectralGrid SpectralGrid::make2d(int n0, double L0, int n1, double L1) {
    check_axis(n0, L0);
    check_axis(n1, L1);
    SpectralGrid g;
    g.dim = 2;
    g.n = {n0, n1};
    g.length = {L0, L1};
    return g;
}

std::size_t SpectralGrid::size() const {
    std::size_t s = static_cast<std::size_t>(n[0]);
    if (dim == 2) s *= static_cast<std::size_t>(n[1]);
    return s;
}

double SpectralGrid::cell_volume() const {
    double v = dx(0);
    if (dim == 2) v *= dx(1);
    return v;
}

double SpectralGrid::cell_volume_freq() const {
    double v = 2.0 * PI / length[0];
    if (dim == 2) v *= 2.0 * PI / length[1];
    return v;
}

ComplexField ComplexField::zeros(const SpectralGrid& g) {
    ComplexField f;
    f.grid = g;
    f.v.assign(g.size(), cplx(0.0, 0.0));
    return f;
}

double ComplexField::norm_l2() const {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s * grid.cell_volume());
}

double ComplexField::norm_l2_freq() const {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s * grid.cell_volume_freq());
}

double ComplexField::norm_sup() const {
    double m = 0.0;
    for (const cplx& z : v) m = std::max(m, std::abs(z));
    return m;
}

double l2_distance(const ComplexField& f, const ComplexField& g) {
    if (!(f.grid == g.grid)) throw domain_error("l2_distance: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i) s += std::norm(f.v[i] - g.v[i]);
    return std::sqrt(s * f.grid.cell_volume());
}

}  // namespace nlslab
