#include "confheat/table.hpp"

#include <cmath>
#include <stdexcept>

namespace confheat {

namespace {

// Catmull-Rom cubic through p0..p3 evaluated at fractional position t in [0,1]
// between p1 and p2; reproduces cubics on uniform grids.
inline double catmull_rom(double p0, double p1, double p2, double p3, double t) {
    return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                          t * (3.0 * (p1 - p2) + p3 - p0)));
}

} // namespace

RadialTable2D::RadialTable2D(const std::function<double(double, double)>& eval,
                             double z_max, double s_max, int nz, int ns)
    : z_max_(z_max), s_max_(s_max), nz_(nz), ns_(ns) {
    if (!(z_max > 0.0) || !(s_max > 0.0) || nz < 8 || ns < 8)
        throw std::invalid_argument("RadialTable2D: invalid grid parameters");
    hz_ = z_max_ / (nz_ - 1);
    hs_ = s_max_ / (ns_ - 1);
    v_.resize(static_cast<std::size_t>(nz_) * ns_);
    for (int i = 0; i < nz_; ++i)
        for (int j = 0; j < ns_; ++j)
            v_[static_cast<std::size_t>(i) * ns_ + j] = eval(i * hz_, j * hs_);
}

double RadialTable2D::at(int i, int j) const {
    if (i < 0) i = -i;           // even reflection across |z| = 0
    if (j < 0) j = -j;           // even reflection across |sigma| = 0
    if (i > nz_ - 1) i = nz_ - 1; // clamp in the decayed tail
    if (j > ns_ - 1) j = ns_ - 1;
    return v_[static_cast<std::size_t>(i) * ns_ + j];
}

double RadialTable2D::operator()(double znorm, double signorm) const {
    znorm = std::abs(znorm);
    signorm = std::abs(signorm);
    if (znorm >= z_max_ || signorm >= s_max_)
        return 0.0; // beyond the envelope truncation of the table
    const double fz = znorm / hz_;
    const double fs = signorm / hs_;
    int i = static_cast<int>(fz);
    int j = static_cast<int>(fs);
    if (i > nz_ - 2) i = nz_ - 2;
    if (j > ns_ - 2) j = ns_ - 2;
    const double tz = fz - i;
    const double ts = fs - j;
    double col[4];
    for (int d = -1; d <= 2; ++d)
        col[d + 1] = catmull_rom(at(i + d, j - 1), at(i + d, j), at(i + d, j + 1), at(i + d, j + 2), ts);
    return catmull_rom(col[0], col[1], col[2], col[3], tz);
}

} // namespace confheat
