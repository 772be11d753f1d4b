#pragma once

#include <functional>
#include <vector>

namespace confheat {

/// Uniform-grid tabulation of a function of (|z|, |sigma|) with bicubic
/// (Catmull-Rom) interpolation. Both coordinates are even at 0, so the 0-edges
/// use reflected ghost values; the far edges clamp (the tabulated kernels have
/// decayed to the tail cut there). Built once, then read-only.
class RadialTable2D {
public:
    RadialTable2D(const std::function<double(double, double)>& eval,
                  double z_max, double s_max, int nz, int ns);

    double operator()(double znorm, double signorm) const;

    double z_max() const { return z_max_; }
    double s_max() const { return s_max_; }

private:
    double at(int i, int j) const;

    double z_max_, s_max_;
    int nz_, ns_;
    double hz_, hs_;
    std::vector<double> v_; // row-major [nz_ x ns_]
};

} // namespace confheat
