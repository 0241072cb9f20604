#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mtlab/dimension.hpp"

namespace mtlab {

/// Uniform grid in the Moser variable t = -N ln r.  Radii r = e^{-t/N} are
/// strictly decreasing along the node order.  Quadrature weights carry the
/// radial Jacobian: integral u(r)^p r^{N-1} dr over (0,inf) becomes
/// (1/N) sum_i w_i u_i^p with w_i = e^{-t_i} h (halved at the window ends).
class RadialGrid {
public:
    RadialGrid(const Dimension& dim, double t_min, double t_max, double h);

    /// The default window t in [-20, 60], h = 0.01.
    static RadialGrid standard(const Dimension& dim);

    const Dimension& dim() const { return dim_; }
    int size() const { return static_cast<int>(data_->t.size()); }
    double spacing() const { return h_; }
    double t_min() const { return data_->t.front(); }
    double t_max() const { return data_->t.back(); }

    std::span<const double> t_nodes() const { return data_->t; }
    std::span<const double> r_nodes() const { return data_->r; }
    std::span<const double> quad_weights() const { return data_->w; }

    /// Same spacing and node count, window translated by dt. Node values of a
    /// profile carried over to the shifted grid represent u(e^{dt/N} r).
    RadialGrid shifted(double dt) const;

private:
    struct Data {
        std::vector<double> t, r, w;
    };

    Dimension dim_;
    std::shared_ptr<const Data> data_;
    double h_ = 0.0;
};

/// Function on the Moser line: w(t) sampled on a uniform t-grid.
struct LineProfile {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<double> w;

    double t_at(int i) const { return t0 + i * h; }
};

}  // namespace mtlab
