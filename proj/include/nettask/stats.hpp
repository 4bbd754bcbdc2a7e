#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "nettask/types.hpp"

namespace nettask {

// Lower-middle median: for an even count, the smaller of the two middle
// elements. No interpolation, so integer-ratio inputs give exact results.
template <typename Derived>
typename Derived::Scalar lower_median(const Eigen::DenseBase<Derived>& values) {
    if (values.size() == 0) throw InputError("median of empty sample");
    std::vector<typename Derived::Scalar> v(values.derived().data(),
                                            values.derived().data() + values.size());
    auto mid = v.begin() + (static_cast<std::ptrdiff_t>(v.size()) - 1) / 2;
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

template <typename T>
T lower_median(std::vector<T> v) {
    if (v.empty()) throw InputError("median of empty sample");
    auto mid = v.begin() + (static_cast<std::ptrdiff_t>(v.size()) - 1) / 2;
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

// Population standard deviation.
template <typename Derived>
typename Derived::Scalar population_stddev(const Eigen::DenseBase<Derived>& x) {
    using S = typename Derived::Scalar;
    if (x.size() == 0) throw InputError("stddev of empty sample");
    const S mu = x.mean();
    return std::sqrt((x.derived().array() - mu).square().mean());
}

struct LinearFit {
    std::optional<double> slope;
    std::optional<double> intercept;
    std::optional<double> pearson_r;
};

// Ordinary least squares y ~ slope * x + intercept, with Pearson r.
// A constant x leaves slope/intercept undefined; a constant y (or x) leaves r
// undefined.
template <typename DX, typename DY>
LinearFit ols_fit(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
    if (x.size() != y.size()) throw InputError("ols_fit: size mismatch");
    if (x.size() < 2) throw InputError("ols_fit: need at least two points");
    const Eigen::ArrayXd xc = x.template cast<double>().array() - x.template cast<double>().mean();
    const Eigen::ArrayXd yc = y.template cast<double>().array() - y.template cast<double>().mean();
    const double sxx = (xc * xc).sum();
    const double syy = (yc * yc).sum();
    const double sxy = (xc * yc).sum();
    LinearFit fit;
    if (sxx > 0.0) {
        fit.slope = sxy / sxx;
        fit.intercept = y.template cast<double>().mean() - *fit.slope * x.template cast<double>().mean();
    }
    if (sxx > 0.0 && syy > 0.0) fit.pearson_r = sxy / std::sqrt(sxx * syy);
    return fit;
}

}  // namespace nettask
