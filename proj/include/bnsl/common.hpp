// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef BNSL_COMMON_HPP
#define BNSL_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace bnsl {

// Invalid arguments, malformed files, or values outside a function's domain.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Problem size beyond one of the documented hard caps.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Natural log-gamma for strictly positive arguments. Every Gamma ratio in the
// score family is evaluated in log space through this single routine, so that
// hyperparameters as small as alpha/(r*q) with alpha = 0.01 cannot underflow.
inline double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw DataError("log_gamma: argument must be positive, got " + std::to_string(x));
    }
    return std::lgamma(x);
}

// Dense q-by-r table of reals: one row per parent configuration, one column
// per child state. Shared layout for Dirichlet hyperparameters, EAP estimates
// and conditional probability rows.
struct Table {
    int q = 0;
    int r = 0;
    std::vector<double> v;

    Table() = default;
    Table(int q_, int r_, double fill = 0.0)
        : q(q_), r(r_), v(static_cast<std::size_t>(q_) * static_cast<std::size_t>(r_), fill) {
        if (q_ < 0 || r_ < 0) throw DataError("Table: negative dimension");
    }

    double& operator()(int j, int k) { return v[static_cast<std::size_t>(j) * r + k]; }
    double operator()(int j, int k) const { return v[static_cast<std::size_t>(j) * r + k]; }

    double row_sum(int j) const {
        double s = 0.0;
        for (int k = 0; k < r; ++k) s += (*this)(j, k);
        return s;
    }
};

// All floating-point text output uses 12 significant digits.
inline std::string format_g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace bnsl

#endif  // BNSL_COMMON_HPP
