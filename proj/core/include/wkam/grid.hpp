#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wkam {

// All domain vectors live in at most two dimensions (tori T^1 and T^2).
using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec2& a, int dim) { return std::sqrt(dot(a, a, dim)); }

// Wrap a real number into [0,1).
inline double wrap01(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y = 0.0;  // guard against floor rounding
    return y;
}

// Signed representative of x mod 1 in [-1/2, 1/2).
inline double wrap_half(double x) {
    double y = x - std::round(x);
    if (y < -0.5) y += 1.0;
    if (y >= 0.5) y -= 1.0;
    return y;
}

struct WkamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridTooLargeError : WkamError { using WkamError::WkamError; };
struct InvalidCoverError : WkamError { using WkamError::WkamError; };
struct ModelEvaluationError : WkamError { using WkamError::WkamError; };
struct IntegrationEscapeError : WkamError { using WkamError::WkamError; };
struct NonConvergenceError : WkamError { using WkamError::WkamError; };
struct AlphaTooLooseError : WkamError { using WkamError::WkamError; };
struct ToleranceTooTightError : WkamError { using WkamError::WkamError; };
struct BarrierTooCoarseError : WkamError { using WkamError::WkamError; };
struct ObstructionError : WkamError { using WkamError::WkamError; };
struct NoConnectionError : WkamError { using WkamError::WkamError; };
struct BrokenCalibrationError : WkamError { using WkamError::WkamError; };
struct AcyclicityError : WkamError { using WkamError::WkamError; };
struct NumericalInconsistencyError : WkamError { using WkamError::WkamError; };

// Point of the torus T^d, fractional coordinates in [0,1).
struct TorusPoint {
    Vec2 coords{0.0, 0.0};
    int dim = 1;

    TorusPoint() = default;
    TorusPoint(double q, int d = 1) : coords{wrap01(q), 0.0}, dim(d) {}
    TorusPoint(double q1, double q2) : coords{wrap01(q1), wrap01(q2)}, dim(2) {}

    double operator[](int i) const { return coords[i]; }
};

// Shortest periodic distance between two torus points.
inline double torus_dist(const TorusPoint& a, const TorusPoint& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim; ++i) {
        double d = wrap_half(a.coords[i] - b.coords[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

// Constant one-form c.dq on T^d, the standard representative of a class
// in H^1(T^d, R).
struct CohomologyClass {
    Vec2 components{0.0, 0.0};
    int dim = 1;

    CohomologyClass() = default;
    explicit CohomologyClass(double c1, int d = 1) : components{c1, 0.0}, dim(d) {}
    CohomologyClass(double c1, double c2) : components{c1, c2}, dim(2) {}

    double operator[](int i) const { return components[i]; }
    double norm() const { return wkam::norm(components, dim); }
};

inline CohomologyClass operator-(const CohomologyClass& a, const CohomologyClass& b) {
    CohomologyClass r = a;
    for (int i = 0; i < a.dim; ++i) r.components[i] = a.components[i] - b.components[i];
    return r;
}

// Point of T^*T^d in the standard trivialization.
struct PhasePoint {
    TorusPoint position;
    Vec2 momentum{0.0, 0.0};
};

inline double phase_dist(const PhasePoint& a, const PhasePoint& b) {
    double dp = 0.0;
    for (int i = 0; i < a.position.dim; ++i) {
        double d = a.momentum[i] - b.momentum[i];
        dp += d * d;
    }
    return std::sqrt(torus_dist(a.position, b.position) * torus_dist(a.position, b.position) + dp);
}

// Periodic rectangular grid on T^d.  Points are cell corners i*h.
struct SpatialGrid {
    std::array<int, 2> sizes{1, 1};
    int dim = 1;

    SpatialGrid() = default;
    explicit SpatialGrid(int n) : sizes{n, 1}, dim(1) {}
    SpatialGrid(int n1, int n2) : sizes{n1, n2}, dim(2) {}

    int count() const { return sizes[0] * (dim == 2 ? sizes[1] : 1); }
    double spacing(int axis) const { return 1.0 / sizes[axis]; }
    double max_spacing() const {
        double h = spacing(0);
        if (dim == 2) h = std::max(h, spacing(1));
        return h;
    }

    int wrap_index(int axis, int i) const {
        int n = sizes[axis];
        int r = i % n;
        return r < 0 ? r + n : r;
    }

    int index(int i, int j = 0) const {
        if (dim == 1) return wrap_index(0, i);
        return wrap_index(0, i) * sizes[1] + wrap_index(1, j);
    }

    std::array<int, 2> coords(int idx) const {
        if (dim == 1) return {idx, 0};
        return {idx / sizes[1], idx % sizes[1]};
    }

    TorusPoint point(int idx) const {
        auto c = coords(idx);
        TorusPoint p;
        p.dim = dim;
        p.coords[0] = c[0] * spacing(0);
        if (dim == 2) p.coords[1] = c[1] * spacing(1);
        return p;
    }

    int shift(int idx, int axis, int step) const {
        auto c = coords(idx);
        c[axis] += step;
        return index(c[0], c[1]);
    }

    bool operator==(const SpatialGrid& o) const {
        return dim == o.dim && sizes == o.sizes;
    }
};

// Real function sampled on a periodic grid; carrier of weak KAM solutions,
// barrier slices and pseudograph potentials.
struct GridFunction {
    SpatialGrid grid;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(const SpatialGrid& g, double fill = 0.0)
        : grid(g), values(static_cast<size_t>(g.count()), fill) {}

    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }
    int size() const { return grid.count(); }

    double min() const { return *std::min_element(values.begin(), values.end()); }
    double max() const { return *std::max_element(values.begin(), values.end()); }
    double span() const { return max() - min(); }

    int argmin() const {
        return static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
    }

    // Shift so that min = 0.
    void normalize_min() {
        double m = min();
        for (double& v : values) v -= m;
    }

    GridFunction& operator+=(double a) {
        for (double& v : values) v += a;
        return *this;
    }
};

inline double sup_dist(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

// Distance in S/R (functions modulo additive constants).
inline double quotient_dist(const GridFunction& a, const GridFunction& b) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (size_t i = 0; i < a.values.size(); ++i) {
        double d = a.values[i] - b.values[i];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return (hi - lo) / 2.0;
}

}  // namespace wkam
