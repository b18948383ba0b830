#include "xreg/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xreg/rng.hpp"

namespace xreg {

double sigmoid(double t) {
    if (t >= 0.0) {
        double z = std::exp(-t);
        double v = 1.0 / (1.0 + z);
        return std::min(v, 1.0 - std::numeric_limits<double>::epsilon() / 2);
    }
    double z = std::exp(t);
    double v = z / (1.0 + z);
    return std::max(v, std::numeric_limits<double>::min());
}

double log_sigmoid(double t) {
    if (t >= 0.0) return -std::log1p(std::exp(-t));
    return t - std::log1p(std::exp(t));
}

double predict_prob(const LinearRegressor& r, const SparseVector& x) {
    return sigmoid(dot(r.w, x));
}

namespace {

// log(1 + exp(t)) without overflow.
double log1p_exp(double t) {
    if (t > 0.0) return t + std::log1p(std::exp(-t));
    return std::log1p(std::exp(t));
}

void axpy_sparse(double a, const SparseVector& x, std::vector<double>& w) {
    for (std::size_t i = 0; i < x.size(); ++i) w[x.indices[i]] += a * x.values[i];
}

double dot_sparse_dense(const SparseVector& x, const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[x.indices[i]] * x.values[i];
    return s;
}

} // namespace

double weighted_logistic_objective(const std::vector<WeightedExample>& examples,
                                   const std::vector<SparseVector>& points,
                                   const SparseVector& w, double cost) {
    double obj = norm2_squared(w);
    double loss = 0.0;
    for (const WeightedExample& e : examples) {
        double t = dot(w, points[e.point]);
        if (e.pos > 0.0) loss += e.pos * log1p_exp(-t);
        if (e.neg > 0.0) loss += e.neg * log1p_exp(t);
    }
    return obj + cost * loss;
}

// Dual variables follow liblinear's CDDual (Algorithm 5, Yu et al. 2011): the
// dual of 0.5|w|^2 + sum_j U_j log(1+exp(-y_j w.x_j)) is
//   min_a 0.5 a'Qa + sum_j a_j log a_j + (U_j - a_j) log(U_j - a_j)
// with 0 <= a_j <= U_j and w = sum_j a_j y_j x_j. Minimizing the objective in
// the header equals minimizing the standard form with U_j = cost*weight_j/2.
LinearRegressor solve_logistic_dual(const std::vector<WeightedExample>& examples,
                                    const std::vector<SparseVector>& points, index_t dim,
                                    const SolverOptions& opt, std::mt19937_64& rng,
                                    const std::vector<double>* norms_sq) {
    struct DualVar {
        index_t point;
        double sign; // +1 positive side, -1 negative side
        double upper;
        double alpha;      // in (0, upper)
        double complement; // upper - alpha
        int stalled = 0;
    };

    std::vector<DualVar> vars;
    vars.reserve(2 * examples.size());
    for (const WeightedExample& e : examples) {
        double u_pos = 0.5 * opt.cost * e.pos;
        double u_neg = 0.5 * opt.cost * e.neg;
        if (u_pos > 0.0) vars.push_back({e.point, +1.0, u_pos, 0.0, 0.0});
        if (u_neg > 0.0) vars.push_back({e.point, -1.0, u_neg, 0.0, 0.0});
    }

    LinearRegressor out;
    if (vars.empty()) {
        out.w.dim = dim;
        out.empty = true;
        return out;
    }

    std::vector<double> w(dim, 0.0);
    std::vector<double> xtx;
    if (norms_sq == nullptr) {
        xtx.resize(points.size(), -1.0);
    }
    auto norm_of = [&](index_t p) {
        if (norms_sq != nullptr) return (*norms_sq)[p];
        if (xtx[p] < 0.0) xtx[p] = norm2_squared(points[p]);
        return xtx[p];
    };

    for (DualVar& v : vars) {
        v.alpha = std::min(0.001 * v.upper, 1e-8);
        v.complement = v.upper - v.alpha;
        axpy_sparse(v.sign * v.alpha, points[v.point], w);
    }

    const int max_inner = 100;
    const double eta = 0.1;
    double innereps = 1e-2;
    const double innereps_min = std::min(1e-8, opt.tol);

    std::vector<std::uint32_t> active(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) active[i] = static_cast<std::uint32_t>(i);

    int epoch = 0;
    double gmax = std::numeric_limits<double>::infinity();
    while (epoch < opt.max_epochs) {
        shuffle_portable(active, rng);
        gmax = 0.0;
        long newton_total = 0;
        std::size_t idx = 0;
        while (idx < active.size()) {
            DualVar& v = vars[active[idx]];
            const SparseVector& xi = points[v.point];
            double a = norm_of(v.point);
            double b = v.sign * dot_sparse_dense(xi, w);
            double C = v.upper;

            // Work on whichever of (alpha, complement) the gradient drives.
            bool flip = 0.5 * a * (v.complement - v.alpha) + b < 0.0;
            double z_old = flip ? v.complement : v.alpha;
            double sgn = flip ? -1.0 : 1.0;
            double z = z_old;
            if (C - z < 0.5 * C) z = 0.1 * z;
            double gp = a * (z - z_old) + sgn * b + std::log(z / (C - z));
            double gp0 = std::fabs(gp);
            gmax = std::max(gmax, gp0);

            int inner = 0;
            while (inner <= max_inner) {
                if (std::fabs(gp) < innereps) break;
                double gpp = a + C / (C - z) / z;
                double znew = z - gp / gpp;
                if (znew <= 0.0)
                    z *= eta;
                else
                    z = znew;
                gp = a * (z - z_old) + sgn * b + std::log(z / (C - z));
                ++inner;
            }
            newton_total += inner;

            double delta = 0.0;
            if (inner > 0) {
                delta = z - z_old;
                if (flip) {
                    v.complement = z;
                    v.alpha = C - z;
                } else {
                    v.alpha = z;
                    v.complement = C - z;
                }
                axpy_sparse(sgn * delta * v.sign, xi, w);
            }

            // Shrinking: park coordinates stationary for two passes. They are
            // re-checked by the clean full pass required before termination.
            if (opt.shrink && gp0 < 0.5 * opt.tol && std::fabs(delta) < 1e-12 * C) {
                if (++v.stalled >= 2) {
                    std::swap(active[idx], active.back());
                    active.pop_back();
                    continue;
                }
            } else {
                v.stalled = 0;
            }
            ++idx;
        }
        ++epoch;

        if (opt.track_objective) {
            SparseVector wt;
            wt.dim = dim;
            for (index_t d = 0; d < dim; ++d)
                if (w[d] != 0.0) {
                    wt.indices.push_back(d);
                    wt.values.push_back(w[d]);
                }
            out.objective_trace.push_back(
                weighted_logistic_objective(examples, points, wt, opt.cost));
        }

        if (gmax < opt.tol) {
            if (active.size() == vars.size()) break;
            // Converged on the shrunk set; verify on everything.
            active.resize(vars.size());
            for (std::size_t i = 0; i < vars.size(); ++i)
                active[i] = static_cast<std::uint32_t>(i);
            for (DualVar& v : vars) v.stalled = 0;
            continue;
        }
        if (newton_total <= static_cast<long>(vars.size()) / 10)
            innereps = std::max(innereps_min, 0.1 * innereps);
    }

    out.epochs = epoch;
    out.gap = gmax;
    out.w.dim = dim;
    for (index_t d = 0; d < dim; ++d) {
        if (w[d] != 0.0 && std::fabs(w[d]) >= opt.prune) {
            out.w.indices.push_back(d);
            out.w.values.push_back(w[d]);
        }
    }
    return out;
}

} // namespace xreg
