#pragma once

#include <random>
#include <vector>

#include "xreg/sparse.hpp"

namespace xreg {

// One data point as seen by a node's regressor. The point contributes a
// positive logistic term with weight `pos` = s*z and a negative term with
// weight `neg` = s*(1-z); either side may be zero.
struct WeightedExample {
    index_t point = 0;
    double pos = 0.0;
    double neg = 0.0;
};

struct SolverOptions {
    double cost = 10.0;   // effective loss multiplier, C / |I_n|
    double tol = 0.1;     // stop when the max dual subproblem gradient < tol
    int max_epochs = 100;
    double prune = 0.05;  // drop trained weights with |w| below this
    bool shrink = true;
    bool track_objective = false; // record the primal objective per epoch
};

struct LinearRegressor {
    SparseVector w; // over the augmented feature space
    int epochs = 0;
    double gap = 0.0; // max dual subproblem gradient at termination
    bool empty = false; // set when trained with no effective examples
    std::vector<double> objective_trace;
};

// Primal objective the solver minimizes:
//   |w|^2 + cost * sum_i { pos_i*log(1+exp(-w.x_i)) + neg_i*log(1+exp(w.x_i)) }
double weighted_logistic_objective(const std::vector<WeightedExample>& examples,
                                   const std::vector<SparseVector>& points,
                                   const SparseVector& w, double cost);

// Dual coordinate descent for the objective above. Each (example, side) pair
// with non-zero weight is one dual variable bounded by cost*weight/2;
// coordinates are visited in a fresh random permutation per epoch and the
// Newton sub-solve follows liblinear's guarded iteration. With shrinking on,
// stalled coordinates are parked and convergence is only declared after a
// clean full pass. `norms_sq` may supply precomputed |x_i|^2.
LinearRegressor solve_logistic_dual(const std::vector<WeightedExample>& examples,
                                    const std::vector<SparseVector>& points, index_t dim,
                                    const SolverOptions& opt, std::mt19937_64& rng,
                                    const std::vector<double>* norms_sq = nullptr);

double sigmoid(double t);
double log_sigmoid(double t);

// sigmoid(dot(w, x)), kept strictly inside (0, 1).
double predict_prob(const LinearRegressor& r, const SparseVector& x);

} // namespace xreg
