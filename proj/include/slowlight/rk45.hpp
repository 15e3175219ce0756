// Embedded Dormand-Prince 5(4) integrator for complex-matrix states with
// dense output via cubic Hermite interpolation onto a caller-supplied grid.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace slowlight {

using StateMatrix = Eigen::MatrixXcd;
using RhsFn = std::function<StateMatrix(double t, const StateMatrix& y)>;

struct Rk45Options {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0: choose automatically
  double max_step = 0.0;      // 0: unlimited
};

// Integrates y' = f(t, y) from t0 to t1 and evaluates the solution at the
// given sample times (must be ascending and inside [t0, t1]).
// Throws NumericalError on step-size underflow.
std::vector<StateMatrix> integrate_rk45(const RhsFn& f, StateMatrix y0,
                                        double t0, double t1,
                                        const std::vector<double>& sample_times,
                                        const Rk45Options& opts);

}  // namespace slowlight
