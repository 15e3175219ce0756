// Rotating-wave Hamiltonian assembly and master-equation integration for a
// multi-level scheme driven by an arbitrary pulse sequence.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "slowlight/model.hpp"

namespace slowlight {

using Matrix = Eigen::MatrixXcd;

// H(t)/hbar in the frame rotating with each active field. Each driven
// transition carries off-diagonal (Omega/2) e^{i phi}; diagonal frame terms
// are assigned per connected component of simultaneously driven transitions
// (E_excited - E_ground = -detuning along a spanning tree). Two simultaneous
// pulses on the same transition with different detunings are rejected, as are
// driving loops with inconsistent detunings.
Matrix build_hamiltonian(const LevelScheme& scheme,
                         const CheckedPulseSequence& pulses, double t);

// drho/dt = -i[H, rho] + population decay channels + pure-dephasing
// completion so that every pair's total off-diagonal decay equals the
// configured total transverse rate. Traceless by construction.
Matrix lindblad_rhs(const Matrix& rho, const Matrix& H,
                    const RelaxationSpec& relax);

struct TimeSeries {
  int n_levels = 0;
  std::vector<double> t;                          // uniform grid, us
  std::vector<Eigen::VectorXd> populations;       // diag(rho) per sample
  // rho_ij for i < j (row i, column j; i is the lower-indexed level).
  std::map<std::pair<int, int>, std::vector<std::complex<double>>> coherences;
  std::map<std::string, std::vector<double>> envelopes;  // Omega(t) per label

  const std::vector<std::complex<double>>& coherence(int i, int j) const;
  std::vector<double> population(int level) const;
  std::vector<double> population_difference(int a, int b) const;  // rho_aa-rho_bb
};

struct DensityMatrixTolerances {
  double hermiticity = 1e-12;
  double trace = 1e-9;
  double positivity = 1e-7;
};

// Throws NumericalError if rho violates the Hermiticity / trace / positivity
// bounds. Returns the symmetrized matrix (rho + rho^dagger)/2.
Matrix check_density_matrix(const Matrix& rho,
                            const DensityMatrixTolerances& tol = {});

// Adaptive RK5(4) integration of the master equation, resampled on a uniform
// grid with the configured sample step. Density-matrix invariants are
// enforced at every sample.
TimeSeries evolve(const ScenarioConfig& config, double t0, double t1);

// Steady state of the time-independent generator, via SVD null-space solve of
// the vectorized Liouvillian with the unit-trace constraint. Throws
// NumericalError if the null space is degenerate.
Matrix steady_state(const Matrix& H, const RelaxationSpec& relax);

}  // namespace slowlight
