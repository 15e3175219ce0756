#include "slowlight/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "slowlight/errors.hpp"
#include "slowlight/rk45.hpp"

namespace slowlight {

namespace {
using std::complex;
constexpr complex<double> kI(0.0, 1.0);
}  // namespace

Matrix build_hamiltonian(const LevelScheme& scheme,
                         const CheckedPulseSequence& pulses, double t) {
  const int n = scheme.size();
  Matrix h = Matrix::Zero(n, n);

  struct Edge {
    int ground, excited;
    double detuning;
  };
  std::vector<Edge> edges;

  for (const auto& p : pulses.pulses) {
    const double omega = p.envelope(t);
    if (omega == 0.0) continue;
    for (const auto& e : edges) {
      if (e.ground == p.ground && e.excited == p.excited &&
          e.detuning != p.detuning) {
        throw ValidationError(
            "simultaneous pulses on one transition with different detunings "
            "(no bichromatic single-transition support)");
      }
    }
    const complex<double> coupling =
        0.5 * omega * std::exp(kI * p.phase);
    h(p.excited, p.ground) += coupling;
    h(p.ground, p.excited) += std::conj(coupling);
    edges.push_back({p.ground, p.excited, p.detuning});
  }

  // Frame assignment: BFS over the graph of active transitions, fixing
  // E_excited - E_ground = -detuning along a spanning tree and checking
  // consistency on closing edges.
  std::vector<double> energy(n, 0.0);
  std::vector<bool> assigned(n, false);
  for (std::size_t seed = 0; seed < edges.size(); ++seed) {
    if (assigned[edges[seed].ground] || assigned[edges[seed].excited]) continue;
    assigned[edges[seed].ground] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& e : edges) {
        const bool ga = assigned[e.ground], ea = assigned[e.excited];
        if (ga && ea) {
          if (std::abs((energy[e.excited] - energy[e.ground]) + e.detuning) >
              1e-9) {
            throw ValidationError(
                "inconsistent detunings around a driven transition loop");
          }
        } else if (ga) {
          energy[e.excited] = energy[e.ground] - e.detuning;
          assigned[e.excited] = true;
          grew = true;
        } else if (ea) {
          energy[e.ground] = energy[e.excited] + e.detuning;
          assigned[e.ground] = true;
          grew = true;
        }
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (assigned[i] && energy[i] != 0.0) h(i, i) = energy[i];
  return h;
}

Matrix lindblad_rhs(const Matrix& rho, const Matrix& H,
                    const RelaxationSpec& relax) {
  const auto n = rho.rows();
  if (H.rows() != n || H.cols() != n || rho.cols() != n)
    throw ValidationError("lindblad_rhs: dimension mismatch");

  Matrix drho = -kI * (H * rho - rho * H);

  for (const auto& ch : relax.channels) {
    const double g = ch.rate;
    if (g == 0.0) continue;
    // D[|to><from|]: feed population, decay row/column `from`.
    drho(ch.to, ch.to) += g * rho(ch.from, ch.from).real();
    drho.row(ch.from) -= (0.5 * g) * rho.row(ch.from);
    drho.col(ch.from) -= (0.5 * g) * rho.col(ch.from);
  }

  // Pure-dephasing completion: bring each pair's total off-diagonal decay up
  // (or down) to the configured total transverse rate.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double total = relax.coherence_rate(static_cast<int>(i), static_cast<int>(j));
      const double lindblad =
          0.5 * (relax.decay_out_of(static_cast<int>(i)) +
                 relax.decay_out_of(static_cast<int>(j)));
      const double extra = total - lindblad;
      if (extra != 0.0) {
        drho(i, j) -= extra * rho(i, j);
        drho(j, i) -= extra * rho(j, i);
      }
    }
  }
  return drho;
}

const std::vector<complex<double>>& TimeSeries::coherence(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = coherences.find({i, j});
  if (it == coherences.end())
    throw ValidationError("requested coherence was not recorded");
  return it->second;
}

std::vector<double> TimeSeries::population(int level) const {
  std::vector<double> out(populations.size());
  for (std::size_t k = 0; k < populations.size(); ++k)
    out[k] = populations[k](level);
  return out;
}

std::vector<double> TimeSeries::population_difference(int a, int b) const {
  std::vector<double> out(populations.size());
  for (std::size_t k = 0; k < populations.size(); ++k)
    out[k] = populations[k](a) - populations[k](b);
  return out;
}

Matrix check_density_matrix(const Matrix& rho,
                            const DensityMatrixTolerances& tol) {
  const double herm_drift = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm_drift > tol.hermiticity)
    throw NumericalError("density matrix Hermiticity drift " +
                         std::to_string(herm_drift));
  Matrix sym = 0.5 * (rho + rho.adjoint().eval());
  const double trace_err = std::abs(sym.trace().real() - 1.0) +
                           std::abs(sym.trace().imag());
  if (trace_err > tol.trace)
    throw NumericalError("density matrix trace deviates from 1 by " +
                         std::to_string(trace_err));
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol.positivity)
    throw NumericalError("density matrix lost positivity (min eigenvalue " +
                         std::to_string(es.eigenvalues().minCoeff()) + ")");
  return sym;
}

TimeSeries evolve(const ScenarioConfig& config, double t0, double t1) {
  config.validate();
  const int n = config.scheme.size();

  Matrix rho0 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) rho0(i, i) = config.initial_populations[i];

  std::vector<double> grid;
  for (double t = t0; t <= t1 + 1e-9 * config.sample_step_us;
       t += config.sample_step_us)
    grid.push_back(t);

  const RhsFn rhs = [&config](double t, const Matrix& rho) {
    const Matrix h = build_hamiltonian(config.scheme, config.pulses, t);
    return lindblad_rhs(rho, h, config.relaxation);
  };

  Rk45Options opts;
  opts.rtol = config.rtol;
  opts.atol = config.atol;
  // Resolve the fastest envelope timescale present.
  double fastest = t1 - t0;
  for (const auto& p : config.pulses.pulses)
    if (p.rabi_peak != 0.0 || p.sampled)
      fastest = std::min(fastest, std::max(p.duration_us, config.sample_step_us));
  opts.max_step = std::max(0.25 * fastest, config.sample_step_us);

  // Integrate piecewise between pulse-envelope edges so no step straddles a
  // rectangular discontinuity.
  std::set<double> cuts{t0, t1};
  for (const auto& p : config.pulses.pulses) {
    const auto [w0, w1] = p.window();
    if (w0 > t0 && w0 < t1) cuts.insert(w0);
    if (w1 > t0 && w1 < t1) cuts.insert(w1);
  }
  std::vector<StateMatrix> states;
  states.reserve(grid.size());
  Matrix rho = rho0;
  std::size_t gpos = 0;
  for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
    const double a = *it, b = *std::next(it);
    std::vector<double> seg_grid;
    while (gpos < grid.size() && grid[gpos] <= b + 1e-12) {
      if (grid[gpos] >= a - 1e-12) seg_grid.push_back(grid[gpos]);
      ++gpos;
    }
    // Always sample the segment endpoint so the state can be carried forward.
    const bool end_is_sample =
        !seg_grid.empty() && std::abs(seg_grid.back() - b) < 1e-9;
    if (!end_is_sample) seg_grid.push_back(b);
    auto seg = integrate_rk45(rhs, rho, a, b, seg_grid, opts);
    rho = seg.back();
    if (!end_is_sample) seg.pop_back();
    for (auto& s : seg) states.push_back(std::move(s));
  }
  while (states.size() < grid.size()) states.push_back(rho);

  TimeSeries out;
  out.n_levels = n;
  out.t = grid;
  out.populations.reserve(grid.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.coherences[{i, j}] = {};
  for (const auto& p : config.pulses.pulses)
    if (!p.label.empty()) out.envelopes[p.label] = {};

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Matrix rho = check_density_matrix(states[k]);
    Eigen::VectorXd pops(n);
    for (int i = 0; i < n; ++i) pops(i) = rho(i, i).real();
    out.populations.push_back(pops);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        out.coherences[{i, j}].push_back(rho(i, j));
    for (const auto& p : config.pulses.pulses)
      if (!p.label.empty())
        out.envelopes[p.label].push_back(p.envelope(grid[k]));
  }
  return out;
}

Matrix steady_state(const Matrix& H, const RelaxationSpec& relax) {
  const auto n = H.rows();
  const auto n2 = n * n;
  // Column k of L is vec(rhs(E_k)) for the k-th basis matrix.
  Matrix liouvillian(n2, n2);
  Matrix basis = Matrix::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      basis(r, c) = 1.0;
      const Matrix d = lindblad_rhs(basis, H, relax);
      basis(r, c) = 0.0;
      const Eigen::Index k = c * n + r;
      for (Eigen::Index cc = 0; cc < n; ++cc)
        for (Eigen::Index rr = 0; rr < n; ++rr)
          liouvillian(cc * n + rr, k) = d(rr, cc);
    }
  }

  Eigen::JacobiSVD<Matrix> svd(liouvillian, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = std::max(sv(0), 1.0) * 1e-10;
  int null_dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) < tol) ++null_dim;
  if (null_dim != 1)
    throw NumericalError("steady_state: generator null space has dimension " +
                         std::to_string(null_dim));

  Eigen::VectorXcd v = svd.matrixV().col(n2 - 1);
  Matrix rho(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) rho(r, c) = v(c * n + r);
  rho = 0.5 * (rho + rho.adjoint().eval());
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-14)
    throw NumericalError("steady_state: traceless null vector");
  rho /= tr;

  const double residual = lindblad_rhs(rho, H, relax).cwiseAbs().maxCoeff();
  if (residual > 1e-10)
    throw NumericalError("steady_state: residual " + std::to_string(residual));
  return rho;
}

}  // namespace slowlight
