#pragma once

#include <Eigen/Sparse>
#include <stdexcept>
#include <string>
#include <vector>

#include "piezolab/grid.hpp"
#include "piezolab/material.hpp"
#include "piezolab/modal.hpp"

namespace piezolab {

// CFL violation, unstable energy, broken dissipation identity.
class NumericalGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulationOptions {
  double T = 10.0;
  double dx = 0.0;  // snapped to L/round(L/dx)
  double cfl = 0.9;
  bool damped = true;
  double sample_dt = 0.1;
  // online check of |E(t) - E(0) + D(t)| / E(0)
  double monitor_tol = 1e-9;
};

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energies;  // time-averaged staggered energy
  std::vector<double> p_dot_L;
  std::vector<double> dissipated;   // (1/2h^2) int_0^t pdot(L)^2, per step
  std::vector<double> energy_sync;  // energy_grid of the synchronised state
};

struct SimulationResult {
  EnergyTrace trace;
  GridState final_state;
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t cells = 0;
  double max_identity_residual = 0.0;  // relative to E(0)
};

struct DecayFit {
  double t_a = 0.0, t_b = 0.0;
  double exponent = 0.0;       // E ~ M (t+1)^{-p}
  double log_amplitude = 0.0;  // log M
  double rate = 0.0;           // E ~ A e^{-r t}
  double residual_polynomial = 0.0;  // rms of log E residuals
  double residual_exponential = 0.0;
  double semilog_r2 = 0.0;
  std::string model_choice;  // "polynomial" or "exponential"
  std::size_t points = 0;
};

// Trapezoid kinetic part plus per-edge strain form.
double energy_grid(const GridState& g, const MaterialParams& p);

// Unknowns (v_i, p_i) for nodes i = 1..M-1 interleaved.
Eigen::SparseMatrix<double> assemble_stiffness(const MaterialParams& p,
                                               std::size_t cells);
Eigen::VectorXd lumped_mass(const MaterialParams& p, std::size_t cells);

// Lowest eigenvalues of the discrete operator M^{-1} K by inertia bisection.
std::vector<double> lowest_eigenvalues(const MaterialParams& p,
                                       std::size_t cells, std::size_t count);

std::size_t cells_for_dx(double L, double dx);

SimulationResult simulate(const MaterialParams& p, const GridState& initial,
                          const SimulationOptions& opt);
SimulationResult simulate(const MaterialParams& p, const ModalState& initial,
                          const SimulationOptions& opt);

DecayFit decay_fit(const std::vector<double>& times,
                   const std::vector<double>& energies, double t_a,
                   double t_b);
inline DecayFit decay_fit(const EnergyTrace& tr, double t_a, double t_b) {
  return decay_fit(tr.times, tr.energies, t_a, t_b);
}

}  // namespace piezolab
