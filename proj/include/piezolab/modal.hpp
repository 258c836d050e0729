#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "piezolab/grid.hpp"
#include "piezolab/material.hpp"
#include "piezolab/spectrum.hpp"

namespace piezolab {

// Coefficients in the eigenbasis of the uncontrolled generator:
//   phi(t) = sum_kj c_kj Y+_kj e^{+i s t} + d_kj Y-_kj e^{-i s t}
// with Y+-_kj = (1/lambda, b/lambda, 1, b) sin(sigma_j x), lambda = +-i s_kj.
// d = conj(c) is the real-field subspace.
struct ModalState {
  DerivedConstants dc;
  std::size_t N = 0;
  std::array<std::vector<cplx>, 2> c, d;  // [branch-1][j-1]

  static ModalState zeros(const DerivedConstants& dc, std::size_t N);

  cplx& cc(int k, std::size_t j) { return c[k - 1][j - 1]; }
  cplx& dd(int k, std::size_t j) { return d[k - 1][j - 1]; }
  cplx cc(int k, std::size_t j) const { return c[k - 1][j - 1]; }
  cplx dd(int k, std::size_t j) const { return d[k - 1][j - 1]; }
  double frequency(int k, std::size_t j) const;
  bool is_zero() const;
  bool conjugate_symmetric(double tol = 1e-12) const;
};

struct OutputTrace {
  std::vector<double> times;
  std::vector<cplx> values;
};

// (sum |2j-1|^{2 theta} (|c|^2 + |d|^2))^{1/2}
double norm_theta(const ModalState& s, double theta);

ModalState evolve(const ModalState& s, double t);

// B* phi(t) = -(1/h) phi_4(L, t)
cplx output_at(const ModalState& s, double t);

// samples >= 2 gives t_i = i T/(samples-1); samples == 1 gives t = 0.
OutputTrace output_trace(const ModalState& s, double T, std::size_t samples);

// int_0^T e^{i delta t} dt
cplx gram_integral(double delta, double T);

// int_0^T |B* phi|^2 dt, exact.
double output_energy(const ModalState& s, double T);

double observability_quotient(const ModalState& s, double T, double theta);

// ||Y+-_kj||_H^2 = L (rho + mu b_k^2); needs physical constants.
double mode_norm_squared(const DerivedConstants& dc, int branch);
double h_norm_squared(const ModalState& s);

// Complex coefficients with N(0,1) real and imaginary parts scaled by
// |2j-1|^{-theta_gen}.  real_fields forces d = conj(c).
ModalState random_state(const DerivedConstants& dc, std::size_t N,
                        double theta_gen, std::uint64_t seed,
                        std::uint64_t state_id, bool real_fields = false);

// Two-mode state on (a, b) whose output amplitudes are (+1, -1).
ModalState near_collision_state(const DerivedConstants& dc, std::size_t N,
                                const ModeId& a, const ModeId& b);

std::vector<double> ensemble_quotients(const DerivedConstants& dc,
                                       std::size_t N, std::size_t members,
                                       double T, double theta,
                                       double theta_gen, std::uint64_t seed,
                                       unsigned jobs = 1);

// Field values (v, p, v_dot, p_dot) at x, complex in general.
std::array<cplx, 4> reconstruct(const ModalState& s, double x);

// Samples a real-field state; throws if d != conj(c).
GridState sample_to_grid(const ModalState& s, std::size_t cells);

// Requires cells >= 2(2N-1), i.e. 8 points per shortest wavelength.
ModalState project_grid(const GridState& g, const DerivedConstants& dc,
                        std::size_t N);

}  // namespace piezolab
