#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "piezolab/material.hpp"

namespace piezolab {

using cplx = std::complex<double>;

struct EigenMode {
  int branch = 1;       // 1 or 2
  std::size_t index = 1;  // j >= 1
  int sign = +1;        // eigenvalue sign*i*s
  double sigma = 0.0;   // (2j-1) pi / (2L)
  double frequency = 0.0;  // sigma / zeta_branch
  cplx eigenvalue{};
  std::array<double, 2> amplitude{1.0, 0.0};  // (1, b_branch)
};

struct ModeId {
  int branch = 0;
  std::size_t index = 0;
  bool operator==(const ModeId&) const = default;
};

struct GapReport {
  std::size_t N = 0;
  double min_gap = 0.0;
  std::pair<ModeId, ModeId> argmin_pair;
  // Smallest strictly positive gap and where it sits; equals min_gap when
  // there is no exact collision.
  double min_nonzero_gap = 0.0;
  std::pair<ModeId, ModeId> argmin_nonzero_pair;
  std::vector<std::pair<ModeId, ModeId>> collisions;
  double fitted_C_alpha = 0.0;  // NaN when no fit was possible
  double alpha_used = 1.0;
  double density_Dplus = 0.0;
  double Tmin = 0.0;
};

struct GapFit {
  double C = 0.0;
  std::pair<ModeId, ModeId> argmin_pair;
  std::size_t close_pairs = 0;
};

class DegenerateSpectrum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyChain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double sigma_j(std::size_t j, double L);

EigenMode make_mode(const DerivedConstants& dc, int branch, std::size_t j,
                    int sign = +1);

// 2N positive-sign modes sorted by frequency, ties by (branch, index).
std::vector<EigenMode> frequencies(const DerivedConstants& dc, std::size_t N);

// (1, b) sin(sigma x)
std::array<double, 2> eigenfunction_eval(const DerivedConstants& dc,
                                         const EigenMode& mode, double x);

// Generator eigenvector (1/lambda, b/lambda, 1, b) sin(sigma x).
std::array<cplx, 4> generator_eigenfunction_eval(const DerivedConstants& dc,
                                                 const EigenMode& mode,
                                                 double x);

// Largest set of eigenvalues within tau of any eigenvalue is two.
double chain_threshold(const DerivedConstants& dc);

double density_Dplus(const DerivedConstants& dc);

// Max number of elements of {+-s_kj} inside a closed interval of length r,
// scanned over windows whose left end is a spectral point below smax.
std::size_t counting_function(const DerivedConstants& dc, double r,
                              double smax);

bool is_collision(double a, double b);

// tau_prime <= 0 selects tau/2.
GapReport min_gap(const DerivedConstants& dc, std::size_t N, double alpha = 1.0,
                  double tau_prime = 0.0);

GapFit gap_bound_fit(const DerivedConstants& dc, std::size_t N, double alpha,
                     double tau_prime = 0.0);

}  // namespace piezolab
