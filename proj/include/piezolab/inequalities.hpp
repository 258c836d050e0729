#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "piezolab/material.hpp"

namespace piezolab {

struct ExponentSet {
  std::vector<double> s;  // sorted, distinct
  double tau_prime = 0.0;
  // (n, n+1) with s[n+1] - s[n] < tau_prime
  std::vector<std::pair<std::size_t, std::size_t>> chains;

  // Sorts, rejects duplicates and chains longer than two.
  static ExponentSet make(std::vector<double> s, double tau_prime);
};

// Positive frequencies up to index N with tau' = tau/2 when tau_prime <= 0.
ExponentSet exponents_from_spectrum(const DerivedConstants& dc, std::size_t N,
                                    double tau_prime = 0.0);

struct GramReport {
  double condition = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::size_t size = 0;
};

// Extreme-eigenvalue ratio of the diagonally normalised Gram matrix of the
// exponentials (or their divided differences on chains) in L^2(0, T).
GramReport gram_condition(const ExponentSet& e, double T,
                          bool use_divided_differences);

struct AmmariReport {
  std::vector<double> E;  // E_0 .. E_K
  double M = 0.0;         // max_k E_k (k+1)^{1/(1+alpha)}
  std::size_t argmax = 0;
  bool eventually_nonincreasing = false;  // over the second half of k
  double tail_product = 0.0;               // E_K (K+1)^{1/(1+alpha)}
};

// Extremal sequence E_{k+1} + C E_{k+1}^{2+alpha} = E_k.
AmmariReport ammari_check(double C, double alpha, double E0, std::size_t K);

struct InterpolationReport {
  double lhs = 0.0, rhs = 0.0, slack = 0.0;
  bool holds = false;
};

// f[j-1] is the weight of index j.
InterpolationReport interpolation_check(const std::vector<double>& f,
                                        double epsilon);

}  // namespace piezolab
