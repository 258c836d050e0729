#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace piezolab {

// Physical constants of the beam, coherent SI units.
struct MaterialParams {
  double rho = 1.0;     // mass density
  double alpha1 = 1.0;  // elastic stiffness
  double beta = 1.0;    // impermittivity
  double gamma = 1.0;   // piezoelectric coupling
  double mu = 1.0;      // magnetic permeability
  double L = 1.0;       // length
  double h = 1.0;       // thickness
};

struct DerivedConstants {
  double alpha = 0.0;  // alpha1 + gamma^2 beta
  double zeta1 = 0.0;  // slow branch slowness
  double zeta2 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double L = 0.0;
  double h = 0.0;
  double rho_over_mu = 0.0;
  // Empty for synthetic constants; fdsolver refuses those.
  std::optional<MaterialParams> params;

  bool synthetic() const { return !params.has_value(); }
  double zeta(int branch) const { return branch == 1 ? zeta1 : zeta2; }
  double b(int branch) const { return branch == 1 ? b1 : b2; }
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void validate(const MaterialParams& p);

DerivedConstants derive_constants(const MaterialParams& p);

DerivedConstants synthetic_constants(double zeta1, double zeta2,
                                     double rho_over_mu, double L, double h);

// Physical set that keeps rho, mu, gamma, L, h of `base` and retunes alpha1,
// beta so that zeta1/zeta2 = ratio and zeta2 takes the given value.
MaterialParams params_for_ratio(double ratio, double zeta2,
                                const MaterialParams& base);

// rho = alpha1 = beta = gamma = mu = 1, L = pi/2, h = 1
MaterialParams golden_params();

}  // namespace piezolab
