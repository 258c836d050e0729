#pragma once

#include <cstddef>
#include <vector>

namespace piezolab {

// Fields on x_i = i*dx, i = 0..M-1, dx = L/(M-1).  Node 0 is the clamped end.
struct GridState {
  std::size_t M = 0;
  double dx = 0.0;
  std::vector<double> v, p, v_dot, p_dot;
  double t = 0.0;

  static GridState zeros(std::size_t cells, double L) {
    GridState g;
    g.M = cells + 1;
    g.dx = L / static_cast<double>(cells);
    g.v.assign(g.M, 0.0);
    g.p.assign(g.M, 0.0);
    g.v_dot.assign(g.M, 0.0);
    g.p_dot.assign(g.M, 0.0);
    return g;
  }
  std::size_t cells() const { return M - 1; }
  double x(std::size_t i) const { return static_cast<double>(i) * dx; }
};

}  // namespace piezolab
