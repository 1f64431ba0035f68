#pragma once

#include <vector>

#include "hamfactor/matrix.hpp"

namespace hamfactor {

struct FlowSample {
    double t = 0;
    double hamiltonian = 0;          // 1/2 u^t D u
    std::vector<double> casimirs;    // c^t u per covector
};

/// Fixed-step RK4 on udot = B*u in double precision, sampling the quadratic
/// energy of d and each linear Casimir at every step. Numeric illustration
/// only; all conservation claims are established exactly elsewhere.
std::vector<FlowSample> rk4_flow(const RatMatrix& b, const RatMatrix& d,
                                 const std::vector<RatMatrix>& casimir_covectors,
                                 const std::vector<Rat>& u0, double t_max, int steps);

} // namespace hamfactor
