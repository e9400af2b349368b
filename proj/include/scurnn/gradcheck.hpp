#pragma once
#include <string>
#include <vector>

#include "scurnn/rnn.hpp"

namespace scurnn {

struct GradCheckReport {
  // group name -> max relative error vs central finite differences
  std::vector<std::pair<std::string, double>> groups;

  double worst() const;
  bool pass(double tol) const { return worst() < tol; }
};

// End-to-end check of every analytic gradient (X, Y, theta, U, V, b, c, h0)
// against central finite differences of the full forward loss on a random
// small instance (m = 2 inputs, p = 2 outputs, MSE over all timesteps).
GradCheckReport run_gradcheck(int n, int tau, std::uint64_t seed,
                              double fd_step = 1e-6);

}  // namespace scurnn
