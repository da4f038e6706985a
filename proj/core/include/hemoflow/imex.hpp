#pragma once

#include <string>
#include <vector>

namespace hemoflow {

/// IMEX Runge-Kutta Butcher pair: strictly lower-triangular explicit part
/// and diagonally implicit part. Stored as plain data so alternative
/// published tableaux can be swapped in from configuration.
struct ImexTableau {
  std::string name;
  int stages = 0;
  int order = 0;
  std::vector<std::vector<double>> A_ex, A_im;
  std::vector<double> b_ex, b_im, c_ex, c_im;

  /// ARS(4,4,3): four effective stages, third order, L-stable implicit
  /// part, globally stiffly accurate. Default scheme of the solver.
  static ImexTableau ars443();

  static ImexTableau from_json_file(const std::string &path);
  std::string to_json() const;

  bool globally_stiffly_accurate(double tol = 1e-12) const;

  /// Checks shape invariants and the order conditions (up to the declared
  /// order, each part separately). Throws ConfigError on violation.
  void validate() const;
};

} // namespace hemoflow
