#include "loopchern/simplex.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "loopchern/errors.hpp"

namespace loopchern {

double simplex_heat_integral(std::span<const double> a) {
  if (a.empty()) throw ContractError("simplex_heat_integral: need at least one exponent");
  for (double x : a)
    if (!(x >= 0.0) || !std::isfinite(x)) throw ContractError("simplex_heat_integral: exponents must be finite and >= 0");
  const int M = static_cast<int>(a.size()) - 1;
  const double amin = *std::min_element(a.begin(), a.end());
  if (M == 0) return std::exp(-amin);

  // exp(-(diag(a) - J)) with J the unit superdiagonal. After the shift by the
  // largest exponent the generator C = beta I - diag(a - amin) + J is entrywise
  // nonnegative, so the Taylor series and the squarings never cancel.
  Eigen::VectorXd b(M + 1);
  for (int j = 0; j <= M; ++j) b[j] = a[j] - amin;
  const double beta = b.maxCoeff();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(M + 1, M + 1);
  for (int j = 0; j <= M; ++j) {
    C(j, j) = beta - b[j];
    if (j < M) C(j, j + 1) = 1.0;
  }
  const double norm = std::max({beta + 1.0, 1.0});
  const int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.25))));
  const double h = std::ldexp(1.0, -s);
  const Eigen::MatrixXd X = C * h;
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(M + 1, M + 1);
  Eigen::MatrixXd sum = term;
  for (int k = 1; k < 30; ++k) {
    term = (term * X) / static_cast<double>(k);
    sum += term;
  }
  // exp(-beta h) per step keeps every squaring bounded by one.
  sum *= std::exp(-beta * h);
  for (int i = 0; i < s; ++i) sum = (sum * sum).eval();
  return sum(0, M) * std::exp(-amin);
}

}  // namespace loopchern
