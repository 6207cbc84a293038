#include "nashlab/expm.hpp"

#include <array>
#include <cmath>

namespace nashlab {

int expm_squarings(double norm1) {
  if (!(norm1 > 0.5)) return 0;
  return static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
}

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error("expm: matrix must be square");
  if (!a.allFinite()) throw Error("expm: non-finite entries");
  const Index n = a.rows();
  if (n == 0) return a;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  const int s = expm_squarings(norm1);
  const Matrix x = a / std::ldexp(1.0, s);

  // c_k = (2p-k)! p! / ((2p)! k! (p-k)!), p = 6
  constexpr int p = 6;
  std::array<double, p + 1> c{};
  c[0] = 1.0;
  for (int k = 1; k <= p; ++k) {
    c[k] = c[k - 1] * static_cast<double>(p - k + 1) / static_cast<double>(k * (2 * p - k + 1));
  }

  const Matrix id = Matrix::Identity(n, n);
  const Matrix x2 = x * x;
  const Matrix x4 = x2 * x2;
  const Matrix x6 = x4 * x2;
  const Matrix u = x * (c[1] * id + c[3] * x2 + c[5] * x4);
  const Matrix v = c[0] * id + c[2] * x2 + c[4] * x4 + c[6] * x6;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

}  // namespace nashlab
