#ifndef SUBWEYL_LINALG_HPP
#define SUBWEYL_LINALG_HPP

#include <vector>

#include "subweyl/jet.hpp"

namespace subweyl {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;
using Ten3 = std::vector<Mat>;
using Ten4 = std::vector<Ten3>;

using JVec = std::vector<Jet>;
using JMat = std::vector<JVec>;
using JTen3 = std::vector<JMat>;

inline Mat mat(int r, int c) { return Mat(r, Vec(c, 0.0)); }
inline Ten3 ten3(int a, int b, int c) { return Ten3(a, mat(b, c)); }
inline Ten4 ten4(int a, int b, int c, int d) { return Ten4(a, ten3(b, c, d)); }

JVec jvec(int n, const JetPoint& ctx);
JMat jmat(int r, int c, const JetPoint& ctx);
JTen3 jten3(int a, int b, int c, const JetPoint& ctx);

Vec values(const JVec&);
Mat values(const JMat&);
Ten3 values(const JTen3&);

enum class MetricKind { Structural, Transversal, Full, FiberHessian };

// Determinant of the value part (LU with partial pivoting).
double det_values(const Mat& m);

// Gauss-Jordan inverse over jets, pivoting on the value parts. Throws the
// degeneracy error matching `kind` when |det| < 1e-12 * prod(row norms).
JMat invert(const JMat& m, MetricKind kind);

// Eigenvalues of a symmetric matrix by cyclic Jacobi, ascending.
Vec sym_eigenvalues(Mat m);

} // namespace subweyl

#endif
