#include "subweyl/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace subweyl {

JVec jvec(int n, const JetPoint& ctx) { return JVec(n, ctx.zero()); }
JMat jmat(int r, int c, const JetPoint& ctx) { return JMat(r, jvec(c, ctx)); }
JTen3 jten3(int a, int b, int c, const JetPoint& ctx) {
    return JTen3(a, jmat(b, c, ctx));
}

Vec values(const JVec& v) {
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = v[i].value();
    return r;
}

Mat values(const JMat& m) {
    Mat r(m.size());
    for (size_t i = 0; i < m.size(); ++i) r[i] = values(m[i]);
    return r;
}

Ten3 values(const JTen3& t) {
    Ten3 r(t.size());
    for (size_t i = 0; i < t.size(); ++i) r[i] = values(t[i]);
    return r;
}

double det_values(const Mat& m) {
    Mat a = m;
    int n = int(a.size());
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (int r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return det;
}

namespace {

[[noreturn]] void raise_degenerate(MetricKind kind, double det, double scale) {
    std::string msg = "singular within tolerance (|det| = " +
                      std::to_string(det) + ", scale = " + std::to_string(scale) + ")";
    switch (kind) {
        case MetricKind::Structural:
            throw DegenerateMetric("structural metric block " + msg);
        case MetricKind::Transversal:
            throw DegenerateTransversalMetric("transversal metric block " + msg);
        case MetricKind::Full:
            throw DegenerateFullMetric("full metric " + msg);
        case MetricKind::FiberHessian:
            throw NotPositiveDefinite("fiber hessian " + msg);
    }
    throw std::logic_error("unreachable");
}

} // namespace

JMat invert(const JMat& m, MetricKind kind) {
    int n = int(m.size());
    if (n == 0) return {};
    Mat vm = values(m);
    double scale = 1.0;
    for (const Vec& row : vm) {
        double s = 0.0;
        for (double v : row) s += v * v;
        scale *= std::sqrt(s);
    }
    double det = det_values(vm);
    if (std::abs(det) < 1e-12 * scale || det == 0.0)
        raise_degenerate(kind, det, scale);

    JMat a = m;
    // identity in the same jet context as the input
    JMat inv(n, JVec(n, m[0][0] * 0.0));
    for (int i = 0; i < n; ++i) inv[i][i] += 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col].value()) > std::abs(a[piv][col].value())) piv = r;
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Jet d = 1.0 / a[col][col];
        for (int c = 0; c < n; ++c) {
            a[col][c] = a[col][c] * d;
            inv[col][c] = inv[col][c] * d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            Jet f = a[r][col];
            if (f.value() == 0.0 && f.order() == 0) continue;
            for (int c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

Vec sym_eigenvalues(Mat m) {
    int n = int(m.size());
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += m[i][j] * m[i][j];
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (m[p][q] == 0.0) continue;
                double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    Vec eig(n);
    for (int i = 0; i < n; ++i) eig[i] = m[i][i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

} // namespace subweyl
