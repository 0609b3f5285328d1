#include "subweyl/connection.hpp"

#include <numeric>

namespace subweyl {

namespace {

std::vector<int> iota_range(int from, int count) {
    std::vector<int> v(count);
    std::iota(v.begin(), v.end(), from);
    return v;
}

} // namespace

ManifoldGeometry::ManifoldGeometry(const ManifoldSpec& spec)
    : FrameGeometry(iota_range(0, spec.n), iota_range(spec.n, spec.p)),
      spec_(spec) {}

const eval::FrameEval& ManifoldGeometry::frame(const JetPoint& jp) const {
    return memo<eval::FrameEval>(kUserTag, jp,
                                 [&] { return eval::FrameEval::at(spec_, jp); });
}

JMat ManifoldGeometry::frame_A_impl(const JetPoint& jp) const {
    return frame(jp).A;
}
JMat ManifoldGeometry::metric_struct_impl(const JetPoint& jp) const {
    return frame(jp).gij;
}
JMat ManifoldGeometry::metric_trans_impl(const JetPoint& jp) const {
    return frame(jp).gT;
}
JVec ManifoldGeometry::weyl_struct_impl(const JetPoint& jp) const {
    return frame(jp).theta;
}
JVec ManifoldGeometry::weyl_trans_impl(const JetPoint& jp) const {
    return frame(jp).rho;
}

ConnectionBlocks compatible_connection(const ManifoldSpec& spec,
                                       const std::vector<double>& point) {
    ManifoldGeometry geo(spec);
    auto jp = JetPoint::at(point);
    ConnectionBlocks b;
    b.C = values(geo.conn_C(jp));
    b.D = values(geo.conn_D(jp));
    return b;
}

ConnectionBlocks vranceanu_connection(const ManifoldSpec& spec,
                                      const std::vector<double>& point) {
    ManifoldGeometry geo(spec);
    auto jp = JetPoint::at(point);
    ConnectionBlocks b;
    b.C = values(geo.conn_C(jp));
    b.D = values(geo.conn_D(jp));
    if (spec.p > 0) b.F = values(geo.conn_F(jp));
    return b;
}

double koszul_oracle(const ManifoldSpec& spec, const std::vector<double>& point,
                     int i, int j, int k) {
    ManifoldGeometry geo(spec);
    return koszul_structural(geo, point, i, j, k);
}

namespace {

// Full-metric entry field over all coordinates.
JMat full_metric(const ManifoldSpec& spec, const JetPoint& jp) {
    int m = spec.dim();
    JMat g = jmat(m, m, jp);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) g[a][b] = eval::metric_entry(spec, a, b, jp);
    return g;
}

JTen3 full_weyl_jets(const ManifoldSpec& spec, const JetPoint& jp) {
    int m = spec.dim();
    auto gf = [&spec](const JetPoint& q) { return full_metric(spec, q); };
    std::vector<JMat> dg(m);
    for (int d = 0; d < m; ++d) dg[d] = block_partial(gf, jp, d);
    JMat g = full_metric(spec, jp);
    JMat gInv = invert(g, MetricKind::Full);
    JVec w = jvec(m, jp);
    for (int a = 0; a < m; ++a) w[a] = eval::weyl_entry(spec, a, jp);
    JVec wUp = jvec(m, jp);
    for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) wUp[c] += gInv[c][d] * w[d];

    JTen3 gamma = jten3(m, m, m, jp);
    for (int c = 0; c < m; ++c)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                Jet s = jp.zero();
                for (int d = 0; d < m; ++d)
                    s += gInv[c][d] * (dg[a][d][b] + dg[b][a][d] - dg[d][a][b]);
                if (c == b) s += w[a];
                if (c == a) s += w[b];
                s -= g[a][b] * wUp[c];
                gamma[c][a][b] = 0.5 * s;
            }
    return gamma;
}

} // namespace

Ten3 full_weyl_connection(const ManifoldSpec& spec,
                          const std::vector<double>& point) {
    return values(full_weyl_jets(spec, JetPoint::at(point)));
}

Ten3 full_weyl_compatibility_residual(const ManifoldSpec& spec,
                                      const std::vector<double>& point) {
    int m = spec.dim();
    auto jp = JetPoint::at(point);
    Ten3 gamma = values(full_weyl_jets(spec, jp));
    Mat g = values(full_metric(spec, jp));
    Vec w(m);
    for (int a = 0; a < m; ++a) w[a] = eval::weyl_entry(spec, a, jp).value();
    auto gf = [&spec](const JetPoint& q) { return full_metric(spec, q); };

    Ten3 r = ten3(m, m, m);
    for (int c = 0; c < m; ++c) {
        Mat dg = values(block_partial(gf, jp, c));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                double s = dg[a][b] + w[c] * g[a][b];
                for (int d = 0; d < m; ++d)
                    s -= gamma[d][c][a] * g[d][b] + gamma[d][c][b] * g[a][d];
                r[c][a][b] = s;
            }
    }
    return r;
}

namespace {

// ∇̃_U V for coordinate-component vector fields, via the full Weyl
// connection; returns coordinate components.
JVec full_weyl_nabla(const ManifoldSpec& spec, const VecField& U,
                     const VecField& V, const JetPoint& jp) {
    int m = spec.dim();
    JTen3 gamma = full_weyl_jets(spec, jp);
    JVec u = U(jp), v = V(jp);
    JVec r(m, jp.zero());
    for (int c = 0; c < m; ++c) {
        auto Vc = [&V, c](const JetPoint& q) { return V(q)[c]; };
        for (int d = 0; d < m; ++d) r[c] += u[d] * partial_jet(Vc, jp, d);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) r[c] += u[b] * v[a] * gamma[c][a][b];
    }
    return r;
}

} // namespace

ConnectionBlocks vranceanu_global_oracle(const ManifoldSpec& spec,
                                         const std::vector<double>& point) {
    const int n = spec.n, p = spec.p;
    ManifoldGeometry geo(spec);
    auto jp = JetPoint::at(point);

    ConnectionBlocks b;
    b.C = ten3(n, n, n);
    b.D = ten3(n, n, p);
    b.F = ten3(p, p, p);

    // structural block: Q ∇̃_{∂_j} ∂_i
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            JVec nab = full_weyl_nabla(spec, frame_field(geo, j), frame_field(geo, i), jp);
            auto [s, t] = to_adapted(geo, nab, jp);
            for (int k = 0; k < n; ++k) b.C[k][i][j] = s[k].value();
        }
    // mixed block: Q[δ_a, ∂_i]
    for (int a = 0; a < p; ++a)
        for (int i = 0; i < n; ++i) {
            JVec br = bracket(frame_field(geo, n + a), frame_field(geo, i), jp, spec.dim());
            auto [s, t] = to_adapted(geo, br, jp);
            for (int k = 0; k < n; ++k) b.D[k][i][a] = s[k].value();
        }
    // transversal block: Q⊥ ∇̃_{δ_b} δ_a
    for (int b2 = 0; b2 < p; ++b2)
        for (int a = 0; a < p; ++a) {
            JVec nab = full_weyl_nabla(spec, frame_field(geo, n + b2),
                                       frame_field(geo, n + a), jp);
            auto [s, t] = to_adapted(geo, nab, jp);
            for (int c = 0; c < p; ++c) b.F[c][a][b2] = t[c].value();
        }
    return b;
}

Ten3 torsion_transversal(const ManifoldSpec& spec,
                         const std::vector<double>& point) {
    ManifoldGeometry geo(spec);
    return torsion(geo, point);
}

CurvatureBlocks curvature(const ManifoldSpec& spec,
                          const std::vector<double>& point) {
    ManifoldGeometry geo(spec);
    return curvature_blocks(geo, point);
}

MetricDerivative nabla_g(const ManifoldSpec& spec,
                         const std::vector<double>& point, const AdaptedVec& X) {
    ManifoldGeometry geo(spec);
    return nabla_metric(geo, point, X);
}

Vec dprime_torsion_residual(const ManifoldSpec& spec,
                            const std::vector<double>& point, int X, int Y) {
    ManifoldGeometry geo(spec);
    return dprime_residual(geo, point, X, Y);
}

AdaptedVec curvature_commutator_oracle(const ManifoldSpec& spec,
                                       const std::vector<double>& point,
                                       int X, int Y, int Z) {
    ManifoldGeometry geo(spec);
    return curvature_commutator(geo, point, X, Y, Z);
}

Vec nijenhuis_P(const ManifoldSpec& spec, const std::vector<double>& point,
                int X, int Y) {
    ManifoldGeometry geo(spec);
    return nijenhuis(geo, point, X, Y);
}

} // namespace subweyl
