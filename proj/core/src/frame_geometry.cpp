#include "subweyl/frame_geometry.hpp"

#include "subweyl/adapted_calculus.hpp"

namespace subweyl {

namespace detail {

size_t MemoKeyHash::operator()(const MemoKey& k) const {
    size_t h = std::hash<int>()(k.tag) ^ (std::hash<int>()(k.order) << 1);
    for (int d : k.dirs) h = h * 1099511628211ull + size_t(d + 1);
    for (double v : k.x) {
        size_t b;
        static_assert(sizeof b == sizeof v);
        __builtin_memcpy(&b, &v, sizeof b);
        h = h * 1099511628211ull + b;
    }
    return h;
}

} // namespace detail

namespace {
enum Tag { kA, kGS, kGT, kWS, kWT, kC, kD, kF };
}

JMat FrameGeometry::frame_A(const JetPoint& jp) const {
    return memo<JMat>(kA, jp, [&] { return frame_A_impl(jp); });
}
JMat FrameGeometry::metric_struct(const JetPoint& jp) const {
    return memo<JMat>(kGS, jp, [&] { return metric_struct_impl(jp); });
}
JMat FrameGeometry::metric_trans(const JetPoint& jp) const {
    return memo<JMat>(kGT, jp, [&] { return metric_trans_impl(jp); });
}
JVec FrameGeometry::weyl_struct(const JetPoint& jp) const {
    return memo<JVec>(kWS, jp, [&] { return weyl_struct_impl(jp); });
}
JVec FrameGeometry::weyl_trans(const JetPoint& jp) const {
    return memo<JVec>(kWT, jp, [&] { return weyl_trans_impl(jp); });
}
JTen3 FrameGeometry::conn_C(const JetPoint& jp) const {
    return memo<JTen3>(kC, jp, [&] { return conn_C_impl(jp); });
}
JTen3 FrameGeometry::conn_D(const JetPoint& jp) const {
    return memo<JTen3>(kD, jp, [&] { return conn_D_impl(jp); });
}
JTen3 FrameGeometry::conn_F(const JetPoint& jp) const {
    return memo<JTen3>(kF, jp, [&] { return conn_F_impl(jp); });
}

JTen3 FrameGeometry::conn_C_impl(const JetPoint& jp) const {
    const int n = ns();
    std::vector<JMat> dg(n);
    for (int l = 0; l < n; ++l)
        dg[l] = block_partial([this](const JetPoint& q) { return metric_struct(q); },
                              jp, sdirs_[l]);
    JMat g = metric_struct(jp);
    JMat gInv = invert(g, MetricKind::Structural);
    JVec th = weyl_struct(jp);
    JVec thUp = jvec(n, jp);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) thUp[k] += gInv[k][l] * th[l];

    JTen3 C = jten3(n, n, n, jp);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Jet s = jp.zero();
                for (int l = 0; l < n; ++l)
                    s += gInv[k][l] * (dg[i][l][j] + dg[j][i][l] - dg[l][i][j]);
                if (k == j) s += th[i];
                if (k == i) s += th[j];
                s -= g[i][j] * thUp[k];
                C[k][i][j] = 0.5 * s;
            }
    return C;
}

JTen3 FrameGeometry::conn_D_impl(const JetPoint& jp) const {
    const int n = ns(), t = nt();
    JTen3 D = jten3(n, n, t, jp);
    for (int i = 0; i < n; ++i) {
        JMat dA = block_partial([this](const JetPoint& q) { return frame_A(q); },
                                jp, sdirs_[i]);
        for (int k = 0; k < n; ++k)
            for (int a = 0; a < t; ++a) D[k][i][a] = dA[k][a];
    }
    return D;
}

JTen3 FrameGeometry::conn_F_impl(const JetPoint& jp) const {
    const int t = nt(), m = dims();
    if (t == 0) return {};
    auto gTfield = [this](const JetPoint& q) { return metric_trans(q); };
    std::vector<JMat> dgT(m);
    for (int d = 0; d < m; ++d) dgT[d] = block_partial(gTfield, jp, d);

    JMat A = frame_A(jp);
    // δgT/δx^a for each transversal direction
    std::vector<JMat> ddgT(t);
    for (int a = 0; a < t; ++a) {
        ddgT[a] = dgT[tdirs_[a]];
        for (int k = 0; k < ns(); ++k)
            for (int r = 0; r < t; ++r)
                for (int c = 0; c < t; ++c)
                    ddgT[a][r][c] -= A[k][a] * dgT[sdirs_[k]][r][c];
    }

    JMat gT = metric_trans(jp);
    JMat gTInv = invert(gT, MetricKind::Transversal);
    JVec rho = weyl_trans(jp);
    JVec rhoUp = jvec(t, jp);
    for (int c = 0; c < t; ++c)
        for (int a = 0; a < t; ++a) rhoUp[c] += gTInv[c][a] * rho[a];

    JTen3 F = jten3(t, t, t, jp);
    for (int c = 0; c < t; ++c)
        for (int a = 0; a < t; ++a)
            for (int b = 0; b < t; ++b) {
                Jet s = jp.zero();
                for (int mu = 0; mu < t; ++mu)
                    s += gTInv[c][mu] *
                         (ddgT[a][mu][b] + ddgT[b][a][mu] - ddgT[mu][a][b]);
                if (c == b) s += rho[a];
                if (c == a) s += rho[b];
                s -= rhoUp[c] * gT[a][b];
                F[c][a][b] = 0.5 * s;
            }
    return F;
}

} // namespace subweyl
