#include "subweyl/adapted_calculus.hpp"

#include <algorithm>
#include <cassert>

namespace subweyl {

namespace detail {

std::pair<JetPoint, Shift> extended_point(const JetPoint& base, int dir) {
    const auto& dirs = base.plan.dirs;
    int deeper = base.plan.order + 1;
    if (deeper > kMaxJetOrder)
        throw OrderOutOfRange("block derivative exceeds the jet order limit");
    auto it = std::find(dirs.begin(), dirs.end(), dir);
    if (it != dirs.end())
        return {JetPoint::seeded(base.x, SeedPlan{dirs, deeper}),
                Shift{int(it - dirs.begin()), false}};
    if (int(dirs.size()) + 1 > kMaxJetSeeds)
        throw OrderOutOfRange("block derivative exceeds the jet seed limit");
    SeedPlan ext{dirs, deeper};
    ext.dirs.push_back(dir);
    return {JetPoint::seeded(base.x, ext), Shift{int(ext.dirs.size()) - 1, true}};
}

} // namespace detail

Jet delta_partial(const FrameGeometry& geo, const ScalarField& f,
                  const JetPoint& base, int a) {
    Jet r = partial_jet(f, base, geo.tdirs()[a]);
    JMat A = geo.frame_A(base);
    for (int k = 0; k < geo.ns(); ++k)
        r -= A[k][a] * partial_jet(f, base, geo.sdirs()[k]);
    return r;
}

JTen3 torsion(const FrameGeometry& geo, const JetPoint& jp) {
    const int n = geo.ns(), t = geo.nt(), m = geo.dims();
    auto Afield = [&geo](const JetPoint& q) { return geo.frame_A(q); };
    std::vector<JMat> dA(m);
    for (int d = 0; d < m; ++d) dA[d] = block_partial(Afield, jp, d);
    JMat A = geo.frame_A(jp);

    // δA/δx^b
    std::vector<JMat> deltaA(t);
    for (int b = 0; b < t; ++b) {
        deltaA[b] = dA[geo.tdirs()[b]];
        for (int k = 0; k < n; ++k)
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < t; ++c)
                    deltaA[b][r][c] -= A[k][b] * dA[geo.sdirs()[k]][r][c];
    }

    JTen3 T = jten3(n, t, t, jp);
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < t; ++a)
            for (int b = 0; b < t; ++b)
                T[k][a][b] = deltaA[b][k][a] - deltaA[a][k][b];
    return T;
}

Ten3 torsion(const FrameGeometry& geo, const std::vector<double>& point) {
    return values(torsion(geo, JetPoint::at(point)));
}

namespace {

Ten3 axpy(Ten3 acc, double f, const Ten3& x) {
    for (size_t a = 0; a < acc.size(); ++a)
        for (size_t b = 0; b < acc[a].size(); ++b)
            for (size_t c = 0; c < acc[a][b].size(); ++c)
                acc[a][b][c] += f * x[a][b][c];
    return acc;
}

} // namespace

CurvatureBlocks curvature_blocks(const FrameGeometry& geo,
                                 const std::vector<double>& point) {
    const int n = geo.ns(), t = geo.nt(), m = geo.dims();
    auto jp = JetPoint::at(point);

    Ten3 C0 = values(geo.conn_C(jp));
    Ten3 D0 = values(geo.conn_D(jp));
    Ten3 F0 = t > 0 ? values(geo.conn_F(jp)) : Ten3{};
    Ten3 T0 = values(torsion(geo, jp));
    Mat A0 = values(geo.frame_A(jp));

    auto Cf = [&geo](const JetPoint& q) { return geo.conn_C(q); };
    auto Df = [&geo](const JetPoint& q) { return geo.conn_D(q); };
    auto Ff = [&geo](const JetPoint& q) { return geo.conn_F(q); };

    std::vector<Ten3> dC(m), dD(m), dF(m);
    for (int d = 0; d < m; ++d) {
        dC[d] = values(block_partial(Cf, jp, d));
        dD[d] = values(block_partial(Df, jp, d));
        if (t > 0) dF[d] = values(block_partial(Ff, jp, d));
    }
    auto delta_of = [&](const std::vector<Ten3>& dX, int a) {
        Ten3 r = dX[geo.tdirs()[a]];
        for (int k = 0; k < n; ++k) r = axpy(std::move(r), -A0[k][a], dX[geo.sdirs()[k]]);
        return r;
    };
    std::vector<Ten3> deltaF(t), deltaD(t), deltaC(t);
    for (int a = 0; a < t; ++a) {
        if (t > 0) deltaF[a] = delta_of(dF, a);
        deltaD[a] = delta_of(dD, a);
        deltaC[a] = delta_of(dC, a);
    }

    CurvatureBlocks R;
    // R^mu_{a b c} = δF^mu_{ab}/δx^c − δF^mu_{ac}/δx^b + F^e_{ab}F^mu_{ec} − F^e_{ac}F^mu_{eb}
    R.r_ddd = ten4(t, t, t, t);
    for (int mu = 0; mu < t; ++mu)
        for (int a = 0; a < t; ++a)
            for (int b = 0; b < t; ++b)
                for (int c = 0; c < t; ++c) {
                    double s = deltaF[c][mu][a][b] - deltaF[b][mu][a][c];
                    for (int e = 0; e < t; ++e)
                        s += F0[e][a][b] * F0[mu][e][c] - F0[e][a][c] * F0[mu][e][b];
                    R.r_ddd[mu][a][b][c] = s;
                }
    // R^mu_{a b i} = ∂F^mu_{ab}/∂x^i
    R.r_ddi = ten4(t, t, t, n);
    for (int mu = 0; mu < t; ++mu)
        for (int a = 0; a < t; ++a)
            for (int b = 0; b < t; ++b)
                for (int i = 0; i < n; ++i)
                    R.r_ddi[mu][a][b][i] = dF[geo.sdirs()[i]][mu][a][b];
    // R^mu_{a i j} = 0 for the adapted connection
    R.r_dii = ten4(t, t, n, n);
    // R^h_{i a b} = δD^h_{ib}/δx^a − δD^h_{ia}/δx^b + D^k_{ib}D^h_{ka} − D^k_{ia}D^h_{kb} − T^k_{ab}C^h_{ik}
    R.r_idd = ten4(n, n, t, t);
    for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < t; ++a)
                for (int b = 0; b < t; ++b) {
                    double s = deltaD[a][h][i][b] - deltaD[b][h][i][a];
                    for (int k = 0; k < n; ++k)
                        s += D0[k][i][b] * D0[h][k][a] - D0[k][i][a] * D0[h][k][b] -
                             T0[k][a][b] * C0[h][i][k];
                    R.r_idd[h][i][a][b] = s;
                }
    // R^h_{i a k} = ∂D^h_{ia}/∂x^k − δC^h_{ik}/δx^a + D^j_{ia}C^h_{jk} − C^j_{ik}D^h_{ja} + D^j_{ka}C^h_{ij}
    R.r_iak = ten4(n, n, t, n);
    for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < t; ++a)
                for (int k = 0; k < n; ++k) {
                    double s = dD[geo.sdirs()[k]][h][i][a] - deltaC[a][h][i][k];
                    for (int j = 0; j < n; ++j)
                        s += D0[j][i][a] * C0[h][j][k] - C0[j][i][k] * D0[h][j][a] +
                             D0[j][k][a] * C0[h][i][j];
                    R.r_iak[h][i][a][k] = s;
                }
    // R^h_{i j k} = ∂C^h_{ij}/∂x^k − ∂C^h_{ik}/∂x^j + C^l_{ij}C^h_{lk} − C^l_{ik}C^h_{lj}
    R.r_ijk = ten4(n, n, n, n);
    for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s = dC[geo.sdirs()[k]][h][i][j] - dC[geo.sdirs()[j]][h][i][k];
                    for (int l = 0; l < n; ++l)
                        s += C0[l][i][j] * C0[h][l][k] - C0[l][i][k] * C0[h][l][j];
                    R.r_ijk[h][i][j][k] = s;
                }
    return R;
}

VecField frame_field(const FrameGeometry& geo, int frameIndex) {
    const FrameGeometry* g = &geo;
    if (frameIndex < geo.ns()) {
        int dir = geo.sdirs()[frameIndex];
        return [g, dir](const JetPoint& q) {
            JVec r(g->dims(), q.zero());
            r[dir] += 1.0;
            return r;
        };
    }
    int a = frameIndex - geo.ns();
    return [g, a](const JetPoint& q) {
        JVec r(g->dims(), q.zero());
        r[g->tdirs()[a]] += 1.0;
        JMat A = g->frame_A(q);
        for (int k = 0; k < g->ns(); ++k) r[g->sdirs()[k]] -= A[k][a];
        return r;
    };
}

JVec bracket(const VecField& U, const VecField& V, const JetPoint& base,
             int dims) {
    JVec u = U(base), v = V(base);
    JVec r(dims, base.zero());
    for (int d = 0; d < dims; ++d) {
        JVec dV = block_partial(V, base, d);
        JVec dU = block_partial(U, base, d);
        for (int c = 0; c < dims; ++c) {
            r[c] += u[d] * dV[c];
            r[c] -= v[d] * dU[c];
        }
    }
    return r;
}

std::pair<JVec, JVec> to_adapted(const FrameGeometry& geo, const JVec& coord,
                                 const JetPoint& jp) {
    JVec t(geo.nt(), jp.zero()), s(geo.ns(), jp.zero());
    for (int a = 0; a < geo.nt(); ++a) t[a] = coord[geo.tdirs()[a]];
    JMat A = geo.frame_A(jp);
    for (int k = 0; k < geo.ns(); ++k) {
        s[k] = coord[geo.sdirs()[k]];
        for (int a = 0; a < geo.nt(); ++a) s[k] += t[a] * A[k][a];
    }
    return {s, t};
}

namespace {

using AdaptedJets = std::pair<JVec, JVec>;
using AdaptedField = std::function<AdaptedJets(const JetPoint&)>;

AdaptedField basis_field(const FrameGeometry& geo, int frameIndex) {
    const FrameGeometry* g = &geo;
    return [g, frameIndex](const JetPoint& q) {
        JVec s(g->ns(), q.zero()), t(g->nt(), q.zero());
        if (frameIndex < g->ns()) s[frameIndex] += 1.0;
        else t[frameIndex - g->ns()] += 1.0;
        return AdaptedJets{s, t};
    };
}

// ∇_X V at jp for a frame direction X and an adapted-component field V.
// Whole component blocks are differentiated at once.
AdaptedJets nabla_frame_field(const FrameGeometry& geo, int X,
                              const AdaptedField& V, const JetPoint& jp) {
    const int n = geo.ns(), t = geo.nt();
    auto [vs, vt] = V(jp);
    JVec rs(n, jp.zero()), rt(t, jp.zero());

    if (X < n) {
        int dir = geo.sdirs()[X];
        auto [dvs, dvt] = block_partial(V, jp, dir);
        JTen3 C = geo.conn_C(jp);
        for (int k = 0; k < n; ++k) {
            rs[k] = dvs[k];
            for (int i = 0; i < n; ++i) rs[k] += vs[i] * C[k][i][X];
        }
        // ∇_{∂} δ = 0: transversal components just get differentiated
        for (int c = 0; c < t; ++c) rt[c] = dvt[c];
    } else {
        int a = X - n;
        // δ_a-derivative of all components
        auto [dvs, dvt] = block_partial(V, jp, geo.tdirs()[a]);
        JMat A = geo.frame_A(jp);
        for (int k2 = 0; k2 < n; ++k2) {
            auto [es, et] = block_partial(V, jp, geo.sdirs()[k2]);
            for (int k = 0; k < n; ++k) dvs[k] -= A[k2][a] * es[k];
            for (int c = 0; c < t; ++c) dvt[c] -= A[k2][a] * et[c];
        }
        JTen3 D = geo.conn_D(jp);
        JTen3 F = geo.conn_F(jp);
        for (int k = 0; k < n; ++k) {
            rs[k] = dvs[k];
            for (int i = 0; i < n; ++i) rs[k] += vs[i] * D[k][i][a];
        }
        for (int c = 0; c < t; ++c) {
            rt[c] = dvt[c];
            for (int b = 0; b < t; ++b) rt[c] += vt[b] * F[c][b][a];
        }
    }
    return {rs, rt};
}

} // namespace

AdaptedVec curvature_commutator(const FrameGeometry& geo,
                                const std::vector<double>& point,
                                int X, int Y, int Z) {
    auto jp0 = JetPoint::at(point);
    AdaptedField Zf = basis_field(geo, Z);

    AdaptedField nablaYZ = [&geo, Y, &Zf](const JetPoint& q) {
        return nabla_frame_field(geo, Y, Zf, q);
    };
    AdaptedField nablaXZ = [&geo, X, &Zf](const JetPoint& q) {
        return nabla_frame_field(geo, X, Zf, q);
    };
    auto t1 = nabla_frame_field(geo, X, nablaYZ, jp0);
    auto t2 = nabla_frame_field(geo, Y, nablaXZ, jp0);

    JVec br = bracket(frame_field(geo, X), frame_field(geo, Y), jp0, geo.dims());
    auto [bs, bt] = to_adapted(geo, br, jp0);

    AdaptedVec r{Vec(geo.ns(), 0.0), Vec(geo.nt(), 0.0)};
    for (int k = 0; k < geo.ns(); ++k) r.s[k] = t1.first[k].value() - t2.first[k].value();
    for (int c = 0; c < geo.nt(); ++c) r.t[c] = t1.second[c].value() - t2.second[c].value();

    // ∇ along the bracket, tensorial in the direction slot
    for (int f = 0; f < geo.ns() + geo.nt(); ++f) {
        double w = f < geo.ns() ? bs[f].value() : bt[f - geo.ns()].value();
        if (w == 0.0) continue;
        auto nb = nabla_frame_field(geo, f, Zf, jp0);
        for (int k = 0; k < geo.ns(); ++k) r.s[k] -= w * nb.first[k].value();
        for (int c = 0; c < geo.nt(); ++c) r.t[c] -= w * nb.second[c].value();
    }
    return r;
}

MetricDerivative nabla_metric(const FrameGeometry& geo,
                              const std::vector<double>& point,
                              const AdaptedVec& X) {
    const int n = geo.ns(), t = geo.nt(), m = geo.dims();
    auto jp = JetPoint::at(point);
    Mat g = values(geo.metric_struct(jp));
    Mat gT = t > 0 ? values(geo.metric_trans(jp)) : Mat{};
    Ten3 C0 = values(geo.conn_C(jp));
    Ten3 F0 = t > 0 ? values(geo.conn_F(jp)) : Ten3{};
    Mat A0 = values(geo.frame_A(jp));

    auto gf = [&geo](const JetPoint& q) { return geo.metric_struct(q); };
    auto gTf = [&geo](const JetPoint& q) { return geo.metric_trans(q); };
    std::vector<Mat> dg(m), dgT(m);
    for (int d = 0; d < m; ++d) {
        dg[d] = values(block_partial(gf, jp, d));
        if (t > 0) dgT[d] = values(block_partial(gTf, jp, d));
    }
    auto delta_mat = [&](const std::vector<Mat>& dX, int a) {
        Mat r = dX[geo.tdirs()[a]];
        for (int k = 0; k < n; ++k)
            for (size_t i = 0; i < r.size(); ++i)
                for (size_t j = 0; j < r[i].size(); ++j)
                    r[i][j] -= A0[k][a] * dX[geo.sdirs()[k]][i][j];
        return r;
    };

    MetricDerivative out;
    out.ss = mat(n, n);
    out.tt = mat(t, t);
    out.st = mat(n, t);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                double term = dg[geo.sdirs()[k]][i][j];
                for (int h = 0; h < n; ++h)
                    term -= C0[h][i][k] * g[h][j] + C0[h][k][j] * g[i][h];
                s += X.s[k] * term;
            }
            for (int a = 0; a < t; ++a) s += X.t[a] * delta_mat(dg, a)[i][j];
            out.ss[i][j] = s;
        }
    for (int a = 0; a < t; ++a)
        for (int b = 0; b < t; ++b) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += X.s[i] * dgT[geo.sdirs()[i]][a][b];
            for (int mu = 0; mu < t; ++mu) {
                double term = delta_mat(dgT, mu)[a][b];
                for (int r = 0; r < t; ++r)
                    term -= F0[r][a][mu] * gT[r][b] + F0[r][mu][b] * gT[a][r];
                s += X.t[mu] * term;
            }
            out.tt[a][b] = s;
        }
    return out;
}

Mat nabla_trans_closed(const FrameGeometry& geo, const std::vector<double>& point,
                       const AdaptedVec& X) {
    const int n = geo.ns(), t = geo.nt();
    auto jp = JetPoint::at(point);
    Mat gT = values(geo.metric_trans(jp));
    Vec rho = values(geo.weyl_trans(jp));
    auto gTf = [&geo](const JetPoint& q) { return geo.metric_trans(q); };
    Mat r = mat(t, t);
    double xrho = 0.0;
    for (int a = 0; a < t; ++a) xrho += X.t[a] * rho[a];
    for (int i = 0; i < n; ++i) {
        Mat d = values(block_partial(gTf, jp, geo.sdirs()[i]));
        for (int a = 0; a < t; ++a)
            for (int b = 0; b < t; ++b) r[a][b] += X.s[i] * d[a][b];
    }
    for (int a = 0; a < t; ++a)
        for (int b = 0; b < t; ++b) r[a][b] -= xrho * gT[a][b];
    return r;
}

Mat nabla_struct_closed(const FrameGeometry& geo, const std::vector<double>& point,
                        const AdaptedVec& X) {
    const int n = geo.ns(), t = geo.nt(), m = geo.dims();
    auto jp = JetPoint::at(point);
    Mat g = values(geo.metric_struct(jp));
    Vec th = values(geo.weyl_struct(jp));
    Mat A0 = values(geo.frame_A(jp));
    auto gf = [&geo](const JetPoint& q) { return geo.metric_struct(q); };
    std::vector<Mat> dg(m);
    for (int d = 0; d < m; ++d) dg[d] = values(block_partial(gf, jp, d));

    double xth = 0.0;
    for (int k = 0; k < n; ++k) xth += X.s[k] * th[k];
    Mat r = mat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = -xth * g[i][j];
            for (int a = 0; a < t; ++a) {
                double dd = dg[geo.tdirs()[a]][i][j];
                for (int k = 0; k < n; ++k) dd -= A0[k][a] * dg[geo.sdirs()[k]][i][j];
                s += X.t[a] * dd;
            }
            r[i][j] = s;
        }
    return r;
}

double koszul_structural(const FrameGeometry& geo, const std::vector<double>& point,
                         int i, int j, int k) {
    auto jp = JetPoint::at(point);
    auto gf = [&geo](const JetPoint& q) { return geo.metric_struct(q); };
    Mat g = values(geo.metric_struct(jp));
    Vec th = values(geo.weyl_struct(jp));
    Mat dj = values(block_partial(gf, jp, geo.sdirs()[j]));
    Mat di = values(block_partial(gf, jp, geo.sdirs()[i]));
    Mat dk = values(block_partial(gf, jp, geo.sdirs()[k]));
    // brackets of structural coordinate fields vanish: only the metric
    // derivatives and the Weyl terms survive
    return dj[i][k] + di[k][j] - dk[j][i] + th[j] * g[i][k] + th[i] * g[k][j] -
           th[k] * g[j][i];
}

Ten3 koszul_C(const FrameGeometry& geo, const std::vector<double>& point) {
    const int n = geo.ns();
    auto jp = JetPoint::at(point);
    Mat gInv = values(invert(geo.metric_struct(jp), MetricKind::Structural));
    Ten3 C = ten3(n, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Vec K(n);
            for (int l = 0; l < n; ++l) K[l] = koszul_structural(geo, point, i, j, l);
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += gInv[k][l] * K[l];
                C[k][i][j] = 0.5 * s;
            }
        }
    return C;
}

Ten3 bracket_D(const FrameGeometry& geo, const std::vector<double>& point) {
    const int n = geo.ns(), t = geo.nt();
    auto jp = JetPoint::at(point);
    Ten3 D = ten3(n, n, t);
    for (int a = 0; a < t; ++a) {
        VecField da = frame_field(geo, n + a);
        for (int i = 0; i < n; ++i) {
            JVec br = bracket(da, frame_field(geo, i), jp, geo.dims());
            auto [s, tt] = to_adapted(geo, br, jp);
            for (int k = 0; k < n; ++k) D[k][i][a] = s[k].value();
        }
    }
    return D;
}

Ten3 bracket_torsion(const FrameGeometry& geo, const std::vector<double>& point) {
    const int n = geo.ns(), t = geo.nt();
    auto jp = JetPoint::at(point);
    Ten3 T = ten3(n, t, t);
    for (int a = 0; a < t; ++a)
        for (int b = 0; b < t; ++b) {
            if (a == b) continue;
            JVec br = bracket(frame_field(geo, n + a), frame_field(geo, n + b), jp,
                              geo.dims());
            auto [s, tt] = to_adapted(geo, br, jp);
            for (int k = 0; k < n; ++k) T[k][a][b] = s[k].value();
        }
    return T;
}

Vec dprime_residual(const FrameGeometry& geo, const std::vector<double>& point,
                    int X, int Y) {
    const int n = geo.ns();
    if (Y >= n) return Vec(n, 0.0); // QY = 0 kills every term
    auto jp0 = JetPoint::at(point);

    auto t1 = nabla_frame_field(geo, X, basis_field(geo, Y), jp0).first;
    Vec r(n, 0.0);
    for (int k = 0; k < n; ++k) r[k] = t1[k].value();

    if (X < n) {
        auto t2 = nabla_frame_field(geo, Y, basis_field(geo, X), jp0).first;
        for (int k = 0; k < n; ++k) r[k] -= t2[k].value();
    }
    JVec br = bracket(frame_field(geo, X), frame_field(geo, Y), jp0, geo.dims());
    auto [bs, bt] = to_adapted(geo, br, jp0);
    for (int k = 0; k < n; ++k) r[k] -= bs[k].value();
    return r;
}

Vec nijenhuis(const FrameGeometry& geo, const std::vector<double>& point,
              int X, int Y) {
    auto jp = JetPoint::at(point);
    JVec br = bracket(frame_field(geo, X), frame_field(geo, Y), jp, geo.dims());
    int sx = X < geo.ns() ? 1 : -1;
    int sy = Y < geo.ns() ? 1 : -1;

    auto [bs, bt] = to_adapted(geo, br, jp);
    // P(br): structural part kept, transversal part flipped
    JMat A = geo.frame_A(jp);
    JVec pbr(geo.dims(), jp.zero());
    for (int k = 0; k < geo.ns(); ++k) {
        pbr[geo.sdirs()[k]] = bs[k];
        for (int a = 0; a < geo.nt(); ++a) pbr[geo.sdirs()[k]] += bt[a] * A[k][a];
    }
    for (int a = 0; a < geo.nt(); ++a) pbr[geo.tdirs()[a]] = -bt[a];

    Vec r(geo.dims(), 0.0);
    double c1 = 1.0 + sx * sy, c2 = double(sx + sy);
    for (int c = 0; c < geo.dims(); ++c)
        r[c] = c1 * br[c].value() - c2 * pbr[c].value();
    return r;
}

} // namespace subweyl
