#include "subweyl/finsler.hpp"

#include <cmath>
#include <numeric>

namespace subweyl {

namespace {

std::vector<int> iota_range(int from, int count) {
    std::vector<int> v(count);
    std::iota(v.begin(), v.end(), from);
    return v;
}

double fiber_norm(const std::vector<double>& z, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += z[n + i] * z[n + i];
    return std::sqrt(s);
}

} // namespace

std::vector<double> tn_point(const Vec& x, const Vec& y) {
    std::vector<double> z = x;
    z.insert(z.end(), y.begin(), y.end());
    return z;
}

SymbolTable FinslerSpec::symbols() const {
    SymbolTable t;
    t.names = base_coords;
    t.names.insert(t.names.end(), fiber_coords.begin(), fiber_coords.end());
    t.names.insert(t.names.end(), constant_names.begin(), constant_names.end());
    return t;
}

TangentGeometry::TangentGeometry(const FinslerSpec& fs, WeylSource source)
    : FrameGeometry(iota_range(fs.n, fs.n), iota_range(0, fs.n)),
      spec_(fs), source_(source) {}

TangentGeometry::TangentGeometry(const FinslerSpec& fs, Vec theta, Vec rho)
    : FrameGeometry(iota_range(fs.n, fs.n), iota_range(0, fs.n)),
      spec_(fs), source_(WeylSource::Constant),
      const_theta_(std::move(theta)), const_rho_(std::move(rho)) {}

Jet TangentGeometry::F2(const JetPoint& jp) const {
    if (fiber_norm(jp.x, spec_.n) < 1e-8)
        throw OnZeroSection("evaluation on the zero section of the tangent bundle");
    JVec vals = jp.coord;
    for (double c : spec_.constant_values) vals.push_back(jp.lift(c));
    Jet f = spec_.F.eval(std::span<const Jet>(vals));
    return f * f;
}

JMat TangentGeometry::hessian(const JetPoint& jp) const {
    return memo<JMat>(kUserTag + 0, jp, [&] { return hessian_uncached(jp); });
}

JMat TangentGeometry::hessian_uncached(const JetPoint& jp) const {
    const int n = spec_.n;
    ScalarField f2 = [this](const JetPoint& q) { return F2(q); };
    JMat g = jmat(n, n, jp);
    for (int a = 0; a < n; ++a) {
        ScalarField da = [this, a](const JetPoint& q) {
            return partial_jet([this](const JetPoint& r) { return F2(r); }, q,
                               spec_.n + a);
        };
        for (int b = a; b < n; ++b) {
            g[a][b] = 0.5 * partial_jet(da, jp, spec_.n + b);
            g[b][a] = g[a][b];
        }
    }
    Mat gv = values(g);
    Vec eig = sym_eigenvalues(gv);
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += gv[i][i];
    if (eig.front() <= 1e-10 * tr / n)
        throw NotPositiveDefinite(
            "fiber hessian is not positive definite (min eigenvalue " +
            std::to_string(eig.front()) + ")");
    return g;
}

JVec TangentGeometry::spray_G(const JetPoint& jp) const {
    return memo<JVec>(kUserTag + 1, jp, [&] { return spray_G_uncached(jp); });
}

JVec TangentGeometry::spray_G_uncached(const JetPoint& jp) const {
    const int n = spec_.n;
    JMat g = hessian(jp);
    JMat gInv = invert(g, MetricKind::FiberHessian);
    ScalarField f2 = [this](const JetPoint& q) { return F2(q); };
    // ∂F²/∂x^b and (∂²F²/∂y^b∂x^c) y^c
    JVec rhs(n, jp.zero());
    for (int b = 0; b < n; ++b) {
        ScalarField dyb = [this, b](const JetPoint& q) {
            return partial_jet([this](const JetPoint& r) { return F2(r); }, q,
                               spec_.n + b);
        };
        Jet s = -partial_jet(f2, jp, b);
        for (int c = 0; c < n; ++c) s += partial_jet(dyb, jp, c) * jp.coord[n + c];
        rhs[b] = s;
    }
    JVec G(n, jp.zero());
    for (int a = 0; a < n; ++a) {
        Jet s = jp.zero();
        for (int b = 0; b < n; ++b) s += gInv[a][b] * rhs[b];
        G[a] = 0.25 * s;
    }
    return G;
}

JMat TangentGeometry::spray_Gb(const JetPoint& jp) const {
    return memo<JMat>(kUserTag + 2, jp, [&] { return spray_Gb_uncached(jp); });
}

JMat TangentGeometry::spray_Gb_uncached(const JetPoint& jp) const {
    const int n = spec_.n;
    JMat Gb = jmat(n, n, jp);
    for (int b = 0; b < n; ++b) {
        JVec d = block_partial([this](const JetPoint& q) { return spray_G(q); },
                               jp, n + b);
        for (int a = 0; a < n; ++a) Gb[a][b] = d[a];
    }
    return Gb;
}

JMat TangentGeometry::frame_A_impl(const JetPoint& jp) const { return spray_Gb(jp); }
JMat TangentGeometry::metric_struct_impl(const JetPoint& jp) const { return hessian(jp); }
JMat TangentGeometry::metric_trans_impl(const JetPoint& jp) const { return hessian(jp); }

JVec TangentGeometry::weyl_struct_impl(const JetPoint& jp) const {
    const int n = spec_.n;
    JVec th(n, jp.zero());
    switch (source_) {
        case WeylSource::Zero:
        case WeylSource::Cartan: break;
        case WeylSource::Constant:
            for (int a = 0; a < n; ++a) th[a] += const_theta_[a];
            break;
        case WeylSource::Spec: {
            JVec vals = jp.coord;
            for (double c : spec_.constant_values) vals.push_back(jp.lift(c));
            for (int a = 0; a < n; ++a)
                if (spec_.weyl.size() == size_t(2 * n) && spec_.weyl[n + a])
                    th[a] = spec_.weyl[n + a]->eval(std::span<const Jet>(vals));
            break;
        }
    }
    return th;
}

JVec TangentGeometry::weyl_trans_impl(const JetPoint& jp) const {
    const int n = spec_.n;
    JVec rho(n, jp.zero());
    switch (source_) {
        case WeylSource::Zero: break;
        case WeylSource::Cartan:
            for (int a = 0; a < n; ++a)
                rho[a] = 0.5 * partial_jet([this](const JetPoint& q) { return F2(q); },
                                           jp, n + a);
            break;
        case WeylSource::Constant:
            for (int a = 0; a < n; ++a) rho[a] += const_rho_[a];
            break;
        case WeylSource::Spec: {
            JVec vals = jp.coord;
            for (double c : spec_.constant_values) vals.push_back(jp.lift(c));
            JVec th = weyl_struct(jp);
            JMat Gb = spray_Gb(jp);
            for (int a = 0; a < n; ++a) {
                Jet w = jp.zero();
                if (spec_.weyl.size() == size_t(2 * n) && spec_.weyl[a])
                    w = spec_.weyl[a]->eval(std::span<const Jet>(vals));
                for (int b = 0; b < n; ++b) w -= th[b] * Gb[b][a];
                rho[a] = w;
            }
            break;
        }
    }
    return rho;
}

JTen3 TangentGeometry::conn_C_impl(const JetPoint& jp) const {
    const int n = spec_.n;
    JMat g = hessian(jp);
    JMat gInv = invert(g, MetricKind::FiberHessian);
    // ∂g_ab/∂y^d
    std::vector<JMat> dg(n);
    for (int d = 0; d < n; ++d)
        dg[d] = block_partial([this](const JetPoint& q) { return hessian(q); }, jp,
                              n + d);
    JVec th = weyl_struct(jp);
    JVec thUp(n, jp.zero());
    for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) thUp[c] += gInv[c][d] * th[d];

    JTen3 C = jten3(n, n, n, jp);
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                Jet s = jp.zero();
                for (int d = 0; d < n; ++d) s += gInv[c][d] * dg[d][a][b];
                if (c == b) s += th[a];
                if (c == a) s += th[b];
                s -= thUp[c] * g[a][b];
                C[c][a][b] = 0.5 * s;
            }
    return C;
}

HessianMetric hessian_metric(const FinslerSpec& fs, const Vec& x, const Vec& y) {
    TangentGeometry geo(fs, WeylSource::Zero);
    auto jp = JetPoint::at(tn_point(x, y));
    JMat g = geo.hessian(jp);
    return HessianMetric{values(g), values(invert(g, MetricKind::FiberHessian))};
}

SprayData spray(const FinslerSpec& fs, const Vec& x, const Vec& y) {
    TangentGeometry geo(fs, WeylSource::Zero);
    auto jp = JetPoint::at(tn_point(x, y));
    SprayData s;
    s.G = values(geo.spray_G(jp));
    s.Gb = values(geo.spray_Gb(jp));
    s.Gbc = ten3(fs.n, fs.n, fs.n);
    for (int c = 0; c < fs.n; ++c) {
        JMat d = block_partial([&geo](const JetPoint& q) { return geo.spray_Gb(q); },
                               jp, fs.n + c);
        for (int a = 0; a < fs.n; ++a)
            for (int b = 0; b < fs.n; ++b) s.Gbc[a][b][c] = d[a][b].value();
    }
    return s;
}

HorizontalFrame horizontal_frame(const FinslerSpec& fs, const Vec& x, const Vec& y) {
    const int n = fs.n;
    SprayData s = spray(fs, x, y);
    HorizontalFrame hf;
    hf.delta_x = mat(n, 2 * n);
    hf.vert = mat(n, 2 * n);
    hf.dx = mat(n, 2 * n);
    hf.delta_y = mat(n, 2 * n);
    for (int a = 0; a < n; ++a) {
        hf.delta_x[a][a] = 1.0;
        for (int b = 0; b < n; ++b) hf.delta_x[a][n + b] = -s.Gb[b][a];
        hf.vert[a][n + a] = 1.0;
        hf.dx[a][a] = 1.0;
        hf.delta_y[a][n + a] = 1.0;
        for (int b = 0; b < n; ++b) hf.delta_y[a][b] = s.Gb[a][b];
    }
    return hf;
}

Mat sasaki_metric(const FinslerSpec& fs, const Vec& x, const Vec& y) {
    const int n = fs.n;
    HessianMetric h = hessian_metric(fs, x, y);
    Mat G = mat(2 * n, 2 * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            G[a][b] = h.g[a][b];         // horizontal block
            G[n + a][n + b] = h.g[a][b]; // vertical block
        }
    return G;
}

TangentWeyl cartan_form(const FinslerSpec& fs, const Vec& x, const Vec& y) {
    const int n = fs.n;
    TangentGeometry geo(fs, WeylSource::Cartan);
    auto jp = JetPoint::at(tn_point(x, y));
    TangentWeyl w;
    w.rho = values(geo.weyl_trans(jp));
    w.theta.assign(n, 0.0);
    w.thetaUp.assign(n, 0.0);
    HessianMetric h = hessian_metric(fs, x, y);
    w.rhoUp.assign(n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) w.rhoUp[a] += h.gInv[a][b] * w.rho[b];
    return w;
}

TangentWeyl spec_weyl_adapted(const FinslerSpec& fs, const Vec& x, const Vec& y) {
    const int n = fs.n;
    TangentGeometry geo(fs, WeylSource::Spec);
    auto jp = JetPoint::at(tn_point(x, y));
    TangentWeyl w;
    w.theta = values(geo.weyl_struct(jp));
    w.rho = values(geo.weyl_trans(jp));
    HessianMetric h = hessian_metric(fs, x, y);
    w.thetaUp.assign(n, 0.0);
    w.rhoUp.assign(n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            w.thetaUp[a] += h.gInv[a][b] * w.theta[b];
            w.rhoUp[a] += h.gInv[a][b] * w.rho[b];
        }
    return w;
}

ConnectionBlocks vranceanu_finsler(const FinslerSpec& fs, const TangentWeyl& W,
                                   const Vec& x, const Vec& y) {
    TangentGeometry geo(fs, W.theta, W.rho);
    auto jp = JetPoint::at(tn_point(x, y));
    ConnectionBlocks b;
    b.C = values(geo.conn_C(jp));
    b.D = values(geo.conn_D(jp));
    b.F = values(geo.conn_F(jp));
    return b;
}

Ten3 landsberg_residual(const FinslerSpec& fs, const Vec& x, const Vec& y) {
    TangentGeometry geo(fs, WeylSource::Zero);
    auto jp = JetPoint::at(tn_point(x, y));
    Ten3 lhs = values(geo.conn_F(jp)); // pure metric part: no Weyl terms
    SprayData s = spray(fs, x, y);
    const int n = fs.n;
    Ten3 r = ten3(n, n, n);
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) r[c][a][b] = lhs[c][a][b] - s.Gbc[c][a][b];
    return r;
}

bool riemannian_base(const FinslerSpec& fs) {
    // compare hessians at paired fiber points over a few base points
    const int n = fs.n;
    Vec x(n), y1(n), y2(n);
    for (int trial = 0; trial < 3; ++trial) {
        for (int i = 0; i < n; ++i) {
            auto [lo, hi] = fs.domain.range[i];
            x[i] = lo + (hi - lo) * (0.25 + 0.25 * trial);
            auto [flo, fhi] = fs.domain.range[n + i];
            double mid = 0.5 * (flo + fhi);
            y1[i] = mid == 0.0 ? 0.7 : mid;
            y2[i] = y1[i] * (0.6 + 0.1 * i) + 0.3;
        }
        try {
            HessianMetric h1 = hessian_metric(fs, x, y1);
            HessianMetric h2 = hessian_metric(fs, x, y2);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if (std::abs(h1.g[a][b] - h2.g[a][b]) > 1e-10) return false;
        } catch (const Error&) {
            return false;
        }
    }
    return true;
}

namespace {

void require_riemannian(const FinslerSpec& fs) {
    if (!riemannian_base(fs))
        throw NotRiemannianBase("fundamental tensor depends on the fiber point");
}

Vec reference_fiber(const FinslerSpec& fs) { return Vec(fs.n, 1.0); }

} // namespace

Mat base_metric(const FinslerSpec& fs, const Vec& x) {
    require_riemannian(fs);
    return hessian_metric(fs, x, reference_fiber(fs)).g;
}

namespace {

// base metric as a jet field over TN points (y held fixed; valid in the
// Riemannian case where the hessian is fiber-independent)
JMat base_metric_jets(const FinslerSpec& fs, const JetPoint& jp) {
    TangentGeometry geo(fs, WeylSource::Zero);
    return geo.hessian(jp);
}

JTen3 base_christoffel_jets(const FinslerSpec& fs, const JetPoint& jp) {
    const int n = fs.n;
    std::vector<JMat> dg(n);
    for (int d = 0; d < n; ++d)
        dg[d] = block_partial(
            [&fs](const JetPoint& q) { return base_metric_jets(fs, q); }, jp, d);
    JMat g = base_metric_jets(fs, jp);
    JMat gInv = invert(g, MetricKind::FiberHessian);
    JTen3 gamma = jten3(n, n, n, jp);
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                Jet s = jp.zero();
                for (int d = 0; d < n; ++d)
                    s += gInv[c][d] * (dg[a][d][b] + dg[b][a][d] - dg[d][a][b]);
                gamma[c][a][b] = 0.5 * s;
            }
    return gamma;
}

} // namespace

Ten3 base_christoffel(const FinslerSpec& fs, const Vec& x) {
    require_riemannian(fs);
    auto jp = JetPoint::at(tn_point(x, reference_fiber(fs)));
    return values(base_christoffel_jets(fs, jp));
}

Ten4 base_riemann(const FinslerSpec& fs, const Vec& x) {
    require_riemannian(fs);
    const int n = fs.n;
    auto jp = JetPoint::at(tn_point(x, reference_fiber(fs)));
    Ten3 gamma = values(base_christoffel_jets(fs, jp));
    std::vector<Ten3> dgamma(n);
    for (int d = 0; d < n; ++d)
        dgamma[d] = values(block_partial(
            [&fs](const JetPoint& q) { return base_christoffel_jets(fs, q); }, jp, d));

    Ten4 R = ten4(n, n, n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    double s = dgamma[a][j][i][b] - dgamma[b][j][i][a];
                    for (int k = 0; k < n; ++k)
                        s += gamma[k][i][b] * gamma[j][k][a] -
                             gamma[k][i][a] * gamma[j][k][b];
                    R[j][i][a][b] = s;
                }
    return R;
}

FinslerCurvature finsler_curvature_torsion(const FinslerSpec& fs, const Vec& x,
                                           const Vec& y) {
    require_riemannian(fs);
    const int n = fs.n;
    Mat g = hessian_metric(fs, x, y).g;
    Ten4 Rg = base_riemann(fs, x);

    FinslerCurvature out;
    out.mixed = ten4(n, n, n, n);
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int i = 0; i < n; ++i) {
                    double s = 0.0;
                    if (c == a) s += g[i][b];
                    if (c == b) s += g[a][i];
                    if (c == i) s -= g[a][b];
                    out.mixed[c][a][b][i] = 0.5 * s;
                }
    out.torsion = ten3(n, n, n);
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0.0;
                for (int d = 0; d < n; ++d) s += Rg[c][d][a][b] * y[d];
                out.torsion[c][a][b] = s;
            }
    out.structural = Rg;
    return out;
}

MetricDerivative nabla_sasaki(const FinslerSpec& fs, const AdaptedVec& X,
                              const Vec& x, const Vec& y) {
    require_riemannian(fs);
    const int n = fs.n;
    auto jp = JetPoint::at(tn_point(x, y));
    Mat g = hessian_metric(fs, x, y).g;

    MetricDerivative out;
    out.ss = mat(n, n);
    out.tt = mat(n, n);
    out.st = mat(n, n);
    // vertical block: X^a ∂g_ij/∂x^a
    for (int a = 0; a < n; ++a) {
        Mat dg = values(block_partial(
            [&fs](const JetPoint& q) { return base_metric_jets(fs, q); }, jp, a));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out.ss[i][j] += X.t[a] * dg[i][j];
    }
    // horizontal block: −(g_ci X^c y^i) g_ab
    double xy = 0.0;
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < n; ++i) xy += g[c][i] * X.t[c] * y[i];
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out.tt[a][b] = -xy * g[a][b];
    return out;
}

LiouvilleDerivs liouville_raw(const FinslerSpec& fs, const TangentWeyl& W,
                              const AdaptedVec& X, const Vec& x, const Vec& y) {
    const int n = fs.n;
    ConnectionBlocks b = vranceanu_finsler(fs, W, x, y);
    SprayData s = spray(fs, x, y);

    LiouvilleDerivs out;
    out.vertical.assign(n, 0.0);
    out.horizontal.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double v = X.s[i];
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) v += X.s[j] * y[k] * b.C[i][k][j];
        for (int c = 0; c < n; ++c) {
            double t = -s.Gb[i][c];
            for (int bb = 0; bb < n; ++bb) t += b.D[i][bb][c] * y[bb];
            v += X.t[c] * t;
        }
        out.vertical[i] = v;
    }
    for (int a = 0; a < n; ++a) {
        double v = X.s[a]; // vertical components reindexed through δ^a_i
        for (int c = 0; c < n; ++c) {
            double t = -s.Gb[a][c];
            for (int bb = 0; bb < n; ++bb) t += b.F[a][bb][c] * y[bb];
            v += X.t[c] * t;
        }
        out.horizontal[a] = v;
    }
    return out;
}

LiouvilleDerivs liouville_general_closed(const FinslerSpec& fs, const TangentWeyl& W,
                                         const AdaptedVec& X, const Vec& x,
                                         const Vec& y) {
    const int n = fs.n;
    Mat g = hessian_metric(fs, x, y).g;
    LiouvilleDerivs out;
    out.vertical.assign(n, 0.0);
    out.horizontal.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double v = X.s[i];
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double term = 0.0;
                if (i == k) term += W.theta[j];
                if (i == j) term += W.theta[k];
                term -= W.thetaUp[i] * g[j][k];
                v += 0.5 * X.s[j] * y[k] * term;
            }
        out.vertical[i] = v;
    }
    for (int a = 0; a < n; ++a) {
        double v = X.s[a];
        for (int bb = 0; bb < n; ++bb)
            for (int c = 0; c < n; ++c) {
                double term = 0.0;
                if (a == c) term += W.rho[bb];
                if (a == bb) term += W.rho[c];
                term -= W.rhoUp[a] * g[bb][c];
                v += 0.5 * X.t[bb] * y[c] * term;
            }
        out.horizontal[a] = v;
    }
    return out;
}

LiouvilleDerivs liouville_cartan_closed(const FinslerSpec& fs, const AdaptedVec& X,
                                        const Vec& x, const Vec& y) {
    const int n = fs.n;
    TangentGeometry geo(fs, WeylSource::Cartan);
    double f2 = geo.F2(JetPoint::at(tn_point(x, y))).value();
    LiouvilleDerivs out;
    out.vertical = X.s;
    out.horizontal.assign(n, 0.0);
    for (int a = 0; a < n; ++a) out.horizontal[a] = X.s[a] + 0.5 * f2 * X.t[a];
    return out;
}

} // namespace subweyl
