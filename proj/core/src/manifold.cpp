#include "subweyl/manifold.hpp"

#include <cmath>

namespace subweyl {

SymbolTable ManifoldSpec::symbols() const {
    SymbolTable t;
    t.names = coords;
    t.names.insert(t.names.end(), constant_names.begin(), constant_names.end());
    return t;
}

JVec ManifoldSpec::symbol_values(const JetPoint& jp) const {
    JVec v = jp.coord;
    for (double c : constant_values) v.push_back(jp.lift(c));
    return v;
}

namespace {

JVec with_constants(const JetPoint& jp, const std::vector<double>& consts) {
    JVec v = jp.coord;
    for (double c : consts) v.push_back(jp.lift(c));
    return v;
}

} // namespace

SpecEntry ManifoldSpec::entry_from(const Expr& e) const {
    std::vector<double> consts = constant_values;
    return SpecEntry{[consts, e](const JetPoint& jp) {
                         return e.eval(std::span<const Jet>(with_constants(jp, consts)));
                     },
                     e};
}

SpecEntry ManifoldSpec::zero_entry() const {
    return SpecEntry{[](const JetPoint& jp) { return jp.zero(); }, std::nullopt};
}

namespace eval {

Jet metric_entry(const ManifoldSpec& spec, int a, int b, const JetPoint& jp) {
    return spec.metric[a][b](jp);
}

Jet weyl_entry(const ManifoldSpec& spec, int a, const JetPoint& jp) {
    return spec.weyl[a](jp);
}

FrameEval FrameEval::at(const ManifoldSpec& spec, const JetPoint& jp) {
    const int n = spec.n, p = spec.p;
    FrameEval fe;
    fe.gij = jmat(n, n, jp);
    fe.giA = jmat(n, p, jp);
    fe.gAB = jmat(p, p, jp);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) fe.gij[i][j] = metric_entry(spec, i, j, jp);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < p; ++a) fe.giA[i][a] = metric_entry(spec, i, n + a, jp);
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) fe.gAB[a][b] = metric_entry(spec, n + a, n + b, jp);

    fe.gInv = invert(fe.gij, MetricKind::Structural);

    // A^i_alpha = g^{ij} g_{j alpha}
    fe.A = jmat(n, p, jp);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < p; ++a) {
            Jet s = jp.zero();
            for (int j = 0; j < n; ++j) s += fe.gInv[i][j] * fe.giA[j][a];
            fe.A[i][a] = s;
        }

    // adapted transversal block: the pairing of the delta-frame with itself
    fe.gT = jmat(p, p, jp);
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) {
            Jet s = fe.gAB[a][b];
            for (int i = 0; i < n; ++i) {
                s -= fe.A[i][a] * fe.giA[i][b];
                s -= fe.A[i][b] * fe.giA[i][a];
            }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    s += fe.A[i][a] * fe.A[j][b] * fe.gij[i][j];
            fe.gT[a][b] = s;
        }

    // adapted Weyl components: theta_i = w_i, rho_a = w_a - w_i A^i_a
    fe.theta = jvec(n, jp);
    fe.rho = jvec(p, jp);
    for (int i = 0; i < n; ++i) fe.theta[i] = weyl_entry(spec, i, jp);
    for (int a = 0; a < p; ++a) {
        Jet s = weyl_entry(spec, n + a, jp);
        for (int i = 0; i < n; ++i) s -= fe.theta[i] * fe.A[i][a];
        fe.rho[a] = s;
    }
    return fe;
}

JTen3 christoffel(const ManifoldSpec& spec, const JetPoint& jp) {
    const int n = spec.n;
    // metric derivatives along structural directions only
    std::vector<JMat> dg(n);
    for (int l = 0; l < n; ++l) {
        dg[l] = jmat(n, n, jp);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                dg[l][i][j] = partial_jet(
                    [&spec, i, j](const JetPoint& q) { return metric_entry(spec, i, j, q); },
                    jp, l);
    }
    JMat gij = jmat(n, n, jp);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gij[i][j] = metric_entry(spec, i, j, jp);
    JMat gInv = invert(gij, MetricKind::Structural);

    JTen3 gamma = jten3(n, n, n, jp);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Jet s = jp.zero();
                for (int l = 0; l < n; ++l)
                    s += gInv[k][l] * (dg[i][l][j] + dg[j][i][l] - dg[l][i][j]);
                gamma[k][i][j] = 0.5 * s;
            }
    return gamma;
}

} // namespace eval

MetricBlocks metric_eval(const ManifoldSpec& spec, const std::vector<double>& point) {
    auto jp = JetPoint::at(point);
    auto fe = eval::FrameEval::at(spec, jp);
    return MetricBlocks{values(fe.gij), values(fe.giA), values(fe.gAB)};
}

AdaptedFrame adapted_frame(const ManifoldSpec& spec, const std::vector<double>& point) {
    auto jp = JetPoint::at(point);
    auto fe = eval::FrameEval::at(spec, jp);
    return AdaptedFrame{values(fe.A), values(fe.gInv), values(fe.gT)};
}

WeylAdapted adapt_weyl(const ManifoldSpec& spec, const std::vector<double>& point,
                       const AdaptedFrame&) {
    return adapt_weyl(spec, point);
}

WeylAdapted adapt_weyl(const ManifoldSpec& spec, const std::vector<double>& point) {
    auto jp = JetPoint::at(point);
    auto fe = eval::FrameEval::at(spec, jp);
    WeylAdapted w;
    w.theta = values(fe.theta);
    w.rho = values(fe.rho);
    Mat gInv = values(fe.gInv);
    w.thetaUp.assign(spec.n, 0.0);
    for (int k = 0; k < spec.n; ++k)
        for (int l = 0; l < spec.n; ++l) w.thetaUp[k] += gInv[k][l] * w.theta[l];
    w.rhoUp.assign(spec.p, 0.0);
    if (spec.p > 0) {
        Mat gTInv = values(invert(fe.gT, MetricKind::Transversal));
        for (int c = 0; c < spec.p; ++c)
            for (int a = 0; a < spec.p; ++a) w.rhoUp[c] += gTInv[c][a] * w.rho[a];
    }
    return w;
}

Ten3 christoffel(const ManifoldSpec& spec, const std::vector<double>& point) {
    return values(eval::christoffel(spec, JetPoint::at(point)));
}

ManifoldSpec gauge_transform(const ManifoldSpec& spec, const Expr& u) {
    ManifoldSpec out = spec;
    out.name = spec.name + "+gauge";
    Expr scale = Expr::exponential(u);
    std::vector<double> consts = spec.constant_values;
    ScalarField ufield = [consts, u](const JetPoint& jp) {
        return u.eval(std::span<const Jet>(with_constants(jp, consts)));
    };
    for (int a = 0; a < spec.dim(); ++a)
        for (int b = 0; b < spec.dim(); ++b) {
            const SpecEntry& g = spec.metric[a][b];
            if (g.expr.has_value()) {
                out.metric[a][b] = spec.entry_from(Expr::product(scale, *g.expr));
            } else {
                ScalarField gf = g.field;
                out.metric[a][b] = SpecEntry{
                    [ufield, gf](const JetPoint& jp) { return exp(ufield(jp)) * gf(jp); },
                    std::nullopt};
            }
        }
    // w_a - du_a, with du taken through jets
    for (int a = 0; a < spec.dim(); ++a) {
        ScalarField wf = spec.weyl[a].field;
        out.weyl[a] = SpecEntry{
            [wf, ufield, a](const JetPoint& jp) {
                return wf(jp) - partial_jet(ufield, jp, a);
            },
            std::nullopt};
    }
    return out;
}

} // namespace subweyl
