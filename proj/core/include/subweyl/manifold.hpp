#ifndef SUBWEYL_MANIFOLD_HPP
#define SUBWEYL_MANIFOLD_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "subweyl/expr.hpp"
#include "subweyl/linalg.hpp"

namespace subweyl {

struct Box {
    std::vector<std::array<double, 2>> range; // per-coordinate [lo, hi]

    std::vector<double> center() const {
        std::vector<double> c(range.size());
        for (size_t i = 0; i < range.size(); ++i)
            c[i] = 0.5 * (range[i][0] + range[i][1]);
        return c;
    }
};

// Expectations attached to built-in fixtures; verification suites consult
// them for the checks whose expected outcome is a property of the fixture
// rather than an identity.
struct FixtureTags {
    bool integrable_complement = false; // A vanishes identically
    bool nonintegrable = false;
    bool bundlelike = false;
    bool nonbundlelike = false;
    bool flat_base = false;        // Finsler, Riemannian base
    bool curved_base = false;
    bool sphere_closed_forms = false;
    bool locally_minkowski = false;
};

// An evaluable scalar entry of a spec, optionally backed by a parsed
// expression (always, for file-loaded specs; gauge-transformed Weyl
// components are evaluator-only).
struct SpecEntry {
    ScalarField field;
    std::optional<Expr> expr;

    Jet operator()(const JetPoint& jp) const { return field(jp); }
};

// Foliated semi-Riemannian data in an adapted chart: coordinates x^1..x^n
// span the structural distribution (leaves), x^{n+1}..x^{n+p} the
// transversal directions. The metric is given in the coordinate frame, the
// Weyl one-form in the coordinate coframe.
struct ManifoldSpec {
    int n = 0, p = 0;
    std::vector<std::string> coords;
    std::vector<std::string> constant_names;
    std::vector<double> constant_values;
    std::vector<std::vector<SpecEntry>> metric; // (n+p)^2, symmetric
    std::vector<SpecEntry> weyl;                // n+p components
    Box domain;
    std::string name;
    FixtureTags tags;

    int dim() const { return n + p; }
    SymbolTable symbols() const;
    // symbol values for expression evaluation at a jet point
    JVec symbol_values(const JetPoint& jp) const;
    SpecEntry entry_from(const Expr& e) const;
    SpecEntry zero_entry() const;
};

// Pointwise views of the geometry (plain doubles).
struct MetricBlocks {
    Mat gij;  // structural, n x n
    Mat giA;  // mixed, n x p
    Mat gAB;  // transversal coordinate block, p x p
};

struct AdaptedFrame {
    Mat A;      // A^i_alpha, n x p
    Mat gInv;   // g^{ij}
    Mat gTrans; // g(delta_alpha, delta_beta), p x p
};

struct WeylAdapted {
    Vec theta, rho;     // components against delta x^i / dx^alpha
    Vec thetaUp, rhoUp; // raised with g^{ij} / gTrans^{alpha beta}
};

MetricBlocks metric_eval(const ManifoldSpec&, const std::vector<double>& point);
AdaptedFrame adapted_frame(const ManifoldSpec&, const std::vector<double>& point);
WeylAdapted adapt_weyl(const ManifoldSpec&, const std::vector<double>& point,
                       const AdaptedFrame& frame);
WeylAdapted adapt_weyl(const ManifoldSpec&, const std::vector<double>& point);
Ten3 christoffel(const ManifoldSpec&, const std::vector<double>& point); // [k][i][j]

// Conformal gauge change: metric e^u g, Weyl form W - du. The metric keeps
// printable expressions; the Weyl entries become evaluator-only (du is taken
// by jets, not symbolically).
ManifoldSpec gauge_transform(const ManifoldSpec&, const Expr& u);

namespace eval {

// Jet-level evaluation snapshot shared by the connection machinery. All
// members live in the jet context of the evaluation point.
struct FrameEval {
    JMat gij, giA, gAB;
    JMat gInv;           // structural inverse
    JMat A;              // n x p
    JMat gT;             // adapted transversal block
    JVec theta, rho;

    static FrameEval at(const ManifoldSpec&, const JetPoint&);
};

Jet metric_entry(const ManifoldSpec&, int a, int b, const JetPoint&);
Jet weyl_entry(const ManifoldSpec&, int a, const JetPoint&);
JTen3 christoffel(const ManifoldSpec&, const JetPoint&);

} // namespace eval

} // namespace subweyl

#endif
