#pragma once

#include <string>
#include <vector>

#include "discenv/disc.hpp"
#include "discenv/envelope.hpp"
#include "discenv/json_io.hpp"

namespace discenv {

/// Plane curve given by a polynomial normalization t -> (map_1(t), ..., map_n(t))
/// on the parameter disc |t| < param_radius (+inf for the whole plane).
struct CurveModel {
    std::string name;
    std::vector<ComplexPoly> map;
    double param_radius = kPosInf;
    std::vector<Point> singular_points;
    std::vector<std::vector<cplx>> singular_preimages;  ///< per singular point
    int degree_at_infinity = 1;  ///< |map(t)| ~ |t|^degree_at_infinity
    bool locally_irreducible = true;

    int dim() const noexcept { return static_cast<int>(map.size()); }
    Point eval(cplx t) const;
    Json to_json() const;
};

using VarietyModel = CurveModel;

/// f(z) = (z^3, z^2 + z) on 3D; double point p = (1, -1) = f(omega_1) = f(omega_2).
CurveModel nodal_model();
/// n(t) = (t^2, t^3) on C; cusp at the origin.
CurveModel cusp_model();
/// "nodal" or "cusp".
CurveModel curve_model(const std::string& name);

/// All parameters t (|t| < param_radius) with map(t) = x, accepted when every
/// coordinate residual is at most tol times its backward-error scale.
/// Throws ValidationError("point", ...) with a distance estimate when x is off the curve.
std::vector<cplx> normalize_point(const CurveModel& m, const Point& x, double tol = 1e-9);

/// map o h for a disc h in the parameter plane.
ProjectiveDisc pushforward(const CurveModel& m, const ProjectiveDisc& h);
PolyDisc pushforward(const CurveModel& m, const PolyDisc& h);

/// The parameter disc h with map o h = g, reconstructed from boundary samples
/// by normalization with branch continuation and a discrete Fourier fit.
/// Throws ValidationError("disc", "lift undefined") when every sample lies over
/// a singular point and NumericError on branch or residual inconsistencies.
PolyDisc lift_disc(const CurveModel& m, const PolyDisc& g, double tol = 1e-8);

/// v = (x^2 + y^2 - 9)(c0 + c1 y), A = a x + b y + c on the parameter disc 3D.
struct CounterexampleConstants {
    double c0 = 1.0, c1 = 0.05;
    double a = 0.0, b = 0.4, c = -1.3;
};

struct CounterexampleData {
    CounterexampleConstants k;
    CurveModel model;
    cplx omega1, omega2;  ///< omega1 = e^{2 pi i/3}, omega2 = conj(omega1)
    Point p;

    double v(cplx z) const;
    double A(cplx z) const;
    /// v + A, which descends to the curve as v_X.
    double vA(cplx z) const { return v(z) + A(z); }
    double predicted_gap() const;
    Json to_json() const;
};

/// Validates every construction condition (v <= 0, v convex, v(omega1) !=
/// v(omega2), (v+A)(omega1) = (v+A)(omega2), v + A <= 0 on a 200 x 200 grid of
/// the closed disc). ValidationError names the failed condition unless
/// `bypass_validation` is set.
CounterexampleData build_counterexample(const CounterexampleConstants& k, bool bypass_validation = false);

struct CounterexampleOptions {
    int degree = 1;               ///< disc-domain family degree on the parameter disc
    EnvelopeOptions envelope;     ///< boundary domain is set to the parameter disc
    int interior_points = 10;
    std::vector<cplx> regular_points{{0.5, 0.0}, {1.0, 1.0}, {-1.5, 0.3}, {0.2, -1.6}, {1.8, -0.9}};
    std::vector<double> radii{2e-2, 1e-2};
    int probe_samples = 8;
    double usc_tolerance = 5e-2;
    double psh_tolerance = 2e-2;
    int grid_n = 16;
    std::uint64_t seed = 0;
    int threads = 0;
};

struct PointCheck {
    cplx t;
    double value = 0.0;
    double expected = 0.0;
    bool ok = true;
};

struct CounterexampleReport {
    CounterexampleData data;
    double ep_at_omega[2] = {0.0, 0.0};
    double ep_at_p = 0.0;            ///< min over the two branch envelopes
    double ep_at_p_joint = 0.0;      ///< one search over discs through either preimage
    double limsup = 0.0;
    double gap = 0.0;
    double predicted_gap = 0.0;
    bool usc_ok_at_p = true;
    double riesz_at_p = 0.0;
    double riesz_gap = 0.0;
    std::vector<PointCheck> interior;       ///< EP vs -A
    std::vector<PointCheck> usc_regular;    ///< value = gap, ok = usc_ok
    std::vector<PointCheck> psh_regular;    ///< value = worst margin
    FieldGrid field;                        ///< EP_{-(v+A)} on the parameter disc

    Json to_json() const;
};

/// EP_{-v_X} at p via both branches, the usc gap along the regular part, the
/// Riesz variant, interior checks of EP_{-(v+A)} = -A and a field dump.
CounterexampleReport counterexample_envelope_gap(const CounterexampleData& d, const CounterexampleOptions& opts);

struct LelongCounterexampleReport {
    double el_at_omega[2] = {0.0, 0.0};
    double oracle_at_omega[2] = {0.0, 0.0};  ///< Green function of 3D
    double el_at_p = 0.0;
    double limsup = 0.0;
    double gap = 0.0;
    std::string note;
    Json to_json() const;
};

/// EL_alpha at omega1, omega2 on the parameter disc 3D and the descended usc gap at p.
/// alpha must vanish at omega1 and omega2; a nonempty alpha whose Green-function
/// oracle is symmetric in omega1, omega2 is rejected.
LelongCounterexampleReport lelong_counterexample(const WeightField& alpha, int degree, const EnvelopeOptions& opts);

} // namespace discenv
