#pragma once

#include <memory>
#include <string>
#include <vector>

#include "discenv/envelope.hpp"
#include "discenv/singular_models.hpp"

namespace discenv {

struct GrowthReport {
    double constant = 0.0;            ///< sup of v(z) - log|z| on the last shell
    bool bounded = true;              ///< last two shell sups differ by < 0.1
    std::vector<double> shell_sups;   ///< per radius
    Json to_json() const;
};

/// Growth of v against log|z| on spheres |z| = R for increasing radii R >= 2.
GrowthReport lelong_class_probe(const PointField& v, int dim, const std::vector<double>& radii, int samples = 64);

/// J envelope over discs of the family with boundary in the convex set omega.
/// Throws ValidationError("domain", ...) when omega is not convex.
EnvelopeResult lempert_V(const DomainSpec& omega, const Point& z, const DiscFamily& family, EnvelopeOptions opts);

/// E_B J(z): J envelope over the good family with boundary in omega (any open set).
EnvelopeResult ebj_field(const DomainSpec& omega, const Point& z, const DiscFamily& family, EnvelopeOptions opts);

/// Memoized E_B J field for the two-stage formula.
std::unique_ptr<MemoField> make_ebj_memo(const DomainSpec& omega, const DiscFamily& family, const EnvelopeOptions& opts,
                                         double resolution = 1e-3, int threads = 0);

/// Poisson envelope of the memoized E_B J field over the outer (affine) family.
TwoStageResult siciak_V(MemoField& ebj, const DiscFamily& outer_family, const Point& z, const EnvelopeOptions& outer);

/// Reference values: "disc" (log+(|z - center|/radius) in C), "ball"
/// (log+|z|), "polydisc" (max log+|z_j|), "cusp-model" (3 log+|t| for z = (t^2, t^3)).
double closed_form_V(const std::string& name, const Point& z, double radius = 1.0);
bool is_closed_form_name(const std::string& name);

/// Psi_B(x): inf over parameter discs h of the family (boundary in omega_param,
/// centered at a preimage of x) and over zeta with (map o h)(zeta) = x of
/// -G_{D, (map o h)^* H}(zeta).
EnvelopeResult psi_field(const CurveModel& model, const DomainSpec& omega_param, const Point& x,
                         const DiscFamily& family, const EnvelopeOptions& opts);

/// Memoized Psi_B o map on the parameter plane.
std::unique_ptr<MemoField> make_psi_memo(const CurveModel& model, const DomainSpec& omega_param,
                                         const DiscFamily& family, const EnvelopeOptions& opts,
                                         double resolution = 1e-3, int threads = 0);

/// Poisson envelope of Psi_B over pushforwards map o g of parameter-plane
/// polynomial discs g (outer_family, dimension 1) centered at the preimages of
/// x; the minimum over preimages is returned.
TwoStageResult siciak_V_variety(const CurveModel& model, MemoField& psi, const Point& x,
                                const DiscFamily& outer_family, const EnvelopeOptions& outer);

} // namespace discenv
