#pragma once

#include "expotail/core.hpp"

#include <string_view>

namespace expotail {

enum class BoundKind {
    JansonUpper,
    JansonLower,
    LaplaceUpper,
    LaplaceLower,
    GenericUpper,
    GenericLower,
    GammaUpper,
    GammaLower,
    SInequalityUpper,
    MomentUpper,
    MomentLower,
    PaleyZygmundLower,
};

std::string_view bound_kind_name(BoundKind kind);

/// A bound evaluation. log_value is authoritative; value = exp(log_value).
/// valid is false when the input lies outside the range where the inequality is claimed
/// (the formula is still evaluated there so that whole curves can be emitted).
struct BoundValue {
    double value;
    double log_value;
    BoundKind kind;
    bool valid;
};

// Weighted sums of mean-one exponentials, threshold t * E S.
BoundValue janson_upper(double t, const WeightStats& stats);
BoundValue janson_lower(double t, const WeightStats& stats);

// Weighted sums of standard Laplace variables, threshold t * sigma.
BoundValue laplace_upper(double t, const WeightStats& stats);
BoundValue laplace_lower(double t, const WeightStats& stats);

/// exp(-alpha_exp * I(mu t)) for nonnegative laws. Throws UnsupportedLaw for Laplace.
BoundValue generic_upper(const Distribution& d, const WeightVector& w, double t);

/// P(S >= E S) * r((t-1) alpha_exp mu); p_ge_mean must lie in (0, 1].
BoundValue generic_lower(const Distribution& d, const WeightVector& w, double t, double p_ge_mean);

/// Gamma-sum sandwich with the Paley-Zygmund constant 1/(3 16^{1/3} (1 + 2/shape)) for P(S >= E S).
BoundValue gamma_upper(const Distribution& d, const WeightVector& w, double t);
BoundValue gamma_lower(const Distribution& d, const WeightVector& w, double t);

/// Worst-case tail decay ratio inf_u P(X > u+v)/P(X > u), closed forms.
double r_function(const Distribution& d, double v);
double log_r_function(const Distribution& d, double v);

/// Same infimum evaluated directly: log grid plus golden-section refinement in u.
double r_infimum_numeric(const Distribution& d, double v);

/// 1 / (16^{1/3} max{C, 3}) for the fourth-to-second moment ratio C >= 1.
double pz_bound(double fourth_moment_ratio);

/// p_ge_mean^t, i.e. exp(-a t) with a = -log p_ge_mean. valid requires t >= 1 and
/// p_ge_mean in (1/24, 23/24).
BoundValue s_inequality_upper(double t, double p_ge_mean);

enum class MomentMode { Paper, ProofDerived };

struct MomentBounds {
    double lower;
    double upper;
};

double moment_lower_constant(MomentMode mode);

/// Bounds on (E|S|^p)^{1/p} for Laplace sums, p >= 2:
/// c (p ||a||_inf + sqrt(p) ||a||_2) <= ... <= 4 sqrt(2) (p ||a||_inf + sqrt(p) ||a||_2).
MomentBounds moment_bounds(double p, const WeightVector& w, MomentMode mode = MomentMode::ProofDerived);

} // namespace expotail
