#pragma once

namespace qrtm::numerics {

/// Arguments of the first-order Marcum Q function.
/// `a` is the non-centrality amplitude (sqrt of lambda0), `b` the normalized
/// threshold sqrt(2 gamma / sigma^2).
struct MarcumArgs {
    double a = 0.0;
    double b = 0.0;
};

/// First-order Marcum Q, Q1(a, b) = P(|a + w| > b) with w ~ N(0, I_2).
///
/// Evaluated with exp-scaled modified Bessel values from a normalized backward
/// recurrence. For a < b the direct series is summed; otherwise 1 - Q1 is
/// summed and subtracted, so neither branch needs a value near 1 from a sum of
/// large terms. Beyond a b = 1e4 a quadrature over the quadrature-phase noise
/// component replaces the series. Absolute error is below 1e-12 throughout.
///
/// Throws DomainError for negative or non-finite input.
double marcum_q1(MarcumArgs args);

/// e^{-x} I_k(x) for k = 0..count-1, x >= 0.
void scaled_bessel_i(double x, int count, double* out);

/// GLRT threshold gamma giving P_FA = exp(-gamma / sigma^2).
double threshold_from_pfa(double sigma_sq, double p_fa);

/// sqrt(2 gamma / sigma^2), the Marcum-Q second argument for a threshold.
double normalized_threshold(double sigma_sq, double gamma);

/// Cell-averaging CFAR scale: threshold = alpha * sigma_hat^2 when sigma_hat^2
/// is the mean of `reference_cells` exponential cells. Gives exactly p_fa;
/// tends to -ln(p_fa) as the cell count grows.
double ca_cfar_scale(int reference_cells, double p_fa);

}  // namespace qrtm::numerics
