#pragma once

#include <complex>
#include <utility>

namespace nlcross {

using cplx = std::complex<double>;

struct ModelParams {
    double alpha = 1.0;
    double gamma = 1.0;
    double f_abs = 1.0;

    double detuning(double t) const { return alpha * t + gamma * t * t * t; }
    // Closed form of the integral of the detuning from 0 to t.
    double phase_integral(double t) const {
        const double t2 = t * t;
        return 0.5 * alpha * t2 + 0.25 * gamma * t2 * t2;
    }
    // theta(t) = phase_integral(t) / 2
    double theta(double t) const { return 0.5 * phase_integral(t); }

    void validate() const;
};

struct DerivedCoefficients {
    ModelParams params;
    bool has_gamma = false;

    cplx a0, a2, a4, a6;
    cplx Q1, Q2, Q3, Q4;
    double rho = 0.0;
    cplx mu1, mu2, mu3;
    cplx P1, P2, P3;
    cplx kappa;
    double mu_whittaker = 0.25;
    double a_pcf = 0.75;
    cplx lambda_scale;  // sqrt(3i gamma/2 - alpha^2/4) == sqrt(-a2)

    cplx heun_mu, heun_nu, heun_lambda, heun_eta;

    // Principal-branch roots stored once so every consumer uses the same value.
    cplx sqrt_i_gamma_half;   // sqrt(i gamma / 2), region-I coordinate scale
    cplx sqrt_minus_a2;       // region-II coordinate scale
    cplx sqrt_minus_i_gamma;  // Heun parameters
};

DerivedCoefficients derive_coefficients(const ModelParams& params);

double rho_of(const ModelParams& params);

// (t, C1) -> (x = t^2, W1). Throws ZeroTime at t = 0.
std::pair<double, cplx> c1_to_w1(double t, cplx c1, const ModelParams& params);
cplx w1_to_c1(double t, cplx w1, const ModelParams& params);

cplx u1_of_c1(double t, cplx c1, const ModelParams& params);
cplx c1_of_u1(double t, cplx u1, const ModelParams& params);

ModelParams symmetry_map(const ModelParams& params);

}  // namespace nlcross
