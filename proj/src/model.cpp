#include "nlcross/model.hpp"

#include <cmath>
#include <numbers>

#include "nlcross/errors.hpp"

namespace nlcross {

namespace {
constexpr cplx I{0.0, 1.0};
}

void ModelParams::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(gamma) || !std::isfinite(f_abs))
        throw Error(ErrorCode::ConfigError, "model parameters must be finite");
    if (f_abs < 0.0) throw Error(ErrorCode::ConfigError, "f_abs must be non-negative");
}

DerivedCoefficients derive_coefficients(const ModelParams& p) {
    p.validate();
    DerivedCoefficients d;
    d.params = p;
    const double a = p.alpha, g = p.gamma, f2 = p.f_abs * p.f_abs;

    d.a6 = 0.25 * g * g;
    d.a4 = 0.5 * a * g;
    d.a2 = cplx(0.25 * a * a, -1.5 * g);
    d.a0 = cplx(f2, -0.5 * a);
    d.heun_mu = -0.5;
    d.heun_lambda = d.heun_mu + 2.0;

    d.sqrt_minus_a2 = std::sqrt(-d.a2);
    d.lambda_scale = d.sqrt_minus_a2;
    d.kappa = d.a0 / (4.0 * d.sqrt_minus_a2);

    d.has_gamma = (g != 0.0);
    if (!d.has_gamma) return d;

    const double ag = std::abs(g);
    const double sg = g > 0 ? 1.0 : -1.0;
    const double sqg = std::sqrt(ag);
    const cplx e1 = std::polar(1.0, std::numbers::pi / 4);
    const cplx e3 = std::polar(1.0, 3 * std::numbers::pi / 4);

    d.Q1 = sg * a * e1 / (4.0 * sqg);
    d.Q2 = I * cplx(0.25 * a * a, -1.5 * g) / (4.0 * ag);
    d.Q3 = cplx(f2, -0.5 * a) * e3 / (8.0 * sqg);
    d.Q4 = -15.0 / 64.0;
    d.rho = 0.375 * sg;

    d.mu1 = d.Q1;
    d.mu2 = d.Q2 - d.Q1 * d.Q1;
    d.mu3 = d.Q3 - 2.0 * d.Q1 * d.mu2;
    d.P1 = d.mu2 * d.mu2 + 2.0 * d.Q1 * d.Q3 - 4.0 * d.Q1 * d.Q1 * d.mu2 - d.Q4;
    d.P2 = 2.0 * d.mu2 * d.mu3;
    d.P3 = d.mu3 * d.mu3;

    d.sqrt_i_gamma_half = std::sqrt(I * (0.5 * g));
    d.sqrt_minus_i_gamma = std::sqrt(-I * g);
    d.heun_nu = a * d.sqrt_minus_i_gamma / g;
    d.heun_eta = -0.5 * d.heun_nu - f2 / d.sqrt_minus_i_gamma;
    return d;
}

double rho_of(const ModelParams& p) {
    if (p.gamma == 0.0) throw Error(ErrorCode::DegenerateGamma, "rho requires gamma != 0");
    return p.gamma > 0 ? 0.375 : -0.375;
}

namespace {
// exp{(i/4)(alpha x + gamma x^2 / 2)} with x = t^2
cplx w1_phase(double x, const ModelParams& p) {
    return std::polar(1.0, 0.25 * (p.alpha * x + 0.5 * p.gamma * x * x));
}
}  // namespace

std::pair<double, cplx> c1_to_w1(double t, cplx c1, const ModelParams& p) {
    if (t == 0.0) throw Error(ErrorCode::ZeroTime, "W1 map is singular at t = 0");
    const double x = t * t;
    return {x, c1 * std::sqrt(std::abs(t)) * w1_phase(x, p)};
}

cplx w1_to_c1(double t, cplx w1, const ModelParams& p) {
    if (t == 0.0) throw Error(ErrorCode::ZeroTime, "W1 map is singular at t = 0");
    const double x = t * t;
    return w1 / (std::sqrt(std::abs(t)) * w1_phase(x, p));
}

cplx u1_of_c1(double t, cplx c1, const ModelParams& p) {
    return c1 * std::polar(1.0, p.theta(t));
}

cplx c1_of_u1(double t, cplx u1, const ModelParams& p) {
    return u1 * std::polar(1.0, -p.theta(t));
}

ModelParams symmetry_map(const ModelParams& p) { return {-p.alpha, -p.gamma, p.f_abs}; }

}  // namespace nlcross
