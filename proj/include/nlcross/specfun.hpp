#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace nlcross {

using cplx = std::complex<double>;

enum class Method { Taylor, Asymptotic };

struct EvalResult {
    cplx value;
    double est_abs_error = 0.0;
    int terms_used = 1;
    Method method_tag = Method::Taylor;
};

// Default |z| where the parabolic cylinder functions leave the power series.
inline constexpr double kPcfSwitch = 12.0;

cplx log_gamma(cplx z);
cplx gamma_fn(cplx z);
// 1/Gamma(z); exactly zero at the poles.
cplx rgamma(cplx z);

bool is_nonpositive_integer(cplx z);

// prod Gamma(num) / prod Gamma(den) with pole bookkeeping. Poles in the denominator give an
// exact zero; paired poles give the finite limit of a common shift of all arguments.
cplx gamma_ratio(const std::vector<cplx>& num, const std::vector<cplx>& den);

EvalResult kummer_m(cplx a, cplx b, cplx z);

EvalResult whittaker_m(cplx kappa, double mu, cplx z);
EvalResult whittaker_m_prime(cplx kappa, double mu, cplx z);

EvalResult pcf_u(double a, cplx z, double z_switch = kPcfSwitch);
EvalResult pcf_v(double a, cplx z, double z_switch = kPcfSwitch);
EvalResult pcf_u_prime(double a, cplx z, double z_switch = kPcfSwitch);
EvalResult pcf_v_prime(double a, cplx z, double z_switch = kPcfSwitch);

// U, U', V, V' in one pass; order of the returned array is {U, U', V, V'}.
struct PcfBasis {
    EvalResult u, du, v, dv;
};
PcfBasis pcf_basis(double a, cplx z, double z_switch = kPcfSwitch);

// Whittaker pair with derivatives: {M_{k,mu}, M'_{k,mu}, M_{k,-mu}, M'_{k,-mu}}.
struct WhittakerBasis {
    EvalResult m_plus, dm_plus, m_minus, dm_minus;
};
WhittakerBasis whittaker_basis(cplx kappa, double mu, cplx z);

}  // namespace nlcross
