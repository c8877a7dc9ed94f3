"""Independent high-precision reference values (mpmath, 50 digits).

Each value printed here is frozen into the Rust test suite.
"""
from mpmath import mp, findroot, mpf, exp, log, sqrt, pi, erfc, erfinv, quad, inf, ncdf

mp.dps = 50

AW, BW, GW = mpf("2.776"), mpf("1.471"), mpf("0.8888")
A1, A2, A3 = mpf("0.1000"), mpf("1.489"), mpf("0.1901")
B1, B2, B3 = mpf("0.0400"), mpf("0.1748"), mpf("-0.2243")

def wb_pdf(x):
    z = (x - GW) / AW
    return BW / AW * z ** (BW - 1) * exp(-z ** BW)

def wb_cdf(x):
    if x <= GW:
        return mpf(0)
    return 1 - exp(-((x - GW) / AW) ** BW)

def mu(h): return A1 + A2 * h ** A3
def sigma(h): return B1 + B2 * exp(B3 * h)

def ln_pdf(t, m, s):
    return 1 / (t * s * sqrt(2 * pi)) * exp(-(log(t) - m) ** 2 / (2 * s * s))

def ln_cdf(t, m, s):
    return ncdf((log(t) - m) / s)

def phi_inv(p):
    p = mpf(p)
    if p == mpf("0.5"):
        return mpf(0)
    if p < mpf("0.5"):
        guess = -sqrt(-2 * log(p))
        return findroot(lambda x: log(ncdf(x)) - log(p), guess)
    return -phi_inv(1 - p)

def out(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")

out("weibull_pdf_3", wb_pdf(mpf(3)))
out("weibull_cdf_3", wb_cdf(mpf(3)))
out("lognormal_pdf_h3_t8", ln_pdf(mpf(8), mu(mpf(3)), sigma(mpf(3))))
out("joint_pdf_3_8", wb_pdf(mpf(3)) * ln_pdf(mpf(8), mu(mpf(3)), sigma(mpf(3))))
out("cellavg_marginal_3", (wb_cdf(mpf("3.025")) - wb_cdf(mpf("2.975"))) / mpf("0.05"))
h = mpf("3.025")
out("cellavg_cond_h3025_t8025", (ln_cdf(mpf("8.05"), mu(h), sigma(h)) - ln_cdf(mpf("8.0"), mu(h), sigma(h))) / mpf("0.05"))

alpha1 = 1 / (mpf(1) * mpf("365.25") * 24 / 3)
alpha25 = 1 / (mpf(25) * mpf("365.25") * 24 / 3)
out("alpha1", alpha1)
out("alpha25", alpha25)
out("beta_iform_alpha25", phi_inv(1 - alpha25))
out("beta_iform_alpha1", phi_inv(1 - alpha1))
out("beta_iform_1.37e-5", phi_inv(1 - mpf("1.37e-5")))
out("beta_iform_3.42e-4", phi_inv(1 - mpf("3.42e-4")))
be = sqrt(-2 * log(alpha25))
out("beta_equishape_alpha25", be)
a_eq = ncdf(-be)
out("equishape_equiv_T_years", 3 / (a_eq * mpf("365.25") * 24))
hs25 = GW + AW * log(1 / alpha25) ** (1 / BW)
out("hs_return_25", hs25)
out("tz_median_at_hs25", exp(mu(hs25)))
out("u1_at_hs25", phi_inv(wb_cdf(hs25)))
for x in ["-8", "-5", "-2", "-0.5", "0", "1", "3", "5", "8"]:
    out(f"Phi({x})", ncdf(mpf(x)))
for p in ["1e-300", "1e-20", "1e-10", "1e-5", "0.01", "0.3", "0.5", "0.7", "0.999"]:
    out(f"PhiInv({p})", phi_inv(mpf(p)))
