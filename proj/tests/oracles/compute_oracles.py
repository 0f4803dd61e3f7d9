"""Independent high-precision reference values frozen into the C++ unit tests.

Run with: python3 tests/oracles/compute_oracles.py
"""
import mpmath as mp
import sympy as sp

mp.mp.dps = 40

M, bv, bs, av, as_ = mp.mpf(1), mp.mpf("0.002"), mp.mpf(2), mp.mpf("0.2"), mp.mpf(6)
beta = mp.sqrt(bs**2 - bv**2)


def k_table1(D, l):
    return (2 - D) + mp.sqrt((D - 2) ** 2 - 4 * (av**2 - as_**2) - 4 * l * (l + D - 2))


def e_plus(n, l, D):
    k = k_table1(D, l)
    b = -2 * M * bv / bs
    c = -(1 - bv**2 / bs**2) * (M**2 + 2 * (av * bv - as_ * bs + (k + n + mp.mpf(D) / 2) * beta)) - M**2
    return (-b + mp.sqrt(b * b - 4 * c)) / 2


k = k_table1(3, 0)
print("k_table1(D=3,l=0) =", mp.nstr(k, 20))
print("e_plus(1,0,3) =", mp.nstr(e_plus(1, 0, 3), 20))
A = 2 + (2 / M**2) * (1 - bv**2 / bs**2) * (av * bv - as_ * bs + (k + mp.mpf(3) / 2) * beta)
B = (2 / M**2) * (1 - bv**2 / bs**2) * beta
print("A =", mp.nstr(A, 20), " B =", mp.nstr(B, 20))


# Brute-force partition sum to machine-precision convergence.
def z_direct(A, B, mu):
    sA = mp.sqrt(A)
    total = mp.mpf(0)
    n = 0
    while True:
        t = mp.exp(-(mp.sqrt(A + B * n) - sA) / mu)
        total += t
        if t < mp.mpf(10) ** -30 * total:
            break
        n += 1
    return total


mp.mp.dps = 30
print("Z_direct(mu=5) =", mp.nstr(z_direct(A, B, mp.mpf(5)), 20))
print("Z_direct(mu=1) =", mp.nstr(z_direct(A, B, mp.mpf(1)), 20))

# Symbolic check of the Euler-Maclaurin ingredients.
x, a, b, m = sp.symbols("x A B mu", positive=True)
f = sp.exp(-(sp.sqrt(a + b * x) - sp.sqrt(a)) / m)
print("f'(0)  =", sp.simplify(sp.diff(f, x).subs(x, 0)))
print("f'''(0)=", sp.expand(sp.simplify(sp.diff(f, x, 3).subs(x, 0))))
print("int f  =", sp.simplify(sp.integrate(f, (x, 0, sp.oo))))

# KG-Coulomb ground level.
a_c = mp.mpf("0.2")
E = (1 + a_c**2 / (mp.mpf(1) / 2 + mp.sqrt(mp.mpf(1) / 4 - a_c**2)) ** 2) ** (-mp.mpf(1) / 2)
print("E_KG_Coulomb(n_r=0,l=0) =", mp.nstr(E, 20))

# Normalisation of the closed-form radial function, Table-1 parameters n=1,l=0,D=3.
mp.mp.dps = 30
n, D = 1, 3
Ep = e_plus(n, 0, D)
alpha_t = (Ep * av + M * as_) / beta
h = k + n + mp.mpf(D) / 2
log_c_over_nfact = mp.log(mp.sqrt(2 * beta**h / mp.gamma(h)))  # C/n!
p = 2 * (k + n) + D - 1
shape = lambda r: r**p * mp.exp(-beta * r**2 - 2 * alpha_t * r)
I = mp.quad(shape, [0, 1, 2, 4, 8, 16, mp.inf])
rho = mp.exp(2 * log_c_over_nfact) * I
print("alpha_tilde =", mp.nstr(alpha_t, 20))
print("integral of unnormalised shape =", mp.nstr(I, 20))
print("rho (norm of paper-normalised R) =", mp.nstr(rho, 20))
print("C_exact = n!/sqrt(I) =", mp.nstr(mp.factorial(n) / mp.sqrt(I), 20))
print("C_paper =", mp.nstr(mp.factorial(n) * mp.exp(log_c_over_nfact), 20))
