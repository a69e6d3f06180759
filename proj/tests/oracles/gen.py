# Reference values for the unit tests, from mpmath/scipy. Rerun with
#   python3 tests/oracles/gen.py
# and paste the printed literals into the tests if anything here changes.
import mpmath as mp
from scipy.special import roots_jacobi

mp.mp.dps = 40


def jacobi_h(n, a, b):
    a, b = mp.mpf(a), mp.mpf(b)
    if n == 0:
        return 2 ** (a + b + 1) * mp.gamma(a + 1) * mp.gamma(b + 1) / mp.gamma(a + b + 2)
    return (2 ** (a + b + 1) * mp.gamma(n + a + 1) * mp.gamma(n + b + 1)
            / ((2 * n + a + b + 1) * mp.gamma(n + 1) * mp.gamma(n + a + b + 1)))


def heat(a, b, x, y, t, dps=40):
    """Spectral sum in working precision dps, run until terms are negligible."""
    with mp.workdps(dps):
        a, b, x, y, t = map(mp.mpf, (a, b, x, y, t))
        s = 0
        n = 0
        while True:
            lam = n * (n + a + b + 1)
            term = mp.exp(-t * lam) * mp.jacobi(n, a, b, x) * mp.jacobi(n, a, b, y) / jacobi_h(n, a, b)
            s += term
            if n > 10 and mp.exp(-t * lam) * 10 ** 6 * (n + 1) ** (2 * max(a, b) + 2) < abs(s) * mp.mpf(10) ** (-dps + 5):
                return s
            n += 1


def log_heat_small_t(a, b, x, y, t, dps):
    """Same sum via the three-term recurrence, for thousands of terms."""
    with mp.workdps(dps):
        a, b, x, y, t = map(mp.mpf, (a, b, x, y, t))
        def rec(n, z, p1, p0):
            # P_{n+1} from P_n = p1, P_{n-1} = p0
            c = 2 * n + a + b
            a1 = 2 * (n + 1) * (n + a + b + 1) * c
            a2 = (c + 1) * (a * a - b * b)
            a3 = c * (c + 1) * (c + 2)
            a4 = 2 * (n + a) * (n + b) * (c + 2)
            return ((a2 + a3 * z) * p1 - a4 * p0) / a1
        px0, px1 = mp.mpf(1), (a + 1) + (a + b + 2) * (x - 1) / 2
        py0, py1 = mp.mpf(1), (a + 1) + (a + b + 2) * (y - 1) / 2
        s = 1 / jacobi_h(0, a, b) + mp.exp(-t * (a + b + 2)) * px1 * py1 / jacobi_h(1, a, b)
        n = 1
        while True:
            px0, px1 = px1, rec(n, x, px1, px0)
            py0, py1 = py1, rec(n, y, py1, py0)
            n += 1
            w = mp.exp(-t * n * (n + a + b + 1))
            s += w * px1 * py1 / jacobi_h(n, a, b)
            if w * n ** 8 < mp.mpf(10) ** (-dps + 20):
                return mp.log(s), n


print("// jacobi_poly")
for n, a, b, x in [(0, 0.5, -0.5, 0.3), (1, 0.5, -0.5, 0.3), (5, 0.5, -0.5, 0.3),
                   (12, 2.5, 1.0, -0.77), (40, -0.5, 0.0, 0.9), (7, 0.0, 0.0, 1.0)]:
    print(f"{{{n}, {a}, {b}, {x}, {mp.nstr(mp.jacobi(n, a, b, x), 20)}}},")

print("// log_gamma")
for z in [0.5, 1e-3, 3.7, 171.5, 1e5]:
    print(f"{{{z}, {mp.nstr(mp.loggamma(z), 20)}}},")

print("// jacobi_norm_h")
for n, a, b in [(0, 0, 0), (0, -0.5, -0.5), (3, 0.5, 1.0), (25, 7, 3)]:
    print(f"{{{n}, {a}, {b}, {mp.nstr(jacobi_h(n, a, b), 20)}}},")

print("// gegenbauer")
for lam, n, x in [(0.5, 4, 0.3), (1.5, 9, -0.6), (3.0, 20, 0.95)]:
    print(f"{{{lam}, {n}, {x}, {mp.nstr(mp.gegenbauer(n, lam, x), 20)}}},")

print("// gauss_jacobi(a, b, 5)")
for a, b in [(0.5, -0.5), (2.0, 1.5)]:
    xs, ws = roots_jacobi(5, a, b)
    print(f"// a={a} b={b}")
    print("{" + ", ".join(repr(float(v)) for v in xs) + "},")
    print("{" + ", ".join(repr(float(v)) for v in ws) + "},")

print("// heat kernel, moderate t")
for a, b, x, y, t in [(0, 0, 0.3, -0.4, 0.1), (0.5, -0.5, 0.9, 0.9, 0.05), (2.5, 1, -0.2, 0.7, 0.5),
                      (-0.5, 1, 1, 1, 0.2), (7, 3, 1, 0.8, 0.02)]:
    print(f"{{{a}, {b}, {x}, {y}, {t}, {mp.nstr(heat(a, b, x, y, t), 20)}}},")

print("// log heat kernel, small t")
for a, b, x, y, t, dps in [(0, 0, mp.cos(2), 1, 1e-3, 600), (1, 0.5, mp.cos(0.3), mp.cos(0.1), 2e-3, 120),
                           (7, 3, mp.cos(1.0), 1, 1e-3, 520)]:
    v, n = log_heat_small_t(a, b, x, y, t, dps)
    print(f"// {n} terms")
    print(f"{{{a}, {b}, {mp.nstr(x, 20)}, {mp.nstr(y, 20)}, {t}, {mp.nstr(v, 20)}}},")

print("// log of the Pi average of exp(-arccos(a + sum c_j u_j)^2 / 4s): nus, c, a, s")
for nus, cs, a, s in [((0.5,), (0.8,), 0.1, 0.1), ((0.0,), (0.7,), -0.3, 0.05), ((2.0,), (1.0,), 0.0, 1.0),
                      ((0.5, 1.0), (0.3, 0.6), 0.1, 0.01)]:
    def dens(nu, w):
        cnu = mp.gamma(nu + 1) / (mp.sqrt(mp.pi) * mp.gamma(nu + 0.5))
        return cnu * (1 - w * w) ** (nu - 0.5)
    def g(*u):
        z = a + sum(c * w for c, w in zip(cs, u))
        v = mp.exp(-mp.acos(min(z, 1)) ** 2 / (4 * s))
        for nu, w in zip(nus, u):
            v *= dens(nu, w)
        return v
    if len(nus) == 1:
        v = mp.quad(g, [-1, 0, 0.9, 1])
    else:
        v = mp.quad(g, [-1, 0, 0.9, 1], [-1, 0, 0.9, 0.99, 1])
    print(f"{{{{{', '.join(map(str, nus))}}}, {{{', '.join(map(str, cs))}}}, {a}, {s}, {mp.nstr(mp.log(v), 20)}}},")
