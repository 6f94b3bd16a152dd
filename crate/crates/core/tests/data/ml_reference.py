"""Reference values for E_{a,b}(-t) used by the Mittag-Leffler tests.

Small and moderate t: direct power series at high working precision.
Large t: the algebraic asymptotic expansion -sum_k (-t)^(-k) / Gamma(b - a k).
"""
import mpmath as mp


def ml_series(a, b, t, dps):
    with mp.workdps(dps):
        a, b, t = mp.mpf(a), mp.mpf(b), mp.mpf(t)
        s = mp.mpf(0)
        k = 0
        while True:
            term = (-t) ** k * mp.rgamma(a * k + b)
            s += term
            if k > 10 and abs(term) < mp.mpf(10) ** (-dps + 5):
                break
            k += 1
        return s


def ml_asymptotic(a, b, t, terms=40):
    with mp.workdps(60):
        a, b, t = mp.mpf(a), mp.mpf(b), mp.mpf(t)
        return -mp.fsum((-t) ** (-k) * mp.rgamma(b - a * k) for k in range(1, terms))


def ml(a, b, t):
    x = float(t) ** (1.0 / float(a))
    if x <= 3e3:
        dps = int(x / 2.3) + 40
        return ml_series(a, b, t, dps)
    return ml_asymptotic(a, b, t)


if __name__ == "__main__":
    cases = [
        (0.5, 1.0, 1.0), (0.5, 1.5, 1.0), (0.5, 0.5, 1.0), (0.5, 1.0, 0.5),
        (0.5, 1.0, 2.0), (0.3, 1.0, 1.0), (0.7, 1.0, 1.0), (0.7, 0.3, 1.0),
        (0.3, 0.7, 5.0), (0.5, 0.5, 10.0), (0.9, 0.9, 10.0), (0.5, 1.0, 10.0),
        (0.7, 1.7, 3.0), (0.3, 1.3, 7.0), (0.5, -0.5, 2.0), (0.7, -0.3, 4.0),
        (0.5, 1.0, 1e-6), (0.7, 0.3, 1e-6), (0.5, 0.5, 1e3), (0.7, 0.3, 1e6),
        (0.3, 0.7, 1e8), (0.5, 1.0, 1e12), (0.7, 1.0, 1e5), (0.7, -0.3, 1e4),
        (0.2, 0.6, 30.0), (0.8, 1.0, 50.0), (0.5, 1.5, 1e6),
    ]
    for a, b, t in cases:
        print(f"({a}, {b}, {t:e}, {mp.nstr(ml(a, b, t), 20)}),")
