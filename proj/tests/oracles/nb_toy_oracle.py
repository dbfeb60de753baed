"""Closed-form posterior for a small 2-feature Gaussian toy set (plain population moments)."""
import mpmath

mpmath.mp.dps = 40
up = [(0.0, 0.0), (1.0, 1.0), (2.0, 0.5)]
down = [(3.0, 3.0), (4.0, 2.0), (5.0, 4.5), (3.5, 2.5)]
query = (2.5, 1.5)


def fit(rows, j):
    v = [mpmath.mpf(r[j]) for r in rows]
    mu = sum(v) / len(v)
    sd = mpmath.sqrt(sum((t - mu) ** 2 for t in v) / len(v))
    return mu, sd


def g(x, mu, sd):
    return mpmath.exp(-(x - mu) ** 2 / (2 * sd ** 2)) / (mpmath.sqrt(2 * mpmath.pi) * sd)


scores = []
for rows in (up, down):
    s = mpmath.mpf(len(rows)) / (len(up) + len(down))
    for j in range(2):
        mu, sd = fit(rows, j)
        print("mu", mpmath.nstr(mu, 17), "sd", mpmath.nstr(sd, 17))
        s *= g(mpmath.mpf(query[j]), mu, sd)
    scores.append(s)
tot = sum(scores)
print("posterior", [mpmath.nstr(s / tot, 17) for s in scores])
