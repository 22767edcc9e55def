"""Searches for the anchor of counterexample_refined().

Bounded least squares around the printed 3-decimal entries: the allpass
reversal constraints for m = [1,1,1] and [2,2,1] are enforced exactly (up to a
Gauss-Newton polish), the minor and coefficient lists are pushed inside their
two-decimal rounding intervals. Prints the 16 parameters row-major
(A, b, c, d). Needs numpy and scipy.
"""
import itertools

import numpy as np
from scipy.optimize import minimize

PRINTED = np.array([1.241, 3.833, -6.028, -0.859, -2.276, 3.582, -0.048, -0.180, -0.332,
                    1.833, -0.469, 0.826, 0.430, 0.831, 0.452, 0.288])
LISTS = np.array([
    1.00, -4.86, 2.44, -1.63, 1.15, 7.89, -4.30, -3.47,      # minors of A^-1
    1.00, -1.49, -0.92, -1.63, 1.15, -8.97, 12.56, -3.47,    # minors of A - b c^T / d
    1.00, 1.37, 1.17, 0.29, 0.29, 1.17, 1.37, 1.00,          # den, num for [1,1,1]
    1.00, 2.61, 0.16, -0.23, 0.29, 0.29, 0.74, 4.05, -2.26, 1.00,
    1.00, 0.33, 1.03, 0.70, 0.47, 0.29, 0.29, 0.47, 0.70, 1.03, 0.33, 1.00,
])
SUBSETS = [list(s) for k in range(4) for s in itertools.combinations(range(3), k)]


def unpack(x):
    return x[:9].reshape(3, 3), x[9:12], x[12:15], x[15]


def minors(m):
    return [np.linalg.det(m[np.ix_(s, s)]) if s else 1.0 for s in SUBSETS]


def gcp(a, m):
    # ascending in z^-1
    out = np.zeros(sum(m) + 1)
    for keep in SUBSETS:
        rest = [i for i in range(3) if i not in keep]
        det = np.linalg.det(a[np.ix_(rest, rest)]) if rest else 1.0
        out[sum(m) - sum(m[i] for i in keep)] += (-1) ** len(rest) * det
    return out


def lists(x):
    a, b, c, d = unpack(x)
    s = a - np.outer(b, c) / d
    out = minors(np.linalg.inv(a)) + minors(s)
    for m in ([1, 1, 1], [2, 1, 1], [2, 2, 1]):
        out += list(gcp(a, m)) + list(d * gcp(s, m))
    return np.array(out)


def reversal(x):
    a, b, c, d = unpack(x)
    s = a - np.outer(b, c) / d
    return np.concatenate([d * gcp(s, m) - gcp(a, m)[::-1] for m in ([1, 1, 1], [2, 2, 1])])


def polish(x):
    for _ in range(30):
        r = reversal(x)
        jac = np.empty((r.size, x.size))
        for k in range(x.size):
            xp = x.copy()
            xp[k] += 1e-7
            jac[:, k] = (reversal(xp) - r) / 1e-7
        x = x - np.linalg.pinv(jac) @ r
    return x


def main(box=4.9e-4, margin=4.7e-3, trials=40):
    bounds = [(v - box, v + box) for v in PRINTED]

    def cost(x):
        excess = np.maximum(np.abs(lists(x) - LISTS) - margin, 0.0)
        return 1e6 * np.sum(excess ** 2) + 1e8 * np.sum(reversal(x) ** 2)

    best = None
    for trial in range(trials):
        start = PRINTED + (0 if trial == 0 else np.random.default_rng(300 + trial).uniform(-box, box, 16))
        x = polish(minimize(cost, start, bounds=bounds, method="L-BFGS-B",
                            options={"maxiter": 5000, "ftol": 1e-20, "gtol": 1e-14}).x)
        score = (np.abs(lists(x) - LISTS).max(), np.abs(x - PRINTED).max())
        if score[0] < 5e-3 and score[1] < 5e-4 and (best is None or score < best[0]):
            best = (score, x)
    if best is None:
        raise SystemExit("no anchor found")
    print("list deviation %.3g, entry move %.3g" % best[0])
    print(",\n".join(repr(float(v)) for v in best[1]))


if __name__ == "__main__":
    main()
