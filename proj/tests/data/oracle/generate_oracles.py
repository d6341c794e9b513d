#!/usr/bin/env python3
"""Generate the frozen statistics fixtures used by the C++ test suites.

Run from this directory:

    python3 generate_oracles.py

Requires numpy, scipy, statsmodels and scikit-posthocs. The outputs are
checked in; regenerate only when the dataset recipe below changes.
"""

import csv
from math import asin, exp, log, sqrt

import numpy as np
import scikit_posthocs as sp
from scipy import special, stats
from statsmodels.stats.multitest import multipletests

OUT = "."
N_DATASETS = 20


def fmt(v):
    return repr(float(v))


# ---------------------------------------------------------------------------
# Shapiro-Wilk, AS R94, double precision with a full-precision normal
# quantile (scipy.special.ndtri). scipy.stats.shapiro runs the same
# algorithm with a reduced-precision quantile, so it is kept as a
# secondary cross-check column only.

_G = [-2.273, 0.459]
_C1 = [0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056]
_C2 = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633]
_C3 = [0.544, -0.39978, 0.025054, -6.714e-4]
_C4 = [1.3822, -0.77857, 0.062767, -0.0020322]
_C5 = [-1.5861, -0.31082, -0.083751, 0.0038915]
_C6 = [-0.4803, -0.082676, 0.0030302]


def _poly(c, x):
    r = c[0]
    if len(c) > 1:
        p = x * c[-1]
        for k in range(len(c) - 2, 0, -1):
            p = (p + c[k]) * x
        r += p
    return r


def swilk(values):
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    nn2 = n // 2
    a = [0.0] * (nn2 + 1)
    an = float(n)
    if n == 3:
        a[1] = sqrt(0.5)
    else:
        an25 = an + 0.25
        summ2 = 0.0
        for i in range(1, nn2 + 1):
            a[i] = special.ndtri((i - 0.375) / an25)
            summ2 += a[i] ** 2
        summ2 *= 2.0
        ssumm2 = sqrt(summ2)
        rsn = 1.0 / sqrt(an)
        a1 = _poly(_C1, rsn) - a[1] / ssumm2
        if n > 5:
            i1 = 3
            a2 = -a[2] / ssumm2 + _poly(_C2, rsn)
            fac = sqrt((summ2 - 2 * a[1] ** 2 - 2 * a[2] ** 2) / (1 - 2 * a1 ** 2 - 2 * a2 ** 2))
            a[2] = a2
        else:
            i1 = 2
            fac = sqrt((summ2 - 2 * a[1] ** 2) / (1 - 2 * a1 ** 2))
        a[1] = a1
        for i in range(i1, nn2 + 1):
            a[i] /= -fac
    rng = x[-1] - x[0]
    coef = np.zeros(n)
    for i in range(n):
        j = n - 1 - i
        if i != j:
            coef[i] = np.sign(i - j) * a[1 + min(i, j)]
    asa = coef - coef.sum() / n
    xs = x / rng
    xsx = xs - xs.sum() / n
    ssa = float((asa * asa).sum())
    ssx = float((xsx * xsx).sum())
    sax = float((asa * xsx).sum())
    ssassx = sqrt(ssa * ssx)
    w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx)
    w = 1.0 - w1
    if n == 3:
        return w, max(0.0, 1.90985931710274 * (asin(sqrt(w)) - 1.04719755119660))
    y = log(w1)
    xx = log(an)
    if n <= 11:
        gamma = _poly(_G, an)
        if y >= gamma:
            return w, 1e-99
        y = -log(gamma - y)
        m = _poly(_C3, an)
        s = exp(_poly(_C4, an))
    else:
        m = _poly(_C5, xx)
        s = exp(_poly(_C6, xx))
    return w, float(stats.norm.sf(y, m, s))


# ---------------------------------------------------------------------------
# Dataset recipe. Dataset 0 is the 5 groups x n=30 Conover fixture; every
# third dataset is rounded to create ties.


def make_dataset(idx):
    rng = np.random.default_rng(1000 + idx)
    if idx == 0:
        k = 5
        sizes = [30] * 5
    else:
        k = 2 + idx % 4
        sizes = [int(rng.integers(30, 101)) for _ in range(k)]
    family = idx % 3
    groups = []
    for g in range(k):
        shift = 0.25 * g * (idx % 5) / 4.0
        n = sizes[g]
        if family == 0:
            v = rng.normal(100.0 + 10.0 * shift, 10.0, n)
        elif family == 1:
            v = 50.0 * np.exp(rng.normal(0.1 * shift, 0.2, n))
        else:
            mix = rng.random(n) < 0.7
            v = np.where(mix, rng.normal(200.0, 8.0, n), rng.normal(230.0, 6.0, n)) + 8.0 * shift
        if idx % 3 == 2:
            v = np.round(v)
        groups.append(v)
    return groups


def main():
    ds_rows = []
    group_rows = []
    omni_rows = []
    pair_rows = []
    pearson_data = []
    pearson_rows = []

    for d in range(N_DATASETS):
        groups = make_dataset(d)
        labels = [f"g{g}" for g in range(len(groups))]
        for lab, vals in zip(labels, groups):
            for v in vals:
                ds_rows.append([d, lab, fmt(v)])
            w, pw = swilk(vals)
            sc = stats.shapiro(vals)
            group_rows.append([d, lab, len(vals), fmt(w), fmt(pw), fmt(sc.statistic), fmt(sc.pvalue)])

        h, p = stats.kruskal(*groups)
        omni_rows.append([d, fmt(h), len(groups) - 1, fmt(p)])

        flat = np.concatenate(groups)
        glab = np.concatenate([[lab] * len(v) for lab, v in zip(labels, groups)])
        import pandas as pd

        frame = pd.DataFrame({"v": flat, "g": pd.Categorical(glab, categories=labels, ordered=True)})
        raw = sp.posthoc_conover(frame, val_col="v", group_col="g", p_adjust=None, sort=False)
        pairs = [(i, j) for i in range(len(groups)) for j in range(i + 1, len(groups))]
        raw_p = [float(raw.loc[labels[i], labels[j]]) for i, j in pairs]
        holm = multipletests(raw_p, method="holm")[1]
        for (i, j), rp, hp in zip(pairs, raw_p, holm):
            a, b = groups[i], groups[j]
            delta = float(np.sign(a[:, None] - b[None, :]).sum()) / (len(a) * len(b))
            pair_rows.append([d, labels[i], labels[j], fmt(rp), fmt(hp), fmt(delta)])

        prng = np.random.default_rng(5000 + d)
        n = 40 if d == 0 else int(prng.integers(30, 101))
        x = prng.normal(10.0, 2.0, n)
        y = (0.3 + 0.05 * d) * x + prng.normal(0.0, 2.0, n)
        for xi, yi in zip(x, y):
            pearson_data.append([d, fmt(xi), fmt(yi)])
        r, pp = stats.pearsonr(x, y)
        pearson_rows.append([d, n, fmt(r), fmt(pp)])

    def write(name, header, rows):
        with open(f"{OUT}/{name}", "w", newline="") as f:
            wr = csv.writer(f, lineterminator="\n")
            wr.writerow(header)
            wr.writerows(rows)

    write("datasets.csv", ["dataset", "group", "value"], ds_rows)
    write("expected_groups.csv", ["dataset", "group", "n", "w", "p", "scipy_w", "scipy_p"], group_rows)
    write("expected_omnibus.csv", ["dataset", "h", "df", "p"], omni_rows)
    write("expected_pairs.csv", ["dataset", "a", "b", "conover_p", "holm_p", "cliffs_delta"], pair_rows)
    write("pearson_data.csv", ["dataset", "x", "y"], pearson_data)
    write("expected_pearson.csv", ["dataset", "n", "r", "p"], pearson_rows)

    # Shapiro-Wilk on a documented normal sample (numpy default_rng(42), n=50).
    sw = np.random.default_rng(42).normal(0.0, 1.0, 50)
    w, pw = swilk(sw)
    write("shapiro_n50.csv", ["value"], [[fmt(v)] for v in sw])
    write("shapiro_n50_expected.csv", ["w", "p", "scipy_w", "scipy_p"],
          [[fmt(w), fmt(pw), fmt(stats.shapiro(sw).statistic), fmt(stats.shapiro(sw).pvalue)]])

    # Special functions at fixture points.
    rows = []
    for a, x in [(0.5, 0.1), (0.5, 2.0), (1.0, 3.0), (2.5, 1.5), (5.0, 4.0), (10.0, 25.0), (0.5, 30.0), (49.5, 60.0)]:
        rows.append(["gamma_q", fmt(a), "", fmt(x), fmt(special.gammaincc(a, x))])
    for a, b, x in [(0.5, 0.5, 0.3), (2.0, 3.0, 0.4), (14.5, 0.5, 0.9), (50.0, 0.5, 0.98), (1.0, 1.0, 0.25),
                    (3.0, 7.0, 0.05), (200.0, 0.5, 0.995), (0.5, 10.0, 0.001)]:
        rows.append(["beta_i", fmt(a), fmt(b), fmt(x), fmt(special.betainc(a, b, x))])
    for p in [1e-10, 0.001, 0.025, 0.3, 0.5, 0.8, 0.975, 0.999999]:
        rows.append(["norm_quantile", fmt(p), "", "", fmt(special.ndtri(p))])
    for t, df in [(0.5, 5), (2.0, 10), (3.5, 58), (10.0, 100), (1.0, 1)]:
        rows.append(["t_two_sided", fmt(t), fmt(df), "", fmt(2 * stats.t.sf(t, df))])
    for x, df in [(3.857142857142857, 1), (0.5, 2), (12.0, 4), (60.0, 3)]:
        rows.append(["chi2_sf", fmt(x), fmt(df), "", fmt(stats.chi2.sf(x, df))])
    write("special_functions.csv", ["function", "arg1", "arg2", "arg3", "expected"], rows)


if __name__ == "__main__":
    main()
