#!/usr/bin/env python3
"""Regenerate data/rulings.csv and data/embeddings.jsonl.

Published per-pair values are kept verbatim. The remaining contested pair
values are reconstructed so that each class matches the published mean and
sample standard deviation; they are flagged `reconstructed` in the notes
column. The embedding store is synthetic: vectors are built on an orthonormal
basis so that every contested pair reproduces its stored value and unrelated
works sit near 0.5.
"""
import csv
import io
import json
import math
import pathlib

import numpy as np

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"
DIM = 512
MODEL_ID = "synthetic-orthonormal-v1"
SEED = 20230901

# (case_id, case_name, original, derivative, label, published value or None, year)
PAIRS = [
    ("kienitz_1", "Kienitz v. Sconnie Nation", "kienitz_original", "kienitz_derivative", "fair_use", 0.479, 2014),
    ("cariou_1", "Cariou v. Prince", "cariou_original_a", "cariou_derivative_a1", "probably_not_fair_use", 0.776, 2013),
    ("cariou_2", "Cariou v. Prince", "cariou_original_a", "cariou_derivative_a2", "fair_use", None, 2013),
    ("cariou_3", "Cariou v. Prince", "cariou_original_b", "cariou_derivative_b1", "probably_not_fair_use", None, 2013),
    ("cariou_4", "Cariou v. Prince", "cariou_original_b", "cariou_derivative_b2", "fair_use", None, 2013),
    ("seuss_1", "Dr. Seuss v. ComicMix", "seuss_original_a", "seuss_derivative_a", "not_fair_use", 0.723, 2020),
    ("seuss_2", "Dr. Seuss v. ComicMix", "seuss_original_b", "seuss_derivative_b", "not_fair_use", None, 2020),
    ("warhol_1", "Andy Warhol Foundation v. Goldsmith", "warhol_original", "warhol_derivative", "not_fair_use", 0.852, 2023),
    ("ruling05_1", "ruling 05 (unnamed)", "r05_original", "r05_derivative_1", "fair_use", None, None),
    ("ruling05_2", "ruling 05 (unnamed)", "r05_original", "r05_derivative_2", "fair_use", None, None),
    ("ruling06_1", "ruling 06 (unnamed)", "r06_original", "r06_derivative_1", "fair_use", None, None),
    ("ruling06_2", "ruling 06 (unnamed)", "r06_original", "r06_derivative_2", "fair_use", None, None),
    ("ruling07_1", "ruling 07 (unnamed)", "r07_original_a", "r07_derivative_a", "fair_use", None, None),
    ("ruling07_2", "ruling 07 (unnamed)", "r07_original_b", "r07_derivative_b", "fair_use", None, None),
    ("ruling08_1", "ruling 08 (unnamed)", "r08_original_a", "r08_derivative_a", "fair_use", None, None),
    ("ruling08_2", "ruling 08 (unnamed)", "r08_original_b", "r08_derivative_b", "fair_use", None, None),
    ("ruling09_1", "ruling 09 (unnamed)", "r09_original", "r09_derivative_1", "not_fair_use", None, None),
    ("ruling09_2", "ruling 09 (unnamed)", "r09_original", "r09_derivative_2", "not_fair_use", None, None),
    ("ruling10_1", "ruling 10 (unnamed)", "r10_original", "r10_derivative_1", "not_fair_use", None, None),
    ("ruling10_2", "ruling 10 (unnamed)", "r10_original", "r10_derivative_2", "not_fair_use", None, None),
]

# Published class moments (mean, sample std).
TARGETS = {"fair_use": (0.604, 0.093), "not_fair_use": (0.764, 0.123)}
# Free shape of the reconstructed values before the affine fit.
PATTERN = [-1.4, -0.9, -0.5, -0.2, 0.0, 0.2, 0.45, 0.7, 1.0, 1.5]
PROBABLY_NOT_FREE = 0.741


def fit_class(fixed, n_free, mean, std):
    """Find a + b*z so the fixed plus free values hit mean/std, rounded to 3 dp."""
    z = np.array(PATTERN) if n_free == len(PATTERN) else np.linspace(-1.5, 1.5, n_free)
    z = z - z.mean()
    n = len(fixed) + n_free
    fixed = np.array(fixed, dtype=float)
    a = (n * mean - fixed.sum()) / n_free
    target = (n - 1) * std ** 2 - ((fixed - mean) ** 2).sum() - n_free * (a - mean) ** 2
    b = math.sqrt(target / (z ** 2).sum())
    return [float(v) for v in np.round(a + b * z, 3)]


def reconstruct():
    values = {}
    for label, (mean, std) in TARGETS.items():
        rows = [p for p in PAIRS if p[4] == label]
        fixed = [p[5] for p in rows if p[5] is not None]
        free_ids = [p[0] for p in rows if p[5] is None]
        free_vals = fit_class(fixed, len(free_ids), mean, std)
        values.update(dict(zip(free_ids, free_vals)))
        allv = fixed + free_vals
        m = np.mean(allv)
        s = np.std(allv, ddof=1)
        assert abs(m - mean) < 5e-4 and abs(s - std) < 5e-4, (label, m, s)
        assert all(-1 <= v <= 1 for v in allv)
    for p in PAIRS:
        if p[4] == "probably_not_fair_use" and p[5] is None:
            values[p[0]] = PROBABLY_NOT_FREE
    return values


def write_rulings(values):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["case_id", "case_name", "original_id", "derivative_id", "label",
                "reported_metric", "year", "notes"])
    for cid, name, orig, der, label, pub, year in PAIRS:
        if pub is not None:
            metric, note = f"{pub:.3f}", "published"
        else:
            metric, note = f"{values[cid]:.3f}", "reconstructed"
        w.writerow([cid, name, orig, der, label, metric, "" if year is None else year, note])
    (DATA / "rulings.csv").write_text(buf.getvalue())


def write_store(values):
    rng = np.random.default_rng(SEED)
    originals = sorted({p[2] for p in PAIRS})
    derivatives = [p[3] for p in PAIRS]
    n_axes = 1 + len(originals) + len(derivatives)
    basis, _ = np.linalg.qr(rng.standard_normal((DIM, n_axes)))
    common = basis[:, 0]
    axis = {w: basis[:, 1 + i] for i, w in enumerate(originals)}
    for i, d in enumerate(derivatives):
        axis[d] = basis[:, 1 + len(originals) + i]
    h = math.sqrt(0.5)
    vectors = {o: h * common + h * axis[o] for o in originals}
    for cid, _, orig, der, _, pub, _ in PAIRS:
        s = pub if pub is not None else values[cid]
        alpha = 2.0 * s - 1.0
        beta = math.sqrt(1.0 - alpha * alpha)
        vectors[der] = h * common + h * (alpha * axis[orig] + beta * axis[der])
    lines = []
    for work_id in originals + derivatives:
        v = vectors[work_id]
        v = v / np.linalg.norm(v)
        lines.append(json.dumps({"work_id": work_id, "model_id": MODEL_ID, "dim": DIM,
                                 "vector": [float(x) for x in v]}))
    (DATA / "embeddings.jsonl").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    vals = reconstruct()
    write_rulings(vals)
    write_store(vals)
