"""Linear max-margin classifier: L2-regularized L1-hinge SVM by dual coordinate descent.

The bias is handled as an extra constant feature (value 1), so it is
regularized together with the weights. Inputs are z-score standardized
with statistics from the training set.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

DEFAULT_C = 1.0
DEFAULT_FOLDS = 10
TOLERANCE = 1e-6
MAX_EPOCHS = 1000


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float
    means: np.ndarray
    stds: np.ndarray
    C: float = DEFAULT_C
    feature_names: list[str] = field(default_factory=list)
    epochs: int = 0

    def decision_function(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return ((X - self.means) / self.stds) @ self.weights + self.bias

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) >= 0, 1, -1)

    def to_json(self, header: dict | None = None) -> dict:
        doc = {
            "weights": [float(v) for v in self.weights],
            "bias": float(self.bias),
            "means": [float(v) for v in self.means],
            "stds": [float(v) for v in self.stds],
            "C": self.C,
            "feature_names": list(self.feature_names),
            "epochs": self.epochs,
        }
        if header is not None:
            doc = {"config": header, **doc}
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "LinearModel":
        return cls(
            np.array(doc["weights"], dtype=float),
            float(doc["bias"]),
            np.array(doc["means"], dtype=float),
            np.array(doc["stds"], dtype=float),
            float(doc.get("C", DEFAULT_C)),
            list(doc.get("feature_names", [])),
            int(doc.get("epochs", 0)),
        )

    def save(self, path, header: dict | None = None) -> None:
        Path(path).write_text(json.dumps(self.to_json(header), indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "LinearModel":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def standardize_fit(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # constant columns standardize to exact zeros and so get zero weight;
    # X.std alone leaves rounding residue there
    const = np.ptp(X, axis=0) == 0 if len(X) else np.ones(X.shape[1], bool)
    means = np.where(const, X[0] if len(X) else 0.0, X.mean(axis=0))
    stds = np.where(const, 1.0, X.std(axis=0))
    return means, stds


def _as_signs(y) -> np.ndarray:
    y = np.asarray(y)
    labels = set(np.unique(y).tolist())
    if labels <= {-1, 1}:
        signs = y.astype(int)
    elif labels <= {0, 1}:
        signs = np.where(y == 1, 1, -1)
    else:
        raise ValueError(f"labels must be +/-1 or 0/1, got {sorted(labels)}")
    if len(set(signs.tolist())) < 2:
        raise ValueError("training data must contain both classes")
    return signs


def dual_cd(Z: np.ndarray, y: np.ndarray, C: float, seed: int = 0,
            tol: float = TOLERANCE, max_epochs: int = MAX_EPOCHS) -> tuple[np.ndarray, np.ndarray, int]:
    """Solve the hinge-loss SVM dual on augmented data ``Z`` (last column = 1).

    Returns (w, alpha, epochs). Coordinates stuck at a bound are shrunk out
    of the active set between epochs; convergence (spread of projected
    gradients below ``tol``) is only accepted after a full pass over all
    coordinates.
    """
    n, d = Z.shape
    alpha = np.zeros(n)
    w = np.zeros(d)
    yz = Z * y[:, None]
    qdiag = np.einsum("ij,ij->i", Z, Z)
    rng = np.random.default_rng(seed)
    index = np.arange(n)
    active = n
    pg_max_old, pg_min_old = np.inf, -np.inf
    epoch = 0
    while epoch < max_epochs:
        epoch += 1
        rng.shuffle(index[:active])
        pg_max, pg_min = -np.inf, np.inf
        s = 0
        while s < active:
            i = index[s]
            g = float(yz[i] @ w) - 1.0
            a = alpha[i]
            pg = 0.0
            if a == 0.0:
                if g > pg_max_old:
                    active -= 1
                    index[s], index[active] = index[active], index[s]
                    continue
                if g < 0:
                    pg = g
            elif a == C:
                if g < pg_min_old:
                    active -= 1
                    index[s], index[active] = index[active], index[s]
                    continue
                if g > 0:
                    pg = g
            else:
                pg = g
            pg_max = max(pg_max, pg)
            pg_min = min(pg_min, pg)
            if abs(pg) > 1e-12 and qdiag[i] > 0:
                a_new = min(max(a - g / qdiag[i], 0.0), C)
                w += (a_new - a) * yz[i]
                alpha[i] = a_new
            s += 1
        if pg_max - pg_min < tol:
            if active == n:
                break
            active = n
            pg_max_old, pg_min_old = np.inf, -np.inf
            continue
        pg_max_old = pg_max if pg_max > 0 else np.inf
        pg_min_old = pg_min if pg_min < 0 else -np.inf
    return w, alpha, epoch


def train(X, y, C: float = DEFAULT_C, seed: int = 0, feature_names=None,
          max_epochs: int = MAX_EPOCHS) -> LinearModel:
    X = np.asarray(X, dtype=float)
    signs = _as_signs(y)
    if X.ndim != 2 or len(X) != len(signs):
        raise ValueError("X must be 2-D with one row per label")
    if C <= 0:
        raise ValueError("C must be positive")
    means, stds = standardize_fit(X)
    Z = np.hstack([(X - means) / stds, np.ones((len(X), 1))])
    w, _, epochs = dual_cd(Z, signs.astype(float), C, seed, max_epochs=max_epochs)
    return LinearModel(w[:-1].copy(), float(w[-1]), means, stds, C, list(feature_names or []), epochs)


def stratified_folds(y, k: int, seed: int = 0) -> list[np.ndarray]:
    """Assign indices to k folds, dealing each class round-robin after a shuffle."""
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for label in sorted(np.unique(y).tolist()):
        idx = np.flatnonzero(y == label)
        rng.shuffle(idx)
        for j, i in enumerate(idx):
            folds[(j + offset) % k].append(int(i))
        offset += len(idx)
    return [np.array(sorted(f), dtype=int) for f in folds]


def cross_validate(X, y, k: int = DEFAULT_FOLDS, C: float = DEFAULT_C, seed: int = 0) -> float:
    """Mean accuracy over stratified k folds."""
    X = np.asarray(X, dtype=float)
    y = _as_signs(y)
    if k < 2:
        raise ValueError("need at least 2 folds")
    if k > len(y):
        raise ValueError(f"cannot make {k} folds from {len(y)} examples")
    accs = []
    for fold in stratified_folds(y, k, seed):
        if len(fold) == 0:
            continue
        mask = np.ones(len(y), dtype=bool)
        mask[fold] = False
        model = train(X[mask], y[mask], C, seed)
        accs.append(float(np.mean(model.predict(X[fold]) == y[fold])))
    return float(np.mean(accs))


def rank_pairs(model: LinearModel, pairs, X) -> list[tuple[str, str, float]]:
    """Sort pairs by decision value, highest first; ties by (x, y)."""
    if len(pairs) == 0:
        return []
    scores = model.decision_function(X)
    rows = [(x, y, float(s)) for (x, y), s in zip(pairs, scores)]
    return sorted(rows, key=lambda r: (-r[2], r[0], r[1]))


def f1_at_rank(ranked, gold: dict, cutoff: int) -> dict:
    """Precision, recall and F1 of the top ``cutoff`` ranked pairs.

    ``gold`` maps (x, y) to True/False; pairs missing from it count as wrong.
    Recall is measured against all gold positives.
    """
    def truth(x, y):
        return bool(gold.get((x, y), gold.get((y, x), False)))

    top = list(ranked)[:cutoff]
    hits = sum(truth(r[0], r[1]) for r in top)
    positives = sum(1 for v in gold.values() if v)
    precision = hits / len(top) if top else 0.0
    recall = hits / positives if positives else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return {"precision": precision, "recall": recall, "f1": f1}


def write_ranking(path, ranked, header: str | None = None) -> None:
    lines = [f"# config: {header}"] if header else []
    lines.append("x\ty\tscore")
    lines += [f"{x}\t{y}\t{s!r}" for x, y, s in ranked]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_ranking(path) -> list[tuple[str, str, float]]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#") or line == "x\ty\tscore":
            continue
        x, y, s = line.split("\t")
        out.append((x, y, float(s)))
    return out
