"""Linear SVM (dual coordinate descent) and Complement Naive Bayes.

Both models consume nonnegative-to-real feature matrices (dense numpy or the
package's FeatureMatrix) and emit deterministic, seed-reproducible weights.
Multiclass handling is one-vs-rest for the SVM and native for CNB; ties in
argmax prediction always resolve to the first class in sorted label order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigurationError, FitError
from .features import FeatureMatrix

MAX_EPOCHS = 1000
GAP_TOLERANCE = 1e-6


def compute_class_weights(counts: Mapping[str, int]) -> dict[str, float]:
    """Balanced weights w_c = N / (K * N_c)."""
    if not counts:
        raise FitError("no classes to weight")
    for label, count in counts.items():
        if count <= 0:
            raise FitError(f"class {label!r} has no samples")
    total = sum(counts.values())
    k = len(counts)
    return {label: total / (k * count) for label, count in counts.items()}


def _as_array(X) -> np.ndarray:
    if isinstance(X, FeatureMatrix):
        X = X.to_array()
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise FitError("feature matrix must be two-dimensional")
    if not np.isfinite(X).all():
        raise FitError("feature matrix contains non-finite values")
    return X


@dataclass(frozen=True)
class LinearModel:
    """One-vs-rest linear separators; binary stores the positive-class row only."""

    classes: tuple[str, ...]
    weights: np.ndarray  # (1, d) for binary, (K, d) otherwise
    biases: np.ndarray
    cost: float
    seed: int
    feature_fingerprint: str = ""

    @property
    def dimension(self) -> int:
        return self.weights.shape[1]


def _solve_binary(
    X: np.ndarray, y_signs: np.ndarray, caps: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, float, np.ndarray]:
    """Dual coordinate descent on the L1-hinge SVM with per-sample caps.

    Bias is handled through an appended constant-1 feature; converged when
    the duality gap relative to max(1, primal) drops below GAP_TOLERANCE.
    Returns (weights, bias, dual variables).
    """
    n, d = X.shape
    Xa = np.hstack([X, np.ones((n, 1))])
    qii = np.einsum("ij,ij->i", Xa, Xa)
    w = np.zeros(d + 1)
    alpha = np.zeros(n)
    for _ in range(MAX_EPOCHS):
        for i in rng.permutation(n):
            g = y_signs[i] * float(Xa[i] @ w) - 1.0
            if alpha[i] <= 0.0:
                pg = min(g, 0.0)
            elif alpha[i] >= caps[i]:
                pg = max(g, 0.0)
            else:
                pg = g
            if abs(pg) > 1e-12:
                new_alpha = min(max(alpha[i] - g / qii[i], 0.0), caps[i])
                if new_alpha != alpha[i]:
                    w += (new_alpha - alpha[i]) * y_signs[i] * Xa[i]
                    alpha[i] = new_alpha
        margins = 1.0 - y_signs * (Xa @ w)
        primal = 0.5 * float(w @ w) + float(caps @ np.maximum(margins, 0.0))
        dual = float(alpha.sum()) - 0.5 * float(w @ w)
        if (primal - dual) / max(1.0, primal) < GAP_TOLERANCE:
            break
    return w[:d], float(w[d]), alpha


def train_linear_svm(
    X,
    y: Sequence[str],
    c: float = 1.0,
    weights: Mapping[str, float] | None = None,
    seed: int = 42,
) -> LinearModel:
    """Train one-vs-rest L1-hinge linear SVMs with per-class cost scaling.

    Sample i's box constraint is 0 <= alpha_i <= c * weight[y_i]; pass
    weights=None for uniform costs.
    """
    X = _as_array(X)
    if c <= 0:
        raise ConfigurationError("cost parameter must be positive")
    labels = list(y)
    classes = tuple(sorted(set(labels)))
    if len(classes) < 2:
        raise FitError("training data contains a single class")
    if len(labels) != X.shape[0]:
        raise FitError("label count does not match matrix rows")
    if weights is None:
        weights = {cls: 1.0 for cls in classes}
    caps = np.array([c * weights[label] for label in labels])

    y_arr = np.array(labels)
    rows = []
    biases = []
    targets = classes[:1] if len(classes) == 2 else classes
    for cls in targets:
        signs = np.where(y_arr == cls, 1.0, -1.0)
        rng = np.random.default_rng(seed)
        w, b, _ = _solve_binary(X, signs, caps, rng)
        rows.append(w)
        biases.append(b)
    return LinearModel(
        classes=classes,
        weights=np.vstack(rows),
        biases=np.array(biases),
        cost=c,
        seed=seed,
    )


def svm_decision(model: LinearModel, x) -> np.ndarray:
    """Per-class decision scores in model.classes order."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.dimension,):
        raise ValueError(f"expected a vector of dimension {model.dimension}, got {x.shape}")
    raw = model.weights @ x + model.biases
    if len(model.classes) == 2:
        return np.array([raw[0], -raw[0]])
    return raw


def svm_predict(model: LinearModel, x) -> str:
    """Argmax of the decision scores; ties go to the first class in order."""
    return model.classes[int(np.argmax(svm_decision(model, x)))]


def svm_predict_many(model: LinearModel, X) -> list[str]:
    X = _as_array(X)
    if X.shape[1] != model.dimension:
        raise ValueError(f"expected {model.dimension} columns, got {X.shape[1]}")
    raw = X @ model.weights.T + model.biases
    if len(model.classes) == 2:
        scores = np.column_stack([raw[:, 0], -raw[:, 0]])
    else:
        scores = raw
    return [model.classes[i] for i in np.argmax(scores, axis=1)]


# ---------------------------------------------------------------------------
# Complement Naive Bayes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CnbModel:
    """Per-class complement weights, L1-normalized over active columns."""

    classes: tuple[str, ...]
    weights: np.ndarray  # (K, d)
    alpha: float
    log_priors: np.ndarray  # stored for introspection; scoring ignores them
    feature_fingerprint: str = ""

    @property
    def dimension(self) -> int:
        return self.weights.shape[1]


def train_cnb(X, y: Sequence[str], alpha: float = 1.0) -> CnbModel:
    """Complement Naive Bayes on a nonnegative matrix.

    For class c and feature j: N'_cj = sum of X_ij over samples outside c;
    theta'_cj = (alpha + N'_cj) / (alpha * m + sum_j N'_cj) over the m active
    (nonzero-total) columns; weight = -log theta', L1-normalized per class.
    Identically-zero columns get weight 0 and never affect predictions.
    """
    X = _as_array(X)
    if alpha <= 0:
        raise ConfigurationError("smoothing alpha must be positive")
    if (X < 0).any():
        raise FitError("CNB requires nonnegative feature values")
    labels = list(y)
    if len(labels) != X.shape[0]:
        raise FitError("label count does not match matrix rows")
    classes = tuple(sorted(set(labels)))
    if len(classes) < 2:
        raise FitError("training data contains a single class")

    totals = X.sum(axis=0)
    active = totals > 0
    m = int(active.sum())
    y_arr = np.array(labels)
    weights = np.zeros((len(classes), X.shape[1]))
    priors = np.zeros(len(classes))
    for ci, cls in enumerate(classes):
        in_class = y_arr == cls
        priors[ci] = math.log(float(in_class.sum()) / len(labels))
        comp = totals - X[in_class].sum(axis=0)
        denom = alpha * m + float(comp[active].sum())
        theta = (alpha + comp[active]) / denom
        w = -np.log(theta)
        norm = float(np.abs(w).sum())
        if norm > 0:
            w /= norm
        weights[ci, active] = w
    return CnbModel(classes=classes, weights=weights, alpha=alpha, log_priors=priors)


def cnb_predict(model: CnbModel, x) -> str:
    x = np.asarray(x, dtype=float)
    if x.shape != (model.dimension,):
        raise ValueError(f"expected a vector of dimension {model.dimension}, got {x.shape}")
    return model.classes[int(np.argmax(model.weights @ x))]


def cnb_predict_many(model: CnbModel, X) -> list[str]:
    X = _as_array(X)
    if X.shape[1] != model.dimension:
        raise ValueError(f"expected {model.dimension} columns, got {X.shape[1]}")
    scores = X @ model.weights.T
    return [model.classes[i] for i in np.argmax(scores, axis=1)]


# ---------------------------------------------------------------------------
# Persistence: versioned text format, round-trip exact
# ---------------------------------------------------------------------------

_FMT = "%.17g"  # 17 significant digits round-trip float64 exactly


def _fmt(x: float) -> str:
    return _FMT % x


def model_to_text(model: LinearModel | CnbModel) -> str:
    lines = ["argmine-model v1"]
    if isinstance(model, LinearModel):
        lines.append("kind svm")
        lines.append(f"dim {model.dimension}")
        lines.append("classes " + ",".join(model.classes))
        lines.append(f"c {_fmt(model.cost)}")
        lines.append(f"seed {model.seed}")
        lines.append(f"features {model.feature_fingerprint or '-'}")
        stored = model.classes[:1] if len(model.classes) == 2 else model.classes
        for row, cls in enumerate(stored):
            parts = [_fmt(model.biases[row])] + [_fmt(v) for v in model.weights[row]]
            lines.append(f"class {cls} " + " ".join(parts))
    else:
        lines.append("kind cnb")
        lines.append(f"dim {model.dimension}")
        lines.append("classes " + ",".join(model.classes))
        lines.append(f"alpha {_fmt(model.alpha)}")
        lines.append(f"features {model.feature_fingerprint or '-'}")
        for row, cls in enumerate(model.classes):
            parts = [_fmt(model.log_priors[row])] + [_fmt(v) for v in model.weights[row]]
            lines.append(f"class {cls} " + " ".join(parts))
    return "\n".join(lines) + "\n"


def model_from_text(text: str) -> LinearModel | CnbModel:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "argmine-model v1":
        raise ConfigurationError("not a recognized model file")
    header: dict[str, str] = {}
    rows: list[tuple[str, list[float]]] = []
    for line in lines[1:]:
        key, _, rest = line.partition(" ")
        if key == "class":
            cls, _, values = rest.partition(" ")
            rows.append((cls, [float(v) for v in values.split()]))
        else:
            header[key] = rest
    kind = header.get("kind")
    dim = int(header["dim"])
    classes = tuple(header["classes"].split(","))
    fingerprint = "" if header.get("features", "-") == "-" else header["features"]
    weights = np.array([values[1:] for _, values in rows])
    lead = np.array([values[0] for _, values in rows])
    if weights.shape[1] != dim:
        raise ConfigurationError("weight dimension does not match header")
    if kind == "svm":
        return LinearModel(
            classes=classes,
            weights=weights,
            biases=lead,
            cost=float(header["c"]),
            seed=int(header["seed"]),
            feature_fingerprint=fingerprint,
        )
    if kind == "cnb":
        return CnbModel(
            classes=classes,
            weights=weights,
            alpha=float(header["alpha"]),
            log_priors=lead,
            feature_fingerprint=fingerprint,
        )
    raise ConfigurationError(f"unknown model kind {kind!r}")


def save_model(model: LinearModel | CnbModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model_to_text(model))


def load_model(path) -> LinearModel | CnbModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_text(fh.read())


def with_fingerprint(model: LinearModel | CnbModel, fingerprint: str):
    """Return a copy of the model carrying the feature-bundle fingerprint."""
    from dataclasses import replace

    return replace(model, feature_fingerprint=fingerprint)
