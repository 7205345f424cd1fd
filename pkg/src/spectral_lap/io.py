"""CSV exchange and JSON model persistence.

CSV files hold one sample per row under a header line; values are written
with ``repr`` so that reading them back is bit-exact. Models are stored as
versioned JSON documents.
"""
from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .eigenmap import EmbeddingModel, KernelParams
from .graph import NeighborhoodSpec
from .linalg import EigenBasis
from .lpp import KernelProjectionModel, ProjectionModel

MODEL_FORMAT = "spectral_lap.model"
MODEL_VERSION = 1


class CSVFormatError(ValueError):
    """Malformed CSV input; the message names the offending line."""


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Return ``(header, rows)`` with ``rows`` of shape ``(n_rows, n_cols)``."""
    path = Path(path)
    try:
        fh = path.open(newline="")
    except OSError as exc:
        raise CSVFormatError(f"{path}: cannot open ({exc.strerror})") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CSVFormatError(f"{path}: line 1: empty file, expected a header") from None
        header = [h.strip() for h in header]
        if not header or any(h == "" for h in header):
            raise CSVFormatError(f"{path}: line 1: header has an empty column name")
        rows = []
        for record in reader:
            line = reader.line_num
            if not record or all(c.strip() == "" for c in record):
                continue
            if len(record) != len(header):
                raise CSVFormatError(f"{path}: line {line}: expected {len(header)} fields, "
                                     f"got {len(record)}")
            try:
                values = [float(c) for c in record]
            except ValueError:
                bad = next(c for c in record if not _is_float(c))
                raise CSVFormatError(f"{path}: line {line}: cannot parse {bad!r} as a number"
                                     ) from None
            if not all(np.isfinite(values)):
                raise CSVFormatError(f"{path}: line {line}: non-finite value")
            rows.append(values)
    if not rows:
        raise CSVFormatError(f"{path}: no data rows")
    return header, np.array(rows, dtype=float)


def _is_float(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_csv(path, header, rows) -> None:
    rows = np.asarray(rows)
    if rows.ndim == 1:
        rows = rows[:, None]
    if rows.shape[1] != len(header):
        raise ValueError(f"{len(header)} header names for {rows.shape[1]} columns")
    integer = np.issubdtype(rows.dtype, np.integer)
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([str(int(v)) for v in r] if integer else [_fmt(v) for v in r])


def read_data_matrix(path) -> np.ndarray:
    """Load a samples-as-rows CSV into a ``(d, n)`` data matrix."""
    _, rows = read_csv(path)
    return np.ascontiguousarray(rows.T)


def write_data_matrix(path, X, prefix: str = "x") -> None:
    X = np.asarray(X, dtype=float)
    write_csv(path, [f"{prefix}{i + 1}" for i in range(X.shape[0])], X.T)


def read_labels(path) -> np.ndarray:
    header, rows = read_csv(path)
    if rows.shape[1] != 1:
        raise CSVFormatError(f"{path}: expected a single label column, got {len(header)}")
    col = rows[:, 0]
    if np.any(col != np.round(col)):
        raise CSVFormatError(f"{path}: labels must be integers")
    return col.astype(int)


def write_labels(path, labels) -> None:
    write_csv(path, ["label"], np.asarray(labels, dtype=int))


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# ---- model persistence ---------------------------------------------------

def _arr(a) -> dict:
    a = np.asarray(a, dtype=float)
    return {"shape": list(a.shape), "data": a.ravel().tolist()}


def _unarr(d) -> np.ndarray:
    return np.array(d["data"], dtype=float).reshape(d["shape"])


def _basis_to_dict(b: EigenBasis) -> dict:
    return {"eigenvalues": _arr(b.eigenvalues), "eigenvectors": _arr(b.eigenvectors),
            "order": b.order, "problem": b.problem, "ridge": b.ridge}


def _basis_from_dict(d) -> EigenBasis:
    return EigenBasis(_unarr(d["eigenvalues"]), _unarr(d["eigenvectors"]), d["order"],
                      d["problem"], d["ridge"])


def model_to_dict(model) -> dict:
    if isinstance(model, EmbeddingModel):
        body = {
            "kind": "laplacian_eigenmap",
            "training_points": _arr(model.training_points),
            "embedding": _arr(model.embedding),
            "basis": _basis_to_dict(model.basis),
            "oos_vectors": _arr(model.oos_vectors),
            "oos_eigenvalues": _arr(model.oos_eigenvalues),
            "train_degrees": _arr(model.train_degrees),
            "approach": model.approach,
            "kernel": {"weight_kind": model.kernel.weight_kind, "sigma2": model.kernel.sigma2,
                       "spec": model.kernel.spec.to_dict()},
        }
    elif isinstance(model, ProjectionModel):
        body = {"kind": "lpp", "U": _arr(model.U),
                "generalized_eigenvalues": _arr(model.generalized_eigenvalues),
                "ridge_used": model.ridge_used}
    elif isinstance(model, KernelProjectionModel):
        body = {"kind": "kernel_lpp", "theta": _arr(model.theta),
                "training_kernel": _arr(model.training_kernel),
                "generalized_eigenvalues": _arr(model.generalized_eigenvalues),
                "ridge_used": model.ridge_used}
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    return {"format": MODEL_FORMAT, "version": MODEL_VERSION, **body}


def model_from_dict(d: dict):
    if d.get("format") != MODEL_FORMAT:
        raise ValueError(f"not a {MODEL_FORMAT} document")
    if d.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {d.get('version')!r}")
    kind = d.get("kind")
    if kind == "laplacian_eigenmap":
        k = d["kernel"]
        return EmbeddingModel(
            training_points=_unarr(d["training_points"]),
            embedding=_unarr(d["embedding"]),
            basis=_basis_from_dict(d["basis"]),
            oos_vectors=_unarr(d["oos_vectors"]),
            oos_eigenvalues=_unarr(d["oos_eigenvalues"]),
            train_degrees=_unarr(d["train_degrees"]),
            approach=d["approach"],
            kernel=KernelParams(k["weight_kind"], k["sigma2"],
                                NeighborhoodSpec.from_dict(k["spec"])),
        )
    if kind == "lpp":
        return ProjectionModel(_unarr(d["U"]), _unarr(d["generalized_eigenvalues"]),
                               d["ridge_used"])
    if kind == "kernel_lpp":
        return KernelProjectionModel(_unarr(d["theta"]), _unarr(d["training_kernel"]),
                                     _unarr(d["generalized_eigenvalues"]), d["ridge_used"])
    raise ValueError(f"unknown model kind {kind!r}")


def save_model(path, model) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=1) + "\n")


def load_model(path):
    return model_from_dict(json.loads(Path(path).read_text()))
