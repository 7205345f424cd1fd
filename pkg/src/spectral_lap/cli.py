"""Command-line driver: ``spectral-lap <command> [options]``.

Every run that produces data also writes a JSON manifest holding all
parsed parameters, the library version, input file hashes and output file
hashes; ``spectral-lap replay MANIFEST`` re-executes it and checks the
outputs are byte-identical.

Exit status: 0 on success, 1 on usage or input-file errors, 2 when a
library computation fails (the message names the error class).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import clustering, diffusion, eigenmap, graph_embedding, lpp
from .datasets import DATASETS, generate_dataset
from .errors import SpectralLapError
from .graph import BINARY, RBF, NeighborhoodSpec, build_graph, squared_distances
from .io import (CSVFormatError, file_sha256, load_model, read_csv, read_data_matrix,
                 read_labels, save_model, write_csv, write_data_matrix, write_labels)
from .plotting import scatter_svg

THREADS_ENV = "SPECTRAL_LAP_THREADS"
MANIFEST_FORMAT = "spectral_lap.manifest"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---- argument groups -----------------------------------------------------

def _data_args(p: argparse.ArgumentParser, allow_input: bool = True):
    g = p.add_argument_group("input data")
    if allow_input:
        src = g.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", help="CSV file, one sample per row, header line first")
        src.add_argument("--dataset", choices=DATASETS, help="synthetic dataset instead of --input")
    else:
        g.add_argument("--dataset", choices=DATASETS, required=True)
    g.add_argument("--n", type=int, default=200, help="dataset size (default 200)")
    g.add_argument("--noise", type=float, default=0.0, help="dataset noise (default 0)")
    g.add_argument("--data-seed", type=int, default=0, help="dataset seed (default 0)")
    g.add_argument("--labels", help="CSV with one integer label column")


def _graph_args(p: argparse.ArgumentParser):
    g = p.add_argument_group("neighborhood graph")
    nb = g.add_mutually_exclusive_group()
    nb.add_argument("--knn", type=int, help="k nearest neighbors, union-symmetrized (default 10)")
    nb.add_argument("--eps", type=float, help="epsilon ball on squared distance")
    nb.add_argument("--full", action="store_true", help="complete graph")
    g.add_argument("--weights", choices=(RBF, BINARY), default=RBF)
    g.add_argument("--sigma2", type=float, default=1.0, help="RBF bandwidth sigma^2")


def _output_args(p: argparse.ArgumentParser):
    g = p.add_argument_group("output")
    g.add_argument("--out", required=True, help="output CSV")
    g.add_argument("--manifest", help="run manifest (default: <out>.manifest.json)")
    g.add_argument("--plot", help="write an SVG scatter of the first two output columns")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spectral-lap", description="Graph-Laplacian embedding and clustering.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="write a synthetic dataset to CSV")
    _data_args(p, allow_input=False)
    _output_args(p)
    p.add_argument("--labels-out", help="write generator labels to this CSV")

    p = sub.add_parser("embed", help="Laplacian eigenmap or (kernel) LPP embedding")
    _data_args(p)
    _graph_args(p)
    _output_args(p)
    p.add_argument("--method", choices=("le", "lpp", "kernel_lpp"), default="le")
    p.add_argument("--approach", type=int, choices=(1, 2), default=2,
                   help="eigenmap constraint: 1 for Y^T Y = I, 2 for Y^T D Y = I")
    p.add_argument("--dims", type=int, default=2)
    p.add_argument("--center", action="store_true", help="center the data before LPP")
    p.add_argument("--ridge", type=float, default=1e-10)
    p.add_argument("--save-model", help="write the fitted model as JSON")

    p = sub.add_parser("cluster", help="ratio-cut spectral clustering")
    _data_args(p)
    _graph_args(p)
    _output_args(p)
    p.add_argument("--c", type=int, default=2, help="number of clusters")
    p.add_argument("--variant", choices=(clustering.PLAIN, clustering.DEGREE_CONSTRAINED),
                   default=clustering.PLAIN)
    p.add_argument("--seed", type=int, default=0, help="k-means seed")
    p.add_argument("--kmeans", action="store_true",
                   help="use k-means even for two clusters instead of the sign split")
    p.add_argument("--dims", type=int, help="embedding dimension for k-means (default --c)")

    p = sub.add_parser("oos", help="embed new points with a saved eigenmap or LPP model")
    _data_args(p)
    _output_args(p)
    p.add_argument("--model", required=True, help="model JSON from `embed --save-model`")

    p = sub.add_parser("ge", help="graph-embedding solver for a classical method")
    _data_args(p)
    _graph_args(p)
    _output_args(p)
    p.add_argument("--method", choices=graph_embedding.METHODS, required=True)
    p.add_argument("--dims", type=int, default=2)
    p.add_argument("--distances", help="CSV distance matrix for mds_isomap")
    p.add_argument("--recon-weights", help="CSV reconstruction weights for lle")
    p.add_argument("--center", action="store_true",
                   help="center the data for lpp (pca and fda always center)")
    p.add_argument("--ridge", type=float, default=1e-10)

    p = sub.add_parser("diffuse", help="diffusion-map embedding and distances")
    _data_args(p)
    _graph_args(p)
    _output_args(p)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--time", type=int, default=1)
    p.add_argument("--dims", type=int, default=2)
    p.add_argument("--distances", help="also write the pairwise diffusion-distance matrix")
    p.add_argument("--form", choices=(diffusion.PROBABILITY, diffusion.SPECTRAL),
                   default=diffusion.PROBABILITY, help="distance formula for --distances")

    p = sub.add_parser("replay", help="re-run a manifest and verify its outputs")
    p.add_argument("manifest")
    p.add_argument("--output-dir", help="write outputs here instead of the recorded paths")
    return parser


# ---- helpers -------------------------------------------------------------

def _load_data(args) -> tuple[np.ndarray, np.ndarray | None]:
    if args.dataset:
        X, labels = generate_dataset(args.dataset, args.n, args.noise, args.data_seed)
    else:
        X = read_data_matrix(args.input)
        labels = None
    if args.labels:
        labels = read_labels(args.labels)
        if labels.size != X.shape[1]:
            raise UsageError(f"{args.labels}: {labels.size} labels for {X.shape[1]} samples")
    return X, labels


def _spec(args) -> NeighborhoodSpec:
    if args.full:
        return NeighborhoodSpec.full()
    if args.eps is not None:
        return NeighborhoodSpec.eps(args.eps)
    return NeighborhoodSpec.knn(10 if args.knn is None else args.knn)


def _graph(args, X):
    return build_graph(X, _spec(args), args.weights, args.sigma2)


def _rbf_kernel(X, sigma2: float) -> np.ndarray:
    return np.exp(-squared_distances(X) / (2.0 * sigma2))


def _center(X) -> np.ndarray:
    return X - X.mean(axis=1, keepdims=True)


def _center_kernel(K) -> np.ndarray:
    n = K.shape[0]
    H = np.eye(n) - np.full((n, n), 1.0 / n)
    Kc = H @ K @ H
    return (Kc + Kc.T) * 0.5


def _ycols(p: int) -> list[str]:
    return [f"y{i + 1}" for i in range(p)]


def _write_embedding(args, Y, labels, outputs, title):
    write_csv(args.out, _ycols(Y.shape[1]), Y)
    outputs.append(args.out)
    if args.plot:
        scatter_svg(args.plot, Y, labels, title)
        outputs.append(args.plot)


def _read_square(path) -> np.ndarray:
    _, rows = read_csv(path)
    if rows.shape[0] != rows.shape[1]:
        raise CSVFormatError(f"{path}: expected a square matrix, got {rows.shape}")
    return rows


# ---- commands ------------------------------------------------------------

def cmd_gen(args, outputs):
    X, labels = generate_dataset(args.dataset, args.n, args.noise, args.data_seed)
    write_data_matrix(args.out, X)
    outputs.append(args.out)
    if args.labels_out:
        write_labels(args.labels_out, labels)
        outputs.append(args.labels_out)
    if args.plot:
        scatter_svg(args.plot, X.T, labels, args.dataset)
        outputs.append(args.plot)


def cmd_embed(args, outputs):
    X, labels = _load_data(args)
    G = _graph(args, X)
    if args.method == "le":
        model = eigenmap.fit(G, X, args.dims, args.approach, args.sigma2, _spec(args))
        Y = model.embedding
    elif args.method == "lpp":
        Xf = _center(X) if args.center else X
        model = lpp.fit(Xf, G, args.dims, ridge=args.ridge)
        Y = model.embed(Xf).T
    else:
        model = lpp.fit_kernel(_rbf_kernel(X, args.sigma2), G, args.dims, ridge=args.ridge)
        Y = lpp.embed_kernel(model).T
    _write_embedding(args, Y, labels, outputs, args.method)
    if args.save_model:
        save_model(args.save_model, model)
        outputs.append(args.save_model)


def cmd_cluster(args, outputs):
    X, labels = _load_data(args)
    result = clustering.spectral_cluster(_graph(args, X), args.c, args.variant, args.seed,
                                         sign_split=False if args.kmeans else None,
                                         dims=args.dims)
    write_labels(args.out, result.labels)
    outputs.append(args.out)
    if labels is not None:
        print(f"accuracy {clustering.matched_accuracy(result.labels, labels)!r}")
    if args.plot:
        scatter_svg(args.plot, X.T, result.labels, f"{args.c} clusters")
        outputs.append(args.plot)


def cmd_oos(args, outputs):
    X, labels = _load_data(args)
    model = load_model(args.model)
    if isinstance(model, eigenmap.EmbeddingModel):
        Y = eigenmap.transform(model, X)
    elif isinstance(model, lpp.ProjectionModel):
        Y = model.embed(X).T
    else:
        raise UsageError("kernel LPP models do not store training points; "
                         "out-of-sample use needs an eigenmap or LPP model")
    _write_embedding(args, Y, labels, outputs, "out-of-sample")


def cmd_ge(args, outputs):
    X, labels = _load_data(args)
    m = args.method
    W = K = None
    Xf = X
    dist = recon = None
    if m in ("laplacian_eigenmap_1", "laplacian_eigenmap_2", "lpp", "kernel_lpp"):
        W = _graph(args, X).weights
    if m in ("pca", "fda") or (m == "lpp" and args.center):
        Xf = _center(X)
    if m in ("kernel_lpp", "kernel_pca", "kernel_fda"):
        K = _rbf_kernel(X, args.sigma2)
        if m != "kernel_lpp":
            K = _center_kernel(K)
    if m == "mds_isomap" and args.distances:
        dist = _read_square(args.distances)
    if m == "lle":
        if not args.recon_weights:
            raise UsageError("lle needs --recon-weights")
        recon = _read_square(args.recon_weights)
    if m in ("fda", "kernel_fda") and labels is None:
        raise UsageError(f"{m} needs labels (--labels or --dataset)")
    config = graph_embedding.MethodConfig(m, labels=labels, distances=dist, recon_weights=recon)
    problem = graph_embedding.config_to_problem(config, args.dims, X=Xf, W=W, K_x=K,
                                                ridge=args.ridge)
    sol = graph_embedding.solve(problem)
    _write_embedding(args, sol.embedding, labels, outputs, m)


def cmd_diffuse(args, outputs):
    X, labels = _load_data(args)
    model = diffusion.diffusion_operator(_graph(args, X), args.alpha)
    Y = diffusion.diffusion_embed(model, args.time, args.dims)
    _write_embedding(args, Y, labels, outputs, f"diffusion t={args.time}")
    if args.distances:
        Dm = diffusion.pairwise_distances(model, args.time, args.form)
        write_csv(args.distances, [f"d{i + 1}" for i in range(Dm.shape[0])], Dm)
        outputs.append(args.distances)


COMMANDS = {"gen": cmd_gen, "embed": cmd_embed, "cluster": cmd_cluster, "oos": cmd_oos,
            "ge": cmd_ge, "diffuse": cmd_diffuse}

def _inputs(args) -> dict:
    found = {}
    for key in ("input", "labels", "model", "recon_weights"):
        path = getattr(args, key, None)
        if path:
            found[key] = path
    if args.command == "ge" and args.distances:
        found["distances"] = args.distances
    return found


def _manifest_path(args) -> str:
    return args.manifest or f"{args.out}.manifest.json"


def execute(args) -> dict:
    """Run one command and write its manifest; return the manifest."""
    outputs: list[str] = []
    inputs = {k: {"path": v, "sha256": file_sha256(v)} for k, v in _inputs(args).items()}
    COMMANDS[args.command](args, outputs)
    manifest = {
        "format": MANIFEST_FORMAT,
        "version": 1,
        "library_version": __version__,
        "command": args.command,
        "args": {k: v for k, v in sorted(vars(args).items())},
        "seeds": {k: getattr(args, k) for k in ("data_seed", "seed") if hasattr(args, k)},
        "inputs": inputs,
        "outputs": {p: file_sha256(p) for p in outputs},
    }
    Path(_manifest_path(args)).write_text(json.dumps(manifest, indent=1) + "\n")
    return manifest


def replay(path, output_dir=None) -> int:
    try:
        manifest = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path}: cannot read manifest ({exc})") from None
    if manifest.get("format") != MANIFEST_FORMAT:
        raise UsageError(f"{path}: not a spectral-lap manifest")
    args = argparse.Namespace(**manifest["args"])
    for key, rec in manifest["inputs"].items():
        if file_sha256(rec["path"]) != rec["sha256"]:
            raise UsageError(f"input {rec['path']} changed since the recorded run")
    rename = {}
    if output_dir:
        out_dir = Path(output_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for key in ("out", "plot", "labels_out", "save_model", "manifest"):
            val = getattr(args, key, None)
            if val:
                new = str(out_dir / Path(val).name)
                rename[val] = new
                setattr(args, key, new)
        if args.command == "diffuse" and args.distances:
            new = str(out_dir / Path(args.distances).name)
            rename[args.distances] = new
            args.distances = new
        if not args.manifest:
            args.manifest = str(out_dir / Path(f"{manifest['args']['out']}.manifest.json").name)
    else:
        args.manifest = str(Path(path).with_name(Path(path).name + ".replay.json"))
    fresh = execute(args)
    mismatched = [p for p, h in manifest["outputs"].items()
                  if fresh["outputs"].get(rename.get(p, p)) != h]
    if mismatched:
        print(f"replay differs for: {', '.join(mismatched)}", file=sys.stderr)
        return 2
    print(f"replay reproduced {len(manifest['outputs'])} output(s) bit-exactly")
    return 0


def _thread_limit():
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    # OpenBLAS crashes when raised above the pool it allocated at load time
    return min(n, os.cpu_count() or 1)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        limit = _thread_limit()
        if limit is not None:
            from threadpoolctl import threadpool_limits
            with threadpool_limits(limits=limit):
                return _dispatch(args)
        return _dispatch(args)
    except SpectralLapError as exc:
        print(f"spectral-lap: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (UsageError, CSVFormatError, OSError, ValueError) as exc:
        print(f"spectral-lap: error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    if args.command == "replay":
        return replay(args.manifest, args.output_dir)
    execute(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
