"""Command-line front end: ``beltrami-lab <command> [flags]``.

Exit codes: 0 success, 1 usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import contact, hopf_invariant, nodal, openbook, sphere_fields, torus_fields
from .contact import S3, T3, ContactReport, Verdict, to_json_value
from .manifold import DEFAULT_STEP, curl_r3_numeric, curl_s3_numeric, hopf_grid, laplace_beltrami_s3, torus_grid
from .sphere_fields import AxisymmetricField

MIN_GRID = 8
MIN_SAMPLE = 2
DEFAULT_SEED = 7
DEFAULT_TOL = 1e-6
NAMED_HOMOTOPIES = ("t3_sqrt2_class", "ex_final", "s3_kl_family")


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    manifold: str
    m: int | None = None
    k: str | None = None
    b: str | None = None
    eta: int | None = None
    nodal_search: int | None = None
    builtin: str | None = None
    kl: str | None = None
    named: str | None = None
    to: str | None = None
    book: str = "all"
    grid: int = 32
    n: int = 32
    h: float = DEFAULT_STEP
    tol: float = DEFAULT_TOL
    trials: int = 100
    seed: int = DEFAULT_SEED
    json_path: str | None = None
    csv_path: str | None = None

    def validate(self) -> None:
        if self.grid < MIN_GRID:
            raise UsageError(f"--grid must be at least {MIN_GRID}")
        if self.n < MIN_SAMPLE:
            raise UsageError(f"--n must be at least {MIN_SAMPLE}")
        if not 0 < self.h <= 0.05:
            raise UsageError("--h must lie in (0, 0.05]")
        if self.tol <= 0:
            raise UsageError("--tol must be positive")
        if self.trials < 1:
            raise UsageError("--trials must be positive")


# --- field selection -----------------------------------------------------------------


def _parse_ints(text: str, count: int, flag: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"{flag} expects {count} comma-separated integers") from None
    if len(vals) != count:
        raise UsageError(f"{flag} expects {count} comma-separated integers")
    return vals


def build_field(cfg: RunConfig):
    """Field named by the selector flags; raises UsageError on an invalid selection."""
    if cfg.manifold == S3:
        chosen = [x is not None for x in (cfg.m, cfg.builtin, cfg.kl)]
        if sum(chosen) != 1:
            raise UsageError("on the sphere give exactly one of --m, --builtin, --kl")
        try:
            if cfg.m is not None:
                return sphere_fields.build_Vm(cfg.m)
            if cfg.builtin is not None:
                return sphere_fields.builtin_example(cfg.builtin)
            k, l = _parse_ints(cfg.kl, 2, "--kl")
            return sphere_fields.build_kl_field(k, l)
        except (ValueError, KeyError) as exc:
            raise UsageError(str(exc).strip("'\"")) from None
    chosen = [cfg.eta is not None, cfg.k is not None or cfg.b is not None, cfg.nodal_search is not None]
    if sum(chosen) != 1:
        raise UsageError("on the torus give exactly one of --eta, --k/--b, --nodal-search")
    try:
        if cfg.eta is not None:
            return torus_fields.eta_m(cfg.eta)
        if cfg.nodal_search is not None:
            return _nodal_field(cfg)
        if cfg.k is None or cfg.b is None:
            raise UsageError("--k and --b go together")
        return torus_fields.build_Vk(torus_fields.WaveSpec.parse(cfg.k, cfg.b))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _search(cfg: RunConfig) -> nodal.SearchResult:
    try:
        return nodal.search_contractible(cfg.nodal_search, trials=cfg.trials, seed=cfg.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _nodal_field(cfg: RunConfig):
    res = _search(cfg)
    if not res.success:
        raise VerificationFailure(f"no eigenfunction with a contractible nodal component in {res.trials} trials")
    field = torus_fields.build_from_t2_eigenfunction(res.eigenfunction)
    field.search_trials = res.trials
    return field


# --- residuals -------------------------------------------------------------------------


def _beltrami_factor(V, S, P1, P2):
    lam = getattr(V, "lam", None)
    if lam is not None:
        return float(lam)
    factor = getattr(V, "factor", None)
    if factor is not None:
        return factor(S, P1, P2)
    return None


def eig_residual(V, grid: int, h: float, richardson: bool = True) -> float | None:
    """Sup-norm of ``curl V - lambda V`` by central differences (Richardson by default)."""
    if contact.manifold_of(V) == S3:
        S, P1, P2 = hopf_grid(grid, margin=2 * h)
        lam = _beltrami_factor(V, S, P1, P2)
        if lam is None:
            return None
        W = np.array(np.broadcast_arrays(*curl_s3_numeric(V, S, P1, P2, h, richardson)))
        U = np.array(np.broadcast_arrays(*V(S, P1, P2)))
        return float(np.max(np.abs(W - lam * U)))
    lam = getattr(V, "lam", None)
    if lam is None:
        return None
    x = torus_grid(grid)
    W = curl_r3_numeric(V, x, h)
    if richardson:
        W = (4 * curl_r3_numeric(V, x, h / 2) - W) / 3
    return float(np.max(np.abs(W - float(lam) * V(x))))


def component_laplace_residual(V: AxisymmetricField, m: int, grid: int, h: float) -> float:
    """Frame components of ``V_m`` against ``Delta f = -2m(2m - 2) f``."""
    S, P1, P2 = hopf_grid(grid, margin=2 * h)
    mu = 2 * m * (2 * m - 2)
    worst = 0.0
    for i in range(3):
        g = lambda s, a, b, i=i: np.broadcast_arrays(*V(s, a, b))[i]  # noqa: E731
        lap = laplace_beltrami_s3(g, S, P1, P2, h, richardson=True)
        worst = max(worst, float(np.max(np.abs(lap + mu * g(S, P1, P2)))))
    return worst


# --- reports ---------------------------------------------------------------------------


def _hopf_class(V, cfg: RunConfig) -> int | None:
    if not isinstance(V, AxisymmetricField):
        return None
    if cfg.m is not None:
        try:
            return hopf_invariant.hopf_class_Vm(cfg.m)
        except hopf_invariant.HopfConsistencyError as exc:
            raise VerificationFailure(str(exc)) from None
    res = hopf_invariant.whitehead_hopf_invariant(hopf_invariant.gauss_profile(V))
    if res.under_resolved:
        raise VerificationFailure(f"Whitehead integral {res.value} is not close to an integer")
    return res.integer


def build_report(V, cfg: RunConfig) -> ContactReport:
    manifold = contact.manifold_of(V)
    lam = getattr(V, "lam", None)
    resid = eig_residual(V, cfg.grid, cfg.h)
    if manifold == S3:
        mn, _ = sphere_fields.min_norm(V, max(cfg.grid, 32))
    else:
        mn, _ = torus_fields.min_norm_t3(V, cfg.grid)
    if mn <= 0:
        raise VerificationFailure("the field vanishes somewhere")
    try:
        cls = contact.giroux_classify(V, manifold)
        verdict, cert = cls.verdict, cls.certificate
    except ValueError as exc:
        verdict, cert = Verdict.INCONCLUSIVE, {"reason": str(exc)}
    if manifold == S3:
        char = cert.get("roots_s", [])
    elif "homology" in cert:
        char = cert["homology"]
    else:
        char = []
    margins = {"min_norm": mn}
    if isinstance(V, AxisymmetricField) and cfg.m in (2, 3):
        book = "pi_minus" if cfg.m == 2 else "pi_tilde"
        margins.update(openbook.openbook_margins(book))
    if hasattr(V, "search_trials"):
        cert["search_trials"] = V.search_trials
        cert["seed"] = cfg.seed
    report = ContactReport(
        V.name if hasattr(V, "name") else str(V),
        None if lam is None else float(lam),
        resid,
        mn,
        char,
        verdict,
        _hopf_class(V, cfg),
        margins,
        cert,
    )
    if resid is not None and resid > cfg.tol:
        raise VerificationFailure(f"eigen residual {resid:.3g} exceeds tolerance {cfg.tol:g}")
    return report


# --- commands --------------------------------------------------------------------------


def _emit_json(data: dict, cfg: RunConfig, out) -> None:
    text = json.dumps(data, indent=2)
    if cfg.json_path:
        with open(cfg.json_path, "w") as fh:
            fh.write(text + "\n")
    out.write(text + "\n")


def cmd_classify(cfg: RunConfig, out=sys.stdout) -> int:
    report = build_report(build_field(cfg), cfg)
    _emit_json(report.to_dict(), cfg, out)
    return 0


def cmd_verify(cfg: RunConfig, out=sys.stdout) -> int:
    V = build_field(cfg)
    rows: dict = {"field": getattr(V, "name", str(V)), "h": cfg.h, "grid": cfg.grid}
    fine = eig_residual(V, cfg.grid, cfg.h, richardson=True)
    plain = eig_residual(V, cfg.grid, cfg.h, richardson=False)
    half = eig_residual(V, cfg.grid, cfg.h / 2, richardson=False)
    rows["eig_residual"] = fine
    rows["eig_residual_plain"] = plain
    rows["eig_residual_plain_half_h"] = half
    if plain is not None and half:
        rows["order_ratio"] = plain / half
    if isinstance(V, AxisymmetricField):
        exact = sphere_fields.curl_axisymmetric(V).is_multiple_of(V, V.lam) if V.lam is not None else None
        rows["exact_curl"] = exact
        f0, f1 = V.link_values()
        rows["link_values"] = [str(f0), str(f1)]
        if cfg.m is not None:
            rows["component_laplace_residual"] = component_laplace_residual(V, cfg.m, cfg.grid, cfg.h)
        rows["min_norm"] = sphere_fields.min_norm(V)[0]
    elif isinstance(V, torus_fields.TorusField):
        rows["exact_curl"] = torus_fields.is_eigenfield(V, V.lam)
        rows["min_norm"] = torus_fields.min_norm_t3(V, cfg.grid)[0]
    failed = (fine is not None and fine > cfg.tol) or rows.get("exact_curl") is False
    if "component_laplace_residual" in rows and rows["component_laplace_residual"] > 100 * cfg.tol:
        failed = True
    rows["passed"] = not failed
    _emit_json(to_json_value(rows), cfg, out)
    return 2 if failed else 0


def cmd_homotopy(cfg: RunConfig, out=sys.stdout) -> int:
    if cfg.named:
        base = cfg.named.split("(")[0]
        if base not in NAMED_HOMOTOPIES:
            raise UsageError(f"unknown homotopy {cfg.named!r}; choose from {', '.join(NAMED_HOMOTOPIES)}")
        kwargs = {}
        if cfg.kl:
            kwargs["k"], kwargs["l"] = _parse_ints(cfg.kl, 2, "--kl")
        try:
            res = contact.verify_named_homotopy(cfg.named, grid=cfg.grid, **kwargs)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        t_at = float(np.linspace(0, 1, len(res["min_by_t"]))[int(np.argmin(res["min_by_t"]))])
        res["t_at_margin"] = t_at
        out.write(f"min margin {to_json_value(res['margin'])} at t={t_at:g}\n")
        if cfg.json_path:
            with open(cfg.json_path, "w") as fh:
                json.dump(to_json_value(res), fh, indent=2)
        return 0 if res["margin"] > 0 and res["max_deviation"] < 1e-10 else 2
    if cfg.to is None:
        raise UsageError("homotopy needs --named or a field selector with --to")
    V = build_field(cfg)
    try:
        W = sphere_fields.builtin_example(cfg.to) if cfg.manifold == S3 else _torus_target(cfg.to)
        cert = contact.check_linear_homotopy(V, W, grid=cfg.grid)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None
    out.write(f"min margin {to_json_value(cert.margin)} at t={cert.argmin[0]:g}\n")
    if cfg.json_path:
        with open(cfg.json_path, "w") as fh:
            json.dump(to_json_value(cert.to_dict()), fh, indent=2)
    return 0 if cert.margin > 0 else 2


def _torus_target(text: str):
    if text.startswith("eta"):
        return torus_fields.eta_m(int(text[3:]))
    raise KeyError(f"unknown torus target {text!r}; use eta<m>")


def cmd_sample(cfg: RunConfig, out=sys.stdout) -> int:
    V = build_field(cfg)
    if cfg.manifold == S3:
        header, rows = ["s", "phi1", "phi2", "f", "f1", "f2"], sphere_fields.sample_field(V, cfg.n)
    else:
        header, rows = ["x1", "x2", "x3", "A", "B", "C"], torus_fields.sample_field(V, cfg.n)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([[f"{v + 0.0:.15g}" for v in row] for row in rows])  # no "-0"
    if cfg.csv_path:
        with open(cfg.csv_path, "w") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return 0


def cmd_nodal(cfg: RunConfig, out=sys.stdout) -> int:
    if cfg.nodal_search is None:
        raise UsageError("nodal needs --nodal-search LAMBDA")
    res = _search(cfg)
    data = res.curves.to_dict()
    data = {"lambda": cfg.nodal_search, "seed": cfg.seed, "trials": res.trials, "success": res.success,
            "eigenfunction": res.eigenfunction.to_dict(), **data}
    _emit_json(to_json_value(data), cfg, out)
    return 0 if res.success else 2


def cmd_openbook(cfg: RunConfig, out=sys.stdout) -> int:
    books = ("pi_minus", "pi_tilde") if cfg.book == "all" else (cfg.book,)
    data, ok = {}, True
    for name in books:
        try:
            book = openbook.get_book(name)
        except KeyError as exc:
            raise UsageError(str(exc).strip("'\"")) from None
        page = openbook.page_area_positivity(book, grid=cfg.grid)
        binds = openbook.binding_positivity(book)
        entry = {
            "field": openbook.supported_field(name).name,
            "page_margin": page.margin,
            "page_max_deviation": page.max_deviation,
            "theta_consistency": openbook.theta_consistency(book),
            "bindings": [
                {"label": b.label, "pairing_min": b.pairing_min, "tangency_residual": b.tangency_residual}
                for b in binds
            ],
        }
        ok &= page.margin > 0 and page.max_deviation < 1e-10 and all(b.positive for b in binds)
        data[name] = entry
    data["passed"] = ok
    _emit_json(to_json_value(data), cfg, out)
    return 0 if ok else 2


COMMANDS = {
    "classify": cmd_classify,
    "verify": cmd_verify,
    "homotopy": cmd_homotopy,
    "sample": cmd_sample,
    "nodal": cmd_nodal,
    "openbook": cmd_openbook,
}


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="beltrami-lab", description="Contact topology of curl eigenfields on S^3 and T^3.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    where = parser.add_mutually_exclusive_group()
    where.add_argument("--sphere", dest="manifold", action="store_const", const=S3)
    where.add_argument("--torus", dest="manifold", action="store_const", const=T3)
    parser.add_argument("--m", type=int, help="V_m on the sphere, |m| >= 2")
    parser.add_argument("--builtin", help="hopf, antihopf, v2, v3, nonkkps2")
    parser.add_argument("--kl", help="k,l for the Beltrami family on the sphere")
    parser.add_argument("--k", help="wave vector a,b,c")
    parser.add_argument("--b", help="amplitude p,q,r (rationals allowed)")
    parser.add_argument("--eta", type=int, help="standard field eta_m on the torus")
    parser.add_argument("--nodal-search", type=int, metavar="LAMBDA", help="T^2 eigenvalue for the nodal search")
    parser.add_argument("--named", help="t3_sqrt2_class, ex_final, s3_kl_family")
    parser.add_argument("--to", help="second field for a linear homotopy (builtin name, or eta<m>)")
    parser.add_argument("--book", default="all", help="pi_minus, pi_tilde or all")
    parser.add_argument("--grid", type=int, default=32)
    parser.add_argument("--n", type=int, default=32, help="samples per axis for `sample`")
    parser.add_argument("--h", type=float, default=DEFAULT_STEP, help="finite-difference step")
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--json", dest="json_path", metavar="PATH")
    parser.add_argument("--csv", dest="csv_path", metavar="PATH")
    return parser


def parse_config(argv) -> RunConfig:
    ns = make_parser().parse_args(argv)
    manifold = ns.manifold
    if manifold is None:
        manifold = T3 if any(v is not None for v in (ns.eta, ns.k, ns.b, ns.nodal_search)) else S3
    cfg = RunConfig(
        command=ns.command, manifold=manifold, m=ns.m, k=ns.k, b=ns.b, eta=ns.eta, nodal_search=ns.nodal_search,
        builtin=ns.builtin, kl=ns.kl, named=ns.named, to=ns.to, book=ns.book, grid=ns.grid, n=ns.n, h=ns.h,
        tol=ns.tol, trials=ns.trials, seed=ns.seed, json_path=ns.json_path, csv_path=ns.csv_path,
    )
    cfg.validate()
    return cfg


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return COMMANDS[cfg.command](cfg, out)
    except UsageError as exc:
        sys.stderr.write(f"beltrami-lab: usage error: {exc}\n")
        return 1
    except VerificationFailure as exc:
        sys.stderr.write(f"beltrami-lab: verification failed: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"beltrami-lab: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
