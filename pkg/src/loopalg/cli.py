"""Command-line front end.

Every computation is exposed as one subcommand with deterministic text,
JSON, or CSV output.  Exit codes: 0 success, 1 invariant violation found
during the computation (broken differential, incomplete range, oracle
mismatch, failed identity), 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra_core import (
    Coefficients,
    ad_v,
    basis_primitive_counts,
    bracket,
    gen_u,
    gen_v,
    lie_normal_form,
    primitive_dims_oracle,
)
from .bss import check_acyclic, compute_page, survivor_check
from .catalog import entries_to_csv, entries_to_json, even_families, odd_families
from .errors import EngineError
from .freecomm import dj_homology, generator_table, poincare_series
from .mod2 import build_d2_module, decomposition_search, verify_chain_identity
from .models import (
    build_fibre_page_model,
    build_omega2_model,
    build_tensor_model,
    sigma_tau_classes,
)

_INT_FLAGS = {
    "p": "prime",
    "r": "torsion exponent (>= 1)",
    "n": "space parameter (>= 2)",
    "k": "operation index (model fibre: largest k)",
    "j": "weight of the summand (>= 1)",
    "t_max": "largest periodicity index t (>= 0)",
    "max_deg": "top degree of the reported window",
    "max_weight": "top weight of the generator table",
    "pages": "page number (>= 1)",
    "weight": "restrict the page to one weight slice",
}
_BOOL_FLAGS = ("json", "csv")
_STR_FLAGS = ("model", "out")


def _add_flags(parser: argparse.ArgumentParser, *names: str) -> None:
    for name in names:
        flag = "--" + name.replace("_", "-")
        if name in _INT_FLAGS:
            parser.add_argument(flag, dest=name, type=int, default=None, help=_INT_FLAGS[name])
        elif name in _BOOL_FLAGS:
            parser.add_argument(
                flag, dest=name, action="store_const", const=True, default=None,
                help=f"emit {name.upper()} output",
            )
        elif name == "model":
            parser.add_argument(
                "--model", choices=("omega2", "tensor", "fibre"), default=None,
                help="which staged model to build",
            )
        elif name == "out":
            parser.add_argument("--out", default=None, help="write output to this path")
        elif name == "config":
            parser.add_argument(
                "--config", default=None,
                help="key = value file presetting flags; command line wins",
            )
        else:  # pragma: no cover
            raise AssertionError(name)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopalg",
        description="Exact homology computations for double loop spaces of odd Moore spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "gens": ("list the generator table", ("p", "r", "n", "max_deg", "max_weight", "json")),
        "dj": ("homology of one weight summand", ("p", "r", "n", "j", "json")),
        "poincare": ("Poincare series of the free algebra", ("p", "r", "n", "max_deg", "max_weight", "json")),
        "bss": ("dump one page of a staged model", ("model", "p", "r", "n", "k", "max_deg", "max_weight", "pages", "weight", "json")),
        "survivor": ("track the bracket class pair through the pages", ("p", "r", "n", "k", "max_deg", "pages", "json")),
        "d2": ("mod-2 six-class module and its decompositions", ("r", "n", "json")),
        "chain": ("integral equivariant chain identity", ("r", "json")),
        "families": ("torsion family catalog", ("p", "r", "n", "k", "t_max", "json", "csv")),
        "oracle": ("run the brute-force cross-checks", ("p", "r", "n", "max_deg", "json")),
    }
    for name, (help_text, flags) in commands.items():
        cmd = sub.add_parser(name, help=help_text)
        _add_flags(cmd, *flags, "out", "config")
    return parser


def _load_config(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    out: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{line_no}: expected `key = value`")
        key, _, value = line.partition("=")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config(ns: argparse.Namespace) -> None:
    if getattr(ns, "config", None) is None:
        return
    for key, raw in _load_config(ns.config).items():
        if key in ("config", "command") or not hasattr(ns, key):
            raise ValueError(f"config key {key!r} is not a parameter of `{ns.command}`")
        if getattr(ns, key) is not None:
            continue
        if key in _BOOL_FLAGS:
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                setattr(ns, key, True)
            elif low in ("0", "false", "no", "off"):
                setattr(ns, key, False)
            else:
                raise ValueError(f"config key {key!r}: expected a boolean, got {raw!r}")
        elif key in _STR_FLAGS:
            setattr(ns, key, raw)
        else:
            try:
                setattr(ns, key, int(raw))
            except ValueError:
                raise ValueError(
                    f"config key {key!r}: expected an integer, got {raw!r}"
                ) from None


def _require(ns: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(ns, name) is None:
            raise ValueError(f"missing required parameter --{name.replace('_', '-')}")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _default_weight(ns: argparse.Namespace) -> int:
    w = max(1, ns.max_deg // (2 * ns.n - 2))
    return min(w, 2) if ns.p == 2 else w


def _cmd_gens(ns) -> tuple[str, int]:
    _require(ns, "p", "r", "n", "max_deg")
    coeffs = Coefficients(ns.p, ns.r)
    mw = ns.max_weight if ns.max_weight is not None else _default_weight(ns)
    table = generator_table(coeffs, ns.n, ns.max_deg, mw)
    if ns.json:
        return _dumps(
            {
                "p": ns.p,
                "r": ns.r,
                "n": ns.n,
                "max_degree": ns.max_deg,
                "max_weight": mw,
                "generators": [
                    {
                        "term": g.render(),
                        "degree": g.degree,
                        "weight": g.weight,
                        "parity": g.parity,
                    }
                    for g in table.generators
                ],
            }
        ), 0
    lines = [
        f"{g.render()}  degree {g.degree}  weight {g.weight}"
        for g in table.generators
    ]
    return "\n".join(lines) + "\n", 0


def _cmd_dj(ns) -> tuple[str, int]:
    _require(ns, "p", "r", "n", "j")
    coeffs = Coefficients(ns.p, ns.r)
    hom = dj_homology(coeffs, ns.n, ns.j)
    if ns.json:
        return _dumps(hom.to_json()), 0
    lines = [f"weight-{ns.j} summand"]
    for d in sorted(hom.dims):
        lines.append(f"degree {d} dim {hom.dims[d]}: {', '.join(hom.basis[d])}")
    return "\n".join(lines) + "\n", 0


def _cmd_poincare(ns) -> tuple[str, int]:
    _require(ns, "p", "r", "n", "max_deg")
    coeffs = Coefficients(ns.p, ns.r)
    mw = ns.max_weight if ns.max_weight is not None else _default_weight(ns)
    table = generator_table(coeffs, ns.n, ns.max_deg, mw)
    series = poincare_series(table, ns.max_deg)
    if ns.json:
        return _dumps({"p": ns.p, "r": ns.r, "n": ns.n, "series": series}), 0
    lines = [f"{d} {c}" for d, c in enumerate(series)]
    return "\n".join(lines) + "\n", 0


def _build_model(ns, coeffs: Coefficients):
    if ns.model == "omega2":
        mw = ns.max_weight if ns.max_weight is not None else _default_weight(ns)
        md = max(ns.max_deg, 2 * ns.n * mw - 1)
        return build_omega2_model(coeffs, ns.n, md, mw)
    if ns.model == "tensor":
        return build_tensor_model(coeffs, ns.n, ns.max_deg)
    if ns.model == "fibre":
        _require(ns, "k")
        return build_fibre_page_model(coeffs, ns.n, ns.k, ns.max_deg)
    raise ValueError(f"unknown model {ns.model!r}")


def _cmd_bss(ns) -> tuple[str, int]:
    _require(ns, "model", "p", "r", "n", "max_deg", "pages")
    coeffs = Coefficients(ns.p, ns.r)
    model = _build_model(ns, coeffs)
    weights = [ns.weight] if ns.weight is not None else None
    page = compute_page(model, ns.pages, 0, ns.max_deg, weights)
    acyclic = all(s.dim == 0 for s in page.slices)
    if ns.json:
        obj = page.to_json()
        obj["model"] = model.label
        obj["acyclic"] = acyclic
        return _dumps(obj), 0
    lines = [f"model {model.label}, page {page.page}"]
    for s in page.slices:
        basis = ", ".join(s.basis) if s.basis else "-"
        killed = f"  (killed by page {s.killed_by})" if s.killed_by is not None else ""
        lines.append(f"degree {s.degree} weight {s.weight} dim {s.dim}: {basis}{killed}")
    lines.append(f"acyclic: {'yes' if acyclic else 'no'}")
    return "\n".join(lines) + "\n", 0


def _cmd_survivor(ns) -> tuple[str, int]:
    _require(ns, "p", "r", "n", "k")
    coeffs = Coefficients(ns.p, ns.r)
    pair = sigma_tau_classes(coeffs, ns.n, ns.k)
    pk = ns.p**ns.k
    md = max(ns.max_deg if ns.max_deg is not None else 0, 2 * ns.n * pk - 1)
    model = build_omega2_model(coeffs, ns.n, md, pk)
    target = ns.pages if ns.pages is not None else ns.r + 1
    rep_tau = survivor_check(model, pair.tau, target)
    rep_sigma = survivor_check(model, pair.sigma, target)
    if ns.json:
        return _dumps(
            {
                "p": ns.p,
                "r": ns.r,
                "n": ns.n,
                "k": ns.k,
                "tau": rep_tau.to_json(),
                "sigma": rep_sigma.to_json(),
            }
        ), 0

    def fmt(name: str, rep) -> str:
        if rep.nonzero:
            return f"{name} = {rep.class_render}: nonzero on page {rep.target_page}"
        return (
            f"{name} = {rep.class_render}: dies entering page {rep.page_reached}"
            f" ({rep.obstruction})"
        )

    return fmt("tau", rep_tau) + "\n" + fmt("sigma", rep_sigma) + "\n", 0


def _cmd_d2(ns) -> tuple[str, int]:
    _require(ns, "r", "n")
    module = build_d2_module(ns.r, ns.n)
    decos = decomposition_search(module)
    if ns.json:
        return _dumps(
            {
                "module": module.to_json(),
                "decompositions": [d.to_json() for d in decos],
            }
        ), 0
    lines = ["classes: " + ", ".join(c.render() for c in module.classes)]
    for label, mat in (("Sq^1", module.sq1), ("Sq^2", module.sq2)):
        for j, cls in enumerate(module.classes):
            if mat[:, j].any():
                lines.append(f"{label} {cls.render()} = {module.render_vector(mat[:, j])}")
    for page, mat in module.bocksteins:
        for j, cls in enumerate(module.classes):
            if mat[:, j].any():
                lines.append(
                    f"beta^({page}) {cls.render()} = {module.render_vector(mat[:, j])}"
                )
    lines.append(f"decompositions: {len(decos)}")
    for i, dec in enumerate(decos, 1):
        a = ", ".join(dec.parts[0])
        b = ", ".join(dec.parts[1])
        lines.append(f"  {i}: {{{a}}} (+) {{{b}}}")
    return "\n".join(lines) + "\n", 0


def _cmd_chain(ns) -> tuple[str, int]:
    _require(ns, "r")
    report = verify_chain_identity(ns.r)
    code = 0 if report.ok else 1
    if ns.json:
        return _dumps(report.to_json()), code
    status = "ok" if report.ok else "FAILED"
    return (
        f"coefficient {report.coefficient} (expected {report.expected}): {status}\n",
        code,
    )


def _cmd_families(ns) -> tuple[str, int]:
    _require(ns, "p", "r")
    t_max = ns.t_max if ns.t_max is not None else 0
    if ns.p == 2:
        entries = even_families(ns.r, t_max)
    else:
        _require(ns, "n", "k")
        entries = odd_families(ns.p, ns.r, ns.n, ns.k, t_max)
    if ns.json:
        return _dumps(entries_to_json(entries)), 0
    return entries_to_csv(entries), 0


def _cmd_oracle(ns) -> tuple[str, int]:
    _require(ns, "p", "r", "n")
    coeffs = Coefficients(ns.p, ns.r)
    max_deg = ns.max_deg if ns.max_deg is not None else 12
    checks: list[tuple[str, bool, str]] = []

    try:
        predicted = basis_primitive_counts(coeffs, ns.n, max_deg)
        oracle = primitive_dims_oracle(coeffs, ns.n, max_deg)
        bad = [
            d
            for d in range(1, max_deg + 1)
            if predicted.get(d, 0) != oracle.get(d, 0)
        ]
        checks.append(
            ("primitives", not bad, "" if not bad else f"mismatch at degrees {bad}")
        )
    except EngineError as exc:
        checks.append(("primitives", False, str(exc)))

    try:
        ok, detail = True, ""
        u, v = gen_u(ns.n), gen_v(ns.n)
        anti = lie_normal_form(bracket(u, v), coeffs, ns.n).add(
            lie_normal_form(bracket(v, u), coeffs, ns.n)
        )
        if anti:
            ok, detail = False, "brackets fail antisymmetry"
        for m in range(1, 4):
            if not lie_normal_form(ad_v(ns.n, m), coeffs, ns.n):
                ok, detail = False, f"iterated bracket with {m} v's straightened to zero"
        checks.append(("straightening", ok, detail))
    except EngineError as exc:
        checks.append(("straightening", False, str(exc)))

    try:
        mw = max(1, max_deg // (2 * ns.n - 2))
        table = generator_table(coeffs, ns.n, max_deg, mw)
        poincare_series(table, max_deg)
        checks.append(("series", True, ""))
    except EngineError as exc:
        checks.append(("series", False, str(exc)))

    try:
        hi = min(max_deg, 12)
        model = build_tensor_model(coeffs, ns.n, max(hi, 2 * ns.n - 1))
        ok = check_acyclic(model, coeffs.r, 1, hi)
        checks.append(
            (
                "page",
                ok,
                "" if ok else f"tensor page {coeffs.r + 1} is nonzero through degree {hi}",
            )
        )
    except EngineError as exc:
        checks.append(("page", False, str(exc)))

    all_ok = all(ok for _, ok, _ in checks)
    code = 0 if all_ok else 1
    if ns.json:
        return _dumps(
            {
                "ok": all_ok,
                "checks": [
                    {"name": name, "ok": ok, "detail": detail}
                    for name, ok, detail in checks
                ],
            }
        ), code
    lines = []
    for name, ok, detail in checks:
        suffix = f" ({detail})" if detail else ""
        lines.append(f"{name}: {'ok' if ok else 'FAILED'}{suffix}")
    return "\n".join(lines) + "\n", code


_COMMANDS = {
    "gens": _cmd_gens,
    "dj": _cmd_dj,
    "poincare": _cmd_poincare,
    "bss": _cmd_bss,
    "survivor": _cmd_survivor,
    "d2": _cmd_d2,
    "chain": _cmd_chain,
    "families": _cmd_families,
    "oracle": _cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        _apply_config(ns)
        text, code = _COMMANDS[ns.command](ns)
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if ns.out:
        Path(ns.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
