"""Command-line client for the annular skein homology service.

The CLI is a thin client: every subcommand builds a typed request,
sends it to the FastAPI application (in process by default, or to a
running server with ``--server``), and renders the JSON response.

Exit codes: 0 when the computation succeeds and every asserted property
holds, 1 when a verified property is falsified (differing tables on
``compare``, failed checks, permutation-variant homology), 2 on input
errors (unreadable or malformed files, bad flags).

Output is deterministic for a fixed input and configuration: JSON is
emitted with sorted keys, CSV and text tables in canonical row order.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

import click

from . import __version__
from .diagram import DiagramError

JSON_FMT = "json"
CSV_FMT = "csv"
TABLE_FMT = "text-table"


@dataclass
class RunConfig:
    server: Optional[str]
    ring: str
    fmt: str
    jobs: int
    permute: Optional[str]
    convention: str
    kind: str


class ClientError(click.ClickException):
    """Input-level failure: exits with status 2."""

    exit_code = 2


class PropertyFalsified(click.ClickException):
    """A verified property failed: exits with status 1."""

    exit_code = 1


class ServiceClient:
    """Sends requests either in process or to a remote server."""

    def __init__(self, server: Optional[str]):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app())

    def post(self, path: str, payload: Dict) -> Dict:
        response = self._client.post(path, json=payload)
        if response.status_code in (400, 422):
            raise ClientError(_detail(response))
        if response.status_code == 409:
            raise PropertyFalsified(_detail(response))
        response.raise_for_status()
        return response.json()


def _detail(response) -> str:
    try:
        body = response.json()
    except ValueError:
        return response.text
    detail = body.get("detail", body)
    return detail if isinstance(detail, str) else json.dumps(detail)


# ---------------------------------------------------------------------------
# input handling
# ---------------------------------------------------------------------------


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ClientError(f"cannot read {path}: {exc}")


def _diagram_spec(path: str, kind: str) -> Dict:
    """Parse an input file into a request diagram spec.

    ``kind`` is ``braid``, ``slice``, or ``auto`` (decide by suffix).
    Parsing happens client side so malformed files fail before any
    output is produced.
    """
    if kind == "auto":
        suffix = Path(path).suffix
        if suffix == ".braid":
            kind = "braid"
        elif suffix == ".slice":
            kind = "slice"
        else:
            raise ClientError(
                f"cannot infer diagram kind of {path}; use --kind or a "
                f".braid/.slice suffix")
    text = _read_text(path)
    from .diagram import parse_braid_file, parse_slice_file

    try:
        if kind == "braid":
            braid = parse_braid_file(text)
            return {"kind": "braid", "strands": braid.strands,
                    "letters": list(braid.letters)}
        parse_slice_file(text)  # validate before shipping
    except DiagramError as exc:
        raise ClientError(f"{path}: {exc}")
    return {"kind": "slice", "text": text}


def _crossing_count(spec: Dict) -> int:
    if spec["kind"] == "braid":
        return len(spec["letters"])
    return sum(1 for line in spec["text"].splitlines()
               if line.split("#", 1)[0].strip().upper().startswith("X"))


def _parse_permutation(value: str, n: int) -> List[int]:
    """``reverse``, ``seed:N`` (seeded shuffle), or an explicit comma list."""
    if value == "reverse":
        return list(range(n))[::-1]
    if value.startswith("seed:"):
        try:
            seed = int(value.split(":", 1)[1])
        except ValueError:
            raise ClientError(f"bad permutation seed in {value!r}")
        order = list(range(n))
        random.Random(seed).shuffle(order)
        return order
    try:
        order = [int(tok) for tok in value.split(",") if tok.strip() != ""]
    except ValueError:
        raise ClientError(f"bad crossing permutation {value!r}")
    if sorted(order) != list(range(n)):
        raise ClientError(
            f"permutation {value!r} must list 0..{n - 1} exactly once")
    return order


# ---------------------------------------------------------------------------
# output rendering
# ---------------------------------------------------------------------------


def _emit(payload: Dict, fmt: str) -> None:
    if fmt == JSON_FMT:
        click.echo(json.dumps(payload, sort_keys=True, indent=2))
        return
    rows = _tabulate(payload)
    if fmt == CSV_FMT:
        lines = [",".join(_csv_cell(c) for c in row) for row in rows]
        click.echo("\n".join(lines))
        return
    widths = [max(len(str(row[i])) for row in rows)
              for i in range(len(rows[0]))]
    lines = []
    for j, row in enumerate(rows):
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))
        if j == 0:
            lines.append("  ".join("-" * w for w in widths))
    click.echo("\n".join(lines))


def _csv_cell(value: object) -> str:
    text = str(value)
    if any(ch in text for ch in ",\"\n"):
        text = '"' + text.replace('"', '""') + '"'
    return text


def _tabulate(payload: Dict) -> List[List[object]]:
    """Canonical row form: grading tables and config listings become
    real tables, everything else key/value pairs."""
    if "gradings" in payload:
        has_f = any("f" in row and row["f"] is not None
                    for row in payload["gradings"])
        header = ["h", "q"] + (["f"] if has_f else []) + ["free_rank", "torsion"]
        rows: List[List[object]] = [header]
        for row in payload["gradings"]:
            out = [row["h"], row["q"]]
            if has_f:
                out.append(row.get("f", ""))
            out.append(row["free_rank"])
            out.append(" ".join(str(t) for t in row["torsion"]))
            rows.append(out)
        return rows
    if "entries" in payload:
        header = ["state", "arcs", "kind", "chain_count", "ok"]
        rows = [header]
        for e in payload["entries"]:
            rows.append([e["state"],
                         " ".join(str(a) for a in e["arcs"]),
                         e["kind"], e["chain_count"], e["ok"]])
        rows.append(["total", payload["configurations"],
                     "violations", payload["violations"], payload["ok"]])
        return rows
    rows = [["key", "value"]]
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        rows.append([key, value])
    return rows


# ---------------------------------------------------------------------------
# command group
# ---------------------------------------------------------------------------


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__)
@click.option("--server", default=None, metavar="URL",
              help="Base URL of a running service (default: in process).")
@click.option("--ring", type=click.Choice(["Z", "Z2"]), default="Z",
              show_default=True, help="Coefficient ring.")
@click.option("--format", "fmt",
              type=click.Choice([JSON_FMT, CSV_FMT, TABLE_FMT]),
              default=JSON_FMT, show_default=True, help="Output format.")
@click.option("--jobs", type=click.IntRange(min=1), default=1,
              show_default=True, help="Worker processes where supported.")
@click.option("--permute-crossings", "permute", default=None,
              metavar="PERM",
              help="Recompute homology under a permuted crossing sign "
                   "order and assert equality: 'reverse', 'seed:N', or "
                   "an explicit list like '2,0,1'.")
@click.option("--convention", type=click.Choice(["right", "opposite"]),
              default="right", show_default=True,
              help="Ladybug matching convention for moduli checks.")
@click.option("--kind", type=click.Choice(["auto", "braid", "slice"]),
              default="auto", show_default=True,
              help="Input kind (auto: decide by file suffix).")
@click.pass_context
def main(ctx: click.Context, server: Optional[str], ring: str, fmt: str,
         jobs: int, permute: Optional[str], convention: str,
         kind: str) -> None:
    """Exact tri-graded annular Khovanov (skein) homology."""
    ctx.obj = RunConfig(server=server, ring=ring, fmt=fmt, jobs=jobs,
                        permute=permute, convention=convention, kind=kind)


def _client(cfg: RunConfig) -> ServiceClient:
    return ServiceClient(cfg.server)


def _homology_command(cfg: RunConfig, path: str, endpoint: str) -> None:
    spec = _diagram_spec(path, cfg.kind)
    client = _client(cfg)
    base = client.post(endpoint, {"diagram": spec, "ring": cfg.ring})
    if cfg.permute is not None:
        order = _parse_permutation(cfg.permute, _crossing_count(spec))
        permuted = client.post(endpoint, {"diagram": spec, "ring": cfg.ring,
                                          "sign_order": order})
        invariant = permuted["gradings"] == base["gradings"]
        base["permutation"] = order
        base["permutation_invariant"] = invariant
        if not invariant:
            _emit(base, cfg.fmt)
            raise PropertyFalsified(
                "homology changed under crossing sign permutation "
                f"{order}")
    _emit(base, cfg.fmt)


@main.command("skein-homology")
@click.argument("input_path", metavar="FILE")
@click.pass_obj
def skein_homology_cmd(cfg: RunConfig, input_path: str) -> None:
    """Tri-graded annular homology table of FILE."""
    _homology_command(cfg, input_path, "/skein-homology")


@main.command("khovanov-homology")
@click.argument("input_path", metavar="FILE")
@click.pass_obj
def khovanov_homology_cmd(cfg: RunConfig, input_path: str) -> None:
    """Bigraded plain homology table of FILE."""
    _homology_command(cfg, input_path, "/khovanov-homology")


@main.command("decompose")
@click.argument("input_path", metavar="FILE")
@click.pass_obj
def decompose_cmd(cfg: RunConfig, input_path: str) -> None:
    """Split the plain differential by filtration shift and verify the
    identities entrywise."""
    spec = _diagram_spec(input_path, cfg.kind)
    resp = _client(cfg).post("/decompose", {"diagram": spec})
    _emit(resp, cfg.fmt)
    if not resp.get("ok", False):
        raise PropertyFalsified("decomposition identities failed")


@main.command("transverse")
@click.argument("input_path", metavar="FILE")
@click.option("--shallow", is_flag=True,
              help="Skip homology-level minima (chain-level checks only).")
@click.pass_obj
def transverse_cmd(cfg: RunConfig, input_path: str, shallow: bool) -> None:
    """Self-linking data, distinguished cocycles, and minimal gradings."""
    spec = _diagram_spec(input_path, cfg.kind)
    resp = _client(cfg).post("/transverse",
                             {"diagram": spec, "deep": not shallow})
    _emit(resp, cfg.fmt)
    if not resp.get("ok", False):
        failed = sorted(k for k, v in resp.get("checks", {}).items() if not v)
        raise PropertyFalsified(f"transverse checks failed: {failed}")


@main.command("extreme-map")
@click.argument("input_path", metavar="FILE")
@click.option("-q", "--quantum", type=int, default=None,
              help="Quantum grading (default: the diagram's minimum).")
@click.pass_obj
def extreme_map_cmd(cfg: RunConfig, input_path: str,
                    quantum: Optional[int]) -> None:
    """Map induced by including the minimal-filtration subcomplex."""
    spec = _diagram_spec(input_path, cfg.kind)
    payload: Dict = {"diagram": spec, "ring": cfg.ring}
    if quantum is not None:
        payload["q"] = quantum
    resp = _client(cfg).post("/extreme-map", payload)
    _emit(resp, cfg.fmt)


@main.command("verify-moduli")
@click.argument("input_path", metavar="FILE")
@click.option("--index", type=click.Choice(["2", "3"]), default="2",
              show_default=True, help="Configuration index to sweep.")
@click.option("--list-limit", type=click.IntRange(min=0), default=None,
              help="Truncate the per-configuration listing.")
@click.pass_obj
def verify_moduli_cmd(cfg: RunConfig, input_path: str, index: str,
                      list_limit: Optional[int]) -> None:
    """Sweep decorated configurations and verify moduli combinatorics."""
    spec = _diagram_spec(input_path, cfg.kind)
    payload: Dict = {"diagram": spec, "index": int(index),
                     "convention": cfg.convention}
    if list_limit is not None:
        payload["list_limit"] = list_limit
    resp = _client(cfg).post("/verify-moduli", payload)
    _emit(resp, cfg.fmt)
    if not resp.get("ok", False):
        raise PropertyFalsified(
            f"{resp.get('violations')} moduli configuration(s) violated "
            f"the index-{index} laws")


@main.command("compare")
@click.argument("path_a", metavar="A")
@click.argument("path_b", metavar="B")
@click.pass_obj
def compare_cmd(cfg: RunConfig, path_a: str, path_b: str) -> None:
    """Compare the graded homology tables of two diagrams."""
    spec_a = _diagram_spec(path_a, cfg.kind)
    spec_b = _diagram_spec(path_b, cfg.kind)
    resp = _client(cfg).post("/compare", {"left": spec_a, "right": spec_b,
                                          "ring": cfg.ring})
    _emit(resp, cfg.fmt)
    if not resp.get("equal", False):
        raise PropertyFalsified("homology tables differ")


@main.command("selfcheck")
@click.option("--limit", type=click.IntRange(min=0), default=200,
              show_default=True,
              help="Corpus entries to verify (0 = the whole corpus).")
@click.pass_obj
def selfcheck_cmd(cfg: RunConfig, limit: int) -> None:
    """Run the invariant suite over the built-in corpus."""
    resp = _client(cfg).post("/selfcheck",
                             {"limit": limit, "jobs": cfg.jobs})
    _emit(resp, cfg.fmt)
    if not resp.get("ok", False):
        raise PropertyFalsified(
            f"{len(resp.get('failures', []))} selfcheck failure(s)")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve_cmd(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
