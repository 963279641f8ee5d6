"""FastAPI application exposing the computational engine.

Every operation is a POST endpoint with a typed request/response model;
the command-line interface is a thin client of this app (in-process by
default, over HTTP with ``--server``).

Error contract: malformed inputs (unparsable diagrams, bad parameters)
yield **400**; verified-property violations discovered while computing
(a differential identity failing, a subcomplex not closed) yield **409**
with a minimal description.  Verdict-style responses (comparison,
self-check, moduli sweeps) report their findings in the body with
``ok``/``equal`` flags and status 200.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..bridge import decompose_differential, extreme_inclusion_map
from ..corpus import iter_corpus
from ..diagram import DiagramError, SliceWord
from ..moduli import OPPOSITE, RIGHT_PAIR, ModuliError, verify_moduli
from ..skein import (ANNULAR, PLAIN, GradedComplex, LabelError, StateCube,
                     faces_commute, homology_rows)
from ..transverse import (conjugation_check, restricted_report,
                          transverse_report)
from .models import (CompareRequest, CompareResponse, DecomposeResponse,
                     DiagramRequest, ExtremeMapRequest, ExtremeMapResponse,
                     FirstDifference, GradingRow, HealthResponse,
                     HomologyRequest, HomologyResponse, ModuliRequest,
                     ModuliResponse, SelfcheckFailure, SelfcheckRequest,
                     SelfcheckResponse, TransverseRequest, TransverseResponse)

_CONVENTION_NAMES = {"right": RIGHT_PAIR, "opposite": OPPOSITE}


def _homology_response(req: HomologyRequest, mode: str) -> HomologyResponse:
    word = req.diagram.to_word()
    cube = StateCube(word, sign_order=req.sign_order)
    complex_ = GradedComplex(cube, mode, check=False)
    rows = homology_rows(complex_.homology(req.ring))
    return HomologyResponse(
        mode="annular" if mode == ANNULAR else "plain",
        ring=req.ring,
        crossings=word.n_crossings,
        generators=cube.generator_count(),
        gradings=[GradingRow(**row) for row in rows],
    )


def _comparison_table(word: SliceWord, ring: str) -> Dict[Tuple[int, ...], str]:
    gc = GradedComplex(StateCube(word), ANNULAR, check=False)
    return {key: str(grp) for key, grp in gc.homology(ring).items()}


def _selfcheck_entry(entry) -> List[Tuple[str, str, bool]]:
    """(entry name, check name, passed) triples for one corpus entry."""
    word = entry.word
    results = [
        (entry.name, "faces-annular", faces_commute(word, ANNULAR)),
        (entry.name, "faces-plain", faces_commute(word, PLAIN)),
    ]
    if entry.braid is not None:
        results.append((entry.name, "transverse-chain",
                        transverse_report(entry.braid, deep=False).ok))
    else:
        results.append((entry.name, "restricted-chain",
                        restricted_report(word, deep=False).ok))
    return results


def _selfcheck_chunk(args: Tuple[Optional[int], int, int]
                     ) -> Tuple[int, List[Tuple[str, str, bool]]]:
    limit, jobs, k = args
    count = 0
    results: List[Tuple[str, str, bool]] = []
    for i, entry in enumerate(iter_corpus()):
        if limit and i >= limit:
            break
        if i % jobs != k:
            continue
        count += 1
        results.extend(_selfcheck_entry(entry))
    return count, results


def create_app() -> FastAPI:
    app = FastAPI(
        title="askein",
        version=__version__,
        description="Exact tri-graded annular Khovanov (skein) homology.",
    )

    @app.exception_handler(DiagramError)
    @app.exception_handler(ModuliError)
    @app.exception_handler(LabelError)
    @app.exception_handler(ValueError)
    async def _input_error(request: Request, exc: Exception) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(AssertionError)
    async def _property_violation(request: Request,
                                  exc: AssertionError) -> JSONResponse:
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    async def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/skein-homology", response_model=HomologyResponse)
    def skein_homology_route(req: HomologyRequest) -> HomologyResponse:
        return _homology_response(req, ANNULAR)

    @app.post("/khovanov-homology", response_model=HomologyResponse)
    def khovanov_homology_route(req: HomologyRequest) -> HomologyResponse:
        return _homology_response(req, PLAIN)

    @app.post("/decompose", response_model=DecomposeResponse)
    def decompose_route(req: DiagramRequest) -> DecomposeResponse:
        report = decompose_differential(req.diagram.to_word())
        return DecomposeResponse(ok=True, **report.to_dict())

    @app.post("/transverse", response_model=TransverseResponse,
              response_model_exclude_none=True)
    def transverse_route(req: TransverseRequest) -> TransverseResponse:
        braid = req.diagram.to_braid()
        if braid is not None:
            report = transverse_report(braid, deep=req.deep)
        else:
            report = restricted_report(req.diagram.to_word(), deep=req.deep)
        return TransverseResponse(**report.to_dict())

    @app.post("/extreme-map", response_model=ExtremeMapResponse)
    def extreme_map_route(req: ExtremeMapRequest) -> ExtremeMapResponse:
        word = req.diagram.to_word()
        cube = StateCube(word)
        q = req.q
        if q is None:
            q = min(cube.grading(g)[1] for g in cube.generators())
        report = extreme_inclusion_map(word, q, ring=req.ring, cube=cube)
        return ExtremeMapResponse(**report.to_dict())

    @app.post("/verify-moduli", response_model=ModuliResponse)
    def verify_moduli_route(req: ModuliRequest) -> ModuliResponse:
        verdict = verify_moduli(
            req.diagram.to_word(), req.index,
            convention=_CONVENTION_NAMES[req.convention],
            list_limit=req.list_limit,
        )
        verdict["convention"] = req.convention
        return ModuliResponse(**verdict)

    @app.post("/compare", response_model=CompareResponse,
              response_model_exclude_none=True)
    def compare_route(req: CompareRequest) -> CompareResponse:
        braid_a = req.left.to_braid()
        braid_b = req.right.to_braid()
        if braid_a is not None and braid_b is not None:
            verdict = conjugation_check(braid_a, braid_b, ring=req.ring)
            first = verdict.first_difference
            return CompareResponse(
                ring=req.ring,
                tables_equal=verdict.tables_equal,
                equal=verdict.equal,
                psi_gradings_equal=verdict.psi_gradings_equal,
                psi_class_nonzero=[verdict.psi_class_nonzero_a,
                                   verdict.psi_class_nonzero_b],
                first_difference=None if first is None else FirstDifference(
                    grading=list(first[0]), left=first[1], right=first[2]),
            )
        table_a = _comparison_table(req.left.to_word(), req.ring)
        table_b = _comparison_table(req.right.to_word(), req.ring)
        first_diff = None
        for key in sorted(set(table_a) | set(table_b)):
            left, right = table_a.get(key, "0"), table_b.get(key, "0")
            if left != right:
                first_diff = FirstDifference(grading=list(key),
                                             left=left, right=right)
                break
        return CompareResponse(ring=req.ring,
                               tables_equal=first_diff is None,
                               equal=first_diff is None,
                               first_difference=first_diff)

    @app.post("/selfcheck", response_model=SelfcheckResponse)
    def selfcheck_route(req: SelfcheckRequest) -> SelfcheckResponse:
        limit = req.limit or None
        if req.jobs > 1:
            import multiprocessing

            with multiprocessing.get_context("fork").Pool(req.jobs) as pool:
                chunks = pool.map(
                    _selfcheck_chunk,
                    [(limit, req.jobs, k) for k in range(req.jobs)],
                )
            count = sum(c for c, _ in chunks)
            results = [r for _, rs in chunks for r in rs]
        else:
            count, results = _selfcheck_chunk((limit, 1, 0))
        failures = [SelfcheckFailure(entry=name, check=check)
                    for name, check, passed in results if not passed]
        return SelfcheckResponse(
            entries_checked=count,
            checks_run=len(results),
            failures=failures,
            ok=not failures,
        )

    return app
