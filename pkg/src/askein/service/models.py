"""Pydantic request/response models for the HTTP service.

Diagrams travel as :class:`DiagramSpec`: either a braid word (strand
count plus signed letters) or the text body of a slice file.  Responses
mirror the report dictionaries of the core modules field by field, so
the JSON contract is explicit and statically typed.
"""

from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from ..diagram import BraidWord, SliceWord, parse_slice_file


class DiagramSpec(BaseModel):
    """One input diagram.

    ``braid`` kind: ``strands`` and ``letters`` (letter ``i`` crosses
    strands ``i`` and ``i+1`` positively, ``-i`` negatively).  ``slice``
    kind: ``text`` holds a slice-file body (``X i +|-`` / ``U i`` /
    ``A i`` lines, optional ``O`` orientation line).
    """

    kind: Literal["braid", "slice"]
    strands: Optional[int] = None
    letters: Optional[List[int]] = None
    text: Optional[str] = None

    @model_validator(mode="after")
    def _complete(self) -> "DiagramSpec":
        if self.kind == "braid":
            if self.strands is None or self.letters is None:
                raise ValueError("braid diagrams need strands and letters")
        else:
            if self.text is None:
                raise ValueError("slice diagrams need text")
        return self

    def to_braid(self) -> Optional[BraidWord]:
        if self.kind != "braid":
            return None
        return BraidWord(self.strands, tuple(self.letters))

    def to_word(self) -> SliceWord:
        braid = self.to_braid()
        if braid is not None:
            return braid.to_slice_word()
        return parse_slice_file(self.text)


Ring = Literal["Z", "Z2"]


class HomologyRequest(BaseModel):
    diagram: DiagramSpec
    ring: Ring = "Z"
    #: optional permutation of the crossing indices used for the sign
    #: assignment; any permutation must yield the same homology
    sign_order: Optional[List[int]] = None


class GradingRow(BaseModel):
    h: int
    q: int
    f: Optional[int] = None
    free_rank: int
    torsion: List[int]


class HomologyResponse(BaseModel):
    mode: Literal["annular", "plain"]
    ring: Ring
    crossings: int
    generators: int
    gradings: List[GradingRow]


class DiagramRequest(BaseModel):
    diagram: DiagramSpec


class DecomposeBucketRow(BaseModel):
    q: int
    h: int
    rows: int
    cols: int
    entries_khovanov: int
    entries_f_preserving: int
    entries_f_dropping: int


class DecomposeResponse(BaseModel):
    crossings: int
    checked_identities: int
    buckets: List[DecomposeBucketRow]
    ok: bool


class TransverseRequest(BaseModel):
    diagram: DiagramSpec
    #: also compute homology-level minima and class checks over Z and Z/2
    deep: bool = True


class GenView(BaseModel):
    state: str
    labels: List[str]
    h: int
    q: int
    f: Optional[int] = None


class TransverseResponse(BaseModel):
    """Braid inputs fill the full transverse record; slice inputs fill
    the restricted subset (``restricted=True``)."""

    restricted: bool = False
    ok: bool
    checks: Dict[str, bool]
    j_min: int
    j_min_enumerated: int
    f_min: int
    zero_state_circle_count: int
    # braid-only fields
    strands: Optional[int] = None
    letters: Optional[List[int]] = None
    sl: Optional[int] = None
    oriented_state: Optional[str] = None
    psi_skein: Optional[GenView] = None
    psi_khovanov: Optional[GenView] = None
    oriented_circle_count: Optional[int] = None
    psi_sk_cocycle: Optional[bool] = None
    psi_kh_cocycle: Optional[bool] = None
    f_min_at_sl: Optional[int] = None
    S_extreme: Optional[List[GenView]] = None
    S_f_min: Optional[List[GenView]] = None
    extreme_bucket_size: Optional[int] = None
    #: True iff the oriented resolution attains the maximal circle count,
    #: equivalently iff j_min == sl, equivalently iff the (j_min, -b)
    #: bucket is the singleton {psi_skein}
    oriented_extreme: Optional[bool] = None
    # slice-only fields
    crossings: Optional[int] = None
    oriented_generator: Optional[GenView] = None
    oriented_cocycle: Optional[bool] = None
    # deep fields (per-ring maps; a ring maps to None when the whole
    # homology vanishes)
    fh_min_at_sl: Optional[Dict[str, Optional[int]]] = None
    fh_min: Optional[Dict[str, Optional[int]]] = None
    extreme_group: Optional[Dict[str, str]] = None
    psi_class_nonzero: Optional[Dict[str, bool]] = None


class ExtremeMapRequest(BaseModel):
    diagram: DiagramSpec
    #: quantum grading; defaults to the diagram's minimal one
    q: Optional[int] = None
    ring: Ring = "Z"


class ExtremeMapLevel(BaseModel):
    h: int
    source: str
    target: str
    class_images: List[List[int]]


class ExtremeMapResponse(BaseModel):
    q: int
    f_min: int
    ring: Ring
    subcomplex_closed: bool
    levels: List[ExtremeMapLevel]


class ModuliRequest(BaseModel):
    diagram: DiagramSpec
    index: Literal[2, 3] = 2
    convention: Literal["right", "opposite"] = "right"
    #: truncate the per-configuration listing (counts stay complete)
    list_limit: Optional[int] = None


class ModuliCycle(BaseModel):
    vertices: List[List[int]]
    face_tags: List[List[Any]]


class ModuliEntry(BaseModel):
    state: str
    arcs: List[int]
    bottom_labels: int
    top_labels: int
    kind: str
    chain_count: int
    cycles: Optional[List[ModuliCycle]] = None
    ok: bool


class ModuliResponse(BaseModel):
    index: int
    convention: str
    configurations: int
    violations: int
    ok: bool
    truncated: bool
    entries: List[ModuliEntry]


class CompareRequest(BaseModel):
    left: DiagramSpec
    right: DiagramSpec
    ring: Ring = "Z"


class FirstDifference(BaseModel):
    grading: List[int]
    left: str
    right: str


class CompareResponse(BaseModel):
    ring: Ring
    tables_equal: bool
    equal: bool
    #: set only when both inputs are braids
    psi_gradings_equal: Optional[bool] = None
    psi_class_nonzero: Optional[List[bool]] = None
    first_difference: Optional[FirstDifference] = None


class SelfcheckRequest(BaseModel):
    #: number of corpus entries to verify; 0 or None means the whole corpus
    limit: Optional[int] = Field(default=200, ge=0)
    jobs: int = Field(default=1, ge=1)


class SelfcheckFailure(BaseModel):
    entry: str
    check: str


class SelfcheckResponse(BaseModel):
    entries_checked: int
    checks_run: int
    failures: List[SelfcheckFailure]
    ok: bool


class HealthResponse(BaseModel):
    status: str
    version: str
