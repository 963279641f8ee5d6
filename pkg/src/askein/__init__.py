"""Exact tri-graded annular Khovanov (skein) homology.

Core layers:

* :mod:`askein.diagram` -- annular diagrams as cyclic slice words, braid
  closures, resolutions, and circle data.
* :mod:`askein.exact` -- exact integer and GF(2) linear algebra (Smith
  normal form, homology presentations).
* :mod:`askein.skein` -- the state cube, annular and plain differentials,
  graded complexes, and homology tables.
* :mod:`askein.bridge` -- the filtration decomposition of the plain
  differential and the extreme-subcomplex inclusion map.
* :mod:`askein.transverse` -- self-linking data, distinguished cocycles,
  minimal-grading invariants, and stabilization maps.
* :mod:`askein.moduli` -- combinatorial verification of index-2 and
  index-3 flow moduli (ladybug matchings, hexagon boundary graphs).
* :mod:`askein.corpus` -- the built-in verification corpus.

Interface layers: :mod:`askein.service` (FastAPI application) and
:mod:`askein.cli` (thin command-line client).
"""

__version__ = "0.1.0"

from .diagram import (BraidWord, Cap, Cross, Cup, DiagramError, SliceWord,
                      braid_word, parse_braid_file, parse_slice_file)
from .exact import HomologyGroup, IntMatrix, smith_normal_form
from .skein import (ANNULAR, PLAIN, Gen, GradedComplex, StateCube,
                    khovanov_complex, khovanov_homology, skein_complex,
                    skein_homology)

__all__ = [
    "__version__",
    "ANNULAR",
    "PLAIN",
    "BraidWord",
    "Cap",
    "Cross",
    "Cup",
    "DiagramError",
    "Gen",
    "GradedComplex",
    "HomologyGroup",
    "IntMatrix",
    "SliceWord",
    "StateCube",
    "braid_word",
    "khovanov_complex",
    "khovanov_homology",
    "parse_braid_file",
    "parse_slice_file",
    "skein_complex",
    "skein_homology",
    "smith_normal_form",
]
