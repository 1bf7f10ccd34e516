"""Registry of the built-in example algebras and their expected verdicts."""

from __future__ import annotations

from importlib import resources

import numpy as np

from sasaki_lab.algebras import Algebra, build_boolean_ring, build_fano_lambda
from sasaki_lab.errors import UnknownFixture
from sasaki_lab.fileformat import AlgebraFile, loads, parse_algebra_text
from sasaki_lab.sasaki import evaluate_conditions

FILE_FIXTURES = (
    "fig1",
    "n5_bprime_a",
    "n5_bprime_c",
    "fig3",
    "fig4",
    "fig5_ex1",
    "fig7_ex2",
    "pseudoring6",
    "mo2",
)
ALIASES = {"fig7": "fig7_ex2", "fig5": "fig5_ex1"}

CODE_EXPECT = {
    "fano": {
        "C1": True,
        "C2": True,
        "A1": False,
        "A2": False,
        "E1": False,
        "involution": True,
        "antitone": True,
        "is_lattice": False,
    },
}
BOOLEAN_RING_EXPECT = {"semiring": True, "c3": True, "c4": True, "c5": True, "c6": True, "A1": True, "A2": True}

FIXTURE_IDS = (
    "fig1",
    "n5_bprime_a",
    "n5_bprime_c",
    "fig3",
    "fig4",
    "fig5_ex1",
    "fano",
    "fig7_ex2",
    "boolean_ring_1",
    "boolean_ring_2",
    "boolean_ring_3",
    "boolean_ring_4",
    "pseudoring6",
    "mo2",
)


def _canonical(fid: str) -> str:
    fid = ALIASES.get(fid, fid)
    if fid not in FIXTURE_IDS:
        raise UnknownFixture(fid)
    return fid


def _text(name: str) -> str:
    return resources.files("sasaki_lab.data").joinpath(name).read_text(encoding="utf-8")


def fixture_file(fid: str) -> AlgebraFile:
    fid = _canonical(fid)
    if fid in FILE_FIXTURES:
        return loads(_text(fid + ".alg"))
    if fid == "fano":
        return AlgebraFile(fid, build_fano_lambda(), dict(CODE_EXPECT["fano"]))
    k = int(fid.rsplit("_", 1)[1])
    return AlgebraFile(fid, build_boolean_ring(k), dict(BOOLEAN_RING_EXPECT))


def fixture(fid: str) -> Algebra:
    """The built-in transcription of a named example."""
    return fixture_file(fid).algebra


def fixture_expectations(fid: str) -> dict[str, bool]:
    return fixture_file(fid).expect


def fixture_text(fid: str) -> str | None:
    """The source text of a file-backed fixture, None for code-built ones."""
    fid = _canonical(fid)
    return _text(fid + ".alg") if fid in FILE_FIXTURES else None


def printed_tables(fid: str) -> dict[str, np.ndarray]:
    """Stored reference ⊙/→ tables, for the fixtures that have them."""
    fid = _canonical(fid)
    try:
        text = _text(fid + ".tables")
    except FileNotFoundError:
        raise UnknownFixture(f"{fid} has no stored tables") from None
    alg = fixture(fid)
    header = f"kind poset\nelements {' '.join(alg.elements)}\n"
    raw = parse_algebra_text(header + text)
    from sasaki_lab.fileformat import _binop_table

    return {key: _binop_table(raw, key) for key in raw.binop}


def printed_tables_text(fid: str) -> str:
    return _text(_canonical(fid) + ".tables")


def validate_fixture(fid: str):
    """Compare the stored expectations with fresh verdicts.

    Returns ``(algebra, [(condition, expected, verdict), ...])``.
    """
    af = fixture_file(fid)
    verdicts = evaluate_conditions(af.algebra, list(af.expect))
    rows = [(name, af.expect[name], verdicts[name]) for name in af.expect]
    return af.algebra, rows
