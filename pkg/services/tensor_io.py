"""
Coefficient tensor files: parsing, validation and dumping

Format, one statement per line, '#' starts a comment:

    system j0 k0
    regime coupled
    P i alpha beta j k value
    A i j alpha beta gamma k value
    B i j alpha beta k value
    Q i alpha j k value
    R i j k value

Component indices are 1-based (waves first), spacetime indices run 0..3.
"""
import math
import re
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np

from core.errors import StructuralZeroError, SymmetryError, TensorParseError
from core.logging import logger
from models.tensors import CoefficientTensors, _shape

# c = component index, s = spacetime index
INDEX_KINDS = {
    "A": "ccsssc",
    "B": "ccssc",
    "P": "csscc",
    "Q": "cscc",
    "R": "ccc",
}

SYMMETRY_TOL = 1e-14

_TOKEN = re.compile(r"\S+")

Entry = Tuple[str, Tuple[int, ...], float, int]


def _tokens(line: str) -> List[Tuple[str, int]]:
    return [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(line)]


def _int(token: str, column: int, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise TensorParseError(f"Expected integer {what}, got '{token}'", line_no, column)


def load_tensors(text: str) -> CoefficientTensors:
    """Parse tensor text into dense arrays, then validate symmetry and structural zeros"""
    j0, k0 = 1, 1
    coupled = False
    seen_header = False
    entries: Dict[Tuple[str, Tuple[int, ...]], Entry] = {}
    raw: List[Tuple[str, List[Tuple[str, int]], int]] = []

    for line_no, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0]
        toks = _tokens(content)
        if not toks:
            continue
        keyword, column = toks[0]
        key = keyword.lower()

        if key == "system":
            if raw:
                raise TensorParseError("'system' header must precede tensor entries", line_no, column)
            if len(toks) != 3:
                raise TensorParseError("'system' expects two integers j0 k0", line_no, column)
            j0 = _int(toks[1][0], toks[1][1], line_no, "j0")
            k0 = _int(toks[2][0], toks[2][1], line_no, "k0")
            if j0 < 0 or k0 < 0 or j0 + k0 == 0:
                raise TensorParseError(f"Invalid component counts {j0} {k0}", line_no, toks[1][1])
            seen_header = True
        elif key == "regime":
            if len(toks) != 2 or toks[1][0].lower() not in ("coupled", "semilinear", "general"):
                col = toks[1][1] if len(toks) > 1 else column
                raise TensorParseError("'regime' expects 'coupled', 'semilinear' or 'general'", line_no, col)
            coupled = toks[1][0].lower() == "coupled"
        elif keyword in INDEX_KINDS:
            raw.append((keyword, toks, line_no))
        else:
            raise TensorParseError(f"Unknown statement '{keyword}'", line_no, column)

    n = j0 + k0
    for name, toks, line_no in raw:
        kinds = INDEX_KINDS[name]
        expected = 1 + len(kinds) + 1
        if len(toks) != expected:
            col = toks[min(len(toks), expected) - 1][1]
            raise TensorParseError(
                f"{name} entry needs {len(kinds)} indices and a value, got {len(toks) - 1} fields",
                line_no, col
            )
        index = []
        for kind, (tok, col) in zip(kinds, toks[1:-1]):
            value = _int(tok, col, line_no, "index")
            if kind == "c":
                if not 1 <= value <= n:
                    raise TensorParseError(f"Component index {value} outside 1..{n}", line_no, col)
                index.append(value - 1)
            else:
                if not 0 <= value <= 3:
                    raise TensorParseError(f"Spacetime index {value} outside 0..3", line_no, col)
                index.append(value)
        tok, col = toks[-1]
        try:
            coeff = float(tok)
        except ValueError:
            raise TensorParseError(f"Invalid coefficient '{tok}'", line_no, col)
        if not math.isfinite(coeff):
            raise TensorParseError(f"Coefficient must be finite, got '{tok}'", line_no, col)

        key = (name, tuple(index))
        if key in entries:
            logger.warning(
                f"Duplicate {name} entry, keeping the later value",
                line=line_no, first_line=entries[key][3]
            )
        entries[key] = (name, tuple(index), coeff, line_no)

    arrays = {name: np.zeros(_shape(name, n)) for name in INDEX_KINDS}
    for name, index, coeff, _ in entries.values():
        arrays[name][index] = coeff

    if not seen_header and raw:
        logger.debug("No 'system' header, using j0 = k0 = 1")

    tensors = CoefficientTensors(j0=j0, k0=k0, coupled=coupled, **arrays)
    validate_symmetry(tensors)
    if coupled:
        validate_structural_zeros(tensors)
    logger.debug("Tensor file parsed", j0=j0, k0=k0, n_entries=len(entries), coupled=coupled)
    return tensors


def load_tensors_file(path: str) -> CoefficientTensors:
    return load_tensors(Path(path).read_text(encoding="utf-8"))


def validate_symmetry(tensors: CoefficientTensors) -> None:
    """G_i^{jab} = G_j^{iba} requires A and B symmetric under (i, a) <-> (j, b)"""
    scale = max(tensors.scale, 1.0)
    checks = {
        "A": (tensors.A, tensors.A.transpose(1, 0, 3, 2, 4, 5)),
        "B": (tensors.B, tensors.B.transpose(1, 0, 3, 2, 4)),
    }
    for name, (arr, swapped) in checks.items():
        diff = np.abs(arr - swapped)
        worst = float(diff.max(initial=0.0))
        if worst > SYMMETRY_TOL * scale:
            index = np.unravel_index(int(np.argmax(diff)), diff.shape)
            readable = [int(v) + 1 if k == "c" else int(v) for v, k in zip(index, INDEX_KINDS[name])]
            raise SymmetryError(
                f"Tensor {name} violates G_i^(j a b) = G_j^(i b a) at {readable}",
                {"tensor": name, "index": readable, "violation": worst}
            )


def validate_structural_zeros(tensors: CoefficientTensors) -> None:
    """Coupled regime: B_i^{jab k^} = Q_i^{a j k^} = R_i^{j^ k} = 0"""
    wave = list(tensors.wave)
    checks = {
        "B": tensors.B[..., wave],
        "Q": tensors.Q[..., wave],
        "R": tensors.R[:, wave, :],
    }
    for name, block in checks.items():
        if np.any(block != 0.0):
            raise StructuralZeroError(
                f"Coupled regime requires {name} to vanish on wave components "
                "(structural zeros of the coefficient decay conditions)",
                {"tensor": name, "max_abs": float(np.abs(block).max())}
            )


def dump_tensors(tensors: CoefficientTensors) -> str:
    """Text form; load_tensors(dump_tensors(x)) reproduces x exactly"""
    lines = [f"system {tensors.j0} {tensors.k0}"]
    if tensors.coupled:
        lines.append("regime coupled")
    for name, kinds in INDEX_KINDS.items():
        arr = getattr(tensors, name)
        for index in zip(*np.nonzero(arr)):
            readable = [str(int(v) + 1) if k == "c" else str(int(v)) for v, k in zip(index, kinds)]
            lines.append(f"{name} {' '.join(readable)} {float(arr[index])!r}")
    return "\n".join(lines) + "\n"
