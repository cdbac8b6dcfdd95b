import numpy as np
import pytest

from core.errors import StructuralZeroError, SymmetryError, TensorParseError
from services.nullcond import q0_form
from services.presets import coupled_wkg_tensors
from services.tensor_io import dump_tensors, load_tensors, load_tensors_file

Q0_TEXT = """
# Box u = (d_t u)^2 - |grad u|^2
system 1 0
P 1 0 0 1 1  1.0
P 1 1 1 1 1 -1.0
P 1 2 2 1 1 -1.0
P 1 3 3 1 1 -1.0
"""


def test_parse_q0_text():
    assert load_tensors(Q0_TEXT).equals(q0_form())


def test_dump_then_load_reproduces_coupled_system():
    tensors = coupled_wkg_tensors()
    text = dump_tensors(tensors)
    assert "regime coupled" in text
    assert load_tensors(text).equals(tensors)


def test_load_from_file(tmp_path):
    path = tmp_path / "q0.txt"
    path.write_text(Q0_TEXT, encoding="utf-8")
    assert load_tensors_file(str(path)).equals(q0_form())


def test_parse_error_reports_line_and_column():
    with pytest.raises(TensorParseError) as info:
        load_tensors("system 1 0\nP 1 0 0 1 x 1.0\n")
    assert info.value.line == 2
    assert info.value.column == 11


@pytest.mark.parametrize("text", [
    "system 1 0\nP 1 0 0 2 1 1.0\n",     # component out of range
    "system 1 0\nP 1 0 4 1 1 1.0\n",     # spacetime index out of range
    "system 1 0\nP 1 0 0 1 1 nan\n",
    "system 1 0\nP 1 0 0 1 1\n",
    "P 1 0 0 1 1 1.0\nsystem 1 0\n",
    "regime sometimes\n",
    "S 1 2 3\n",
])
def test_malformed_text_is_rejected(text):
    with pytest.raises(TensorParseError):
        load_tensors(text)


def test_asymmetric_quasilinear_tensor():
    with pytest.raises(SymmetryError) as info:
        load_tensors("system 1 0\nB 1 1 0 1 1 0.5\n")
    assert info.value.details["tensor"] == "B"


def test_symmetric_quasilinear_tensor_is_accepted():
    tensors = load_tensors("system 1 0\nB 1 1 0 1 1 0.5\nB 1 1 1 0 1 0.5\n")
    assert tensors.B[0, 0, 0, 1, 0] == tensors.B[0, 0, 1, 0, 0] == 0.5


def test_coupled_regime_structural_zeros():
    text = "system 1 1\nregime coupled\nR 2 1 1 0.3\n"
    with pytest.raises(StructuralZeroError):
        load_tensors(text)
    # same entry is allowed outside the coupled regime
    assert load_tensors(text.replace("regime coupled\n", "")).R[1, 0, 0] == 0.3


def test_duplicate_entry_keeps_later_value():
    tensors = load_tensors("system 1 0\nP 1 0 0 1 1 1.0\nP 1 0 0 1 1 2.0\n")
    assert tensors.P[0, 0, 0, 0, 0] == 2.0
    assert np.count_nonzero(tensors.P) == 1


def test_semilinear_regime_is_not_coupled():
    tensors = load_tensors("system 1 1\nregime semilinear\nR 2 1 1 0.3\n")
    assert tensors.R[1, 0, 0] == 0.3
    with pytest.raises(TensorParseError) as info:
        load_tensors("regime sometimes\n")
    assert "'semilinear'" in info.value.message
