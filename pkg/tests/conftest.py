import pytest

from rigid120.exactla import clear_denominators, restrict_scalars
from rigid120.polytope import adjacency_graph, generate_normals, kept_face_pairs, select_removed
from rigid120.rigidity import build_jacobian, trivial_kernel_basis

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


class ReferenceInstance:
    def __init__(self):
        self.normals = generate_normals()
        self.graph = adjacency_graph(self.normals)
        self.selection = select_removed(self.normals)
        self.faces = kept_face_pairs(self.graph, self.selection)
        self.jacobian = build_jacobian(self.normals, self.selection, self.faces)
        self.trivial = trivial_kernel_basis(self.normals, self.selection)
        self._q = None
        self._z = None

    @property
    def q(self):
        if self._q is None:
            self._q = restrict_scalars(self.jacobian)
        return self._q

    @property
    def z(self):
        if self._z is None:
            self._z = clear_denominators(self.q)
        return self._z


@pytest.fixture(scope="session")
def ref():
    return ReferenceInstance()


@pytest.fixture(scope="session")
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(key: str, ok: bool, detail: str) -> None:
        _ACCEPTANCE[key] = (ok, detail)
        print(f"{key}: {'PASS' if ok else 'FAIL'} - {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k.split("-")[1])):
        ok, detail = _ACCEPTANCE[key]
        terminalreporter.write_line(f"{key}: {'PASS' if ok else 'FAIL'} - {detail}")
