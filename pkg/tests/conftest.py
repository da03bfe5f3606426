import shutil

import pytest

from parachk import SolverConfig


def solver_available() -> bool:
    cmd = SolverConfig().solver_command.split()[0]
    return shutil.which(cmd) is not None


needs_solver = pytest.mark.skipif(
    not solver_available(), reason="no SMT solver on PATH (install z3 or set PARACHK_SOLVER)"
)


@pytest.fixture(scope="session")
def cfg() -> SolverConfig:
    return SolverConfig()
