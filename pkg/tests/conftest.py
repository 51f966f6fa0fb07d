import pytest

from thetapm import BUNDLED_ROWS, RunConfig, Workbench


@pytest.fixture(scope="session")
def workbench():
    """Shared workbench; reconstructions are cached on the instance."""
    return Workbench(RunConfig())


@pytest.fixture(scope="session")
def table_results(workbench):
    """All bundled rows, computed once for the whole session."""
    return workbench.run_table(BUNDLED_ROWS)


@pytest.fixture(scope="session")
def row_by_key(table_results):
    return {(r["curve"], r["discriminant"]): r for r in table_results
            if "error" not in r}


@pytest.fixture(scope="session")
def series_32a_43(workbench):
    from thetapm import bundled_curve
    c = bundled_curve("32a")
    return (workbench.signed_series(c, -43, "+"),
            workbench.signed_series(c, -43, "-"))


@pytest.fixture(scope="session")
def base_series(workbench):
    from thetapm import bundled_curve
    out = {}
    for label in ("32a", "40a", "56a"):
        c = bundled_curve(label)
        out[label] = (workbench.signed_series(c, 1, "+"),
                      workbench.signed_series(c, 1, "-"))
    return out
