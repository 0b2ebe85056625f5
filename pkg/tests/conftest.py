import pytest

import jacsyz.jacobian
import jacsyz.resolution
from jacsyz.resolution import betti_table, hilbert_consistency, predicted_cap
from jacsyz.toric import ToricModel, builtin, verify_corollary1, verify_theorem1

# every minimal resolution produced during the run is recorded and checked
CHECKED = []


def assert_resolution_sound(res, table=None):
    """d∘d = 0, homogeneity, no unit entries and Hilbert-series consistency."""
    table = table or betti_table(res)
    assert res.minimal
    assert res.is_complex(), "d∘d != 0"
    assert res.is_homogeneous()
    assert res.unit_entries() == [], "minimized resolution still has unit entries"
    assert hilbert_consistency(res, table, predicted_cap(table)), "Betti table disagrees with the Hilbert series"


@pytest.fixture(scope="session", autouse=True)
def _check_every_resolution():
    orig = jacsyz.resolution.minimize

    def checked(res):
        out = orig(res)
        assert_resolution_sound(out)
        CHECKED.append(betti_table(out))
        return out

    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(jacsyz.resolution, "minimize", checked)
        mp.setattr(jacsyz.jacobian, "minimize", checked)
        yield


@pytest.fixture(scope="session")
def theorem_reports():
    """verify_theorem1 on the Fermat witnesses, computed once."""
    return {ne: verify_theorem1(ToricModel.fermat(*ne)) for ne in [(2, 2), (2, 3), (3, 2)]}


@pytest.fixture(scope="session")
def corollary_reports():
    return {ne: verify_corollary1(ToricModel.fermat(*ne)) for ne in [(2, 2), (2, 3), (3, 2)]}


@pytest.fixture(scope="session")
def example1():
    return {name: builtin(name) for name in ("example1-main", "example1-tangent", "example1-degenerate")}


# --------------------------------------------------------------------------
# one summary line per acceptance criterion

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", m.args))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    ok = _CRITERIA.get(crit, True)
    if report.when == "call" or report.failed:
        _CRITERIA[crit] = ok and not report.failed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), ok in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}")
