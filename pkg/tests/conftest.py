import os
from importlib import resources
from pathlib import Path

import pytest

# "Yo quiero cruzar un puente robusto." in CoNLL-U
FIG1 = (
    "# sent_id = fig1\n"
    "1\tYo\tyo\tPRON\t_\tCase=Nom|Number=Sing|Person=1\t2\tnsubj\t_\t_\n"
    "2\tquiero\tquerer\tVERB\t_\tMood=Ind|Number=Sing|Person=1\t0\troot\t_\t_\n"
    "3\tcruzar\tcruzar\tVERB\t_\tVerbForm=Inf\t2\txcomp\t_\t_\n"
    "4\tun\tuno\tDET\t_\tGender=Masc|Number=Sing\t5\tdet\t_\t_\n"
    "5\tpuente\tpuente\tNOUN\t_\tGender=Masc|Number=Sing\t3\tobj\t_\t_\n"
    "6\trobusto\trobusto\tADJ\t_\tGender=Masc|Number=Sing\t5\tamod\t_\t_\n"
    "\n"
)

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def mini_corpus() -> Path:
    return Path(str(resources.files("gendermi") / "data" / "mini_de.conllu"))


@pytest.fixture(scope="session")
def mini_lexicon() -> Path:
    return Path(str(resources.files("gendermi") / "data" / "mini_de_lexicon.tsv"))


def subprocess_env(**extra):
    """Environment for CLI subprocesses; lets numba run more threads than cores."""
    env = dict(os.environ)
    env.setdefault("NUMBA_NUM_THREADS", "8")
    env.update({k: str(v) for k, v in extra.items()})
    return env


# ---------------------------------------------------------------------------
# acceptance criteria reporting: tests marked ``criterion(n, title)`` are
# rolled up into one PASS/FAIL line per criterion at the end of the run

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (rep.when == "call" or rep.failed):
        return
    number, title = marker.args
    status, _, details = _criteria.get(number, ("PASS", title, []))
    if not rep.passed:
        status = "FAIL"
    details = details + [v for k, v in item.user_properties if k == "detail"]
    _criteria[number] = (status, title, details)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status, title, details = _criteria[number]
        extra = f" [{'; '.join(details)}]" if details else ""
        terminalreporter.write_line(f"criterion {number:>2} {status}: {title}{extra}")
