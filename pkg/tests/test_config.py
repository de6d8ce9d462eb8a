import pytest

from sg_swell.config import THREADS_ENV, load_config, parse_config, resolve_threads
from sg_swell.errors import ConfigError


def test_minimal_and_defaults():
    cfg = parse_config("scenario = wb_height_1d\n")
    sc = cfg.scenario_spec()
    assert sc.name == "wb_height_1d" and sc.c == 0.25 and sc.bc == ("periodic",)
    assert cfg.output == "out" and cfg.plots is True


def test_overrides_and_comments():
    text = """
    # leading comment
    scenario = dambreak_1d   # trailing comment
    K = 8
    mode = es
    bc = wall
    dt = 5e-4
    plots = no
    resolutions = 8, 16 32
    probabilities = 0.1 0.9
    """
    cfg = parse_config(text)
    sc = cfg.scenario_spec()
    assert (sc.K, sc.mode, sc.bc, sc.dt) == (8, "ES", ("wall",), 5e-4)
    assert cfg.plots is False and cfg.resolutions == (8, 16, 32) and cfg.probabilities == (0.1, 0.9)


def test_single_bc_expands_in_2d():
    sc = parse_config("scenario = dambreak_2d\nbc = wall\n").scenario_spec()
    assert sc.bc == ("wall", "wall")


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("K = 2\n", "missing required key"),
        ("scenario = nope\n", "unknown scenario"),
        ("scenario = mms_2d\nfoo = 1\n", ":2: unknown key"),
        ("scenario = mms_2d\nK = 2\nK = 2\n", "duplicate key"),
        ("scenario = mms_2d\njust text\n", "expected 'key = value'"),
        ("scenario = mms_2d\nK =\n", "empty value"),
        ("scenario = mms_2d\nK = two\n", "bad value"),
        ("scenario = mms_2d\nK = 3\n", "power of two"),
        ("scenario = mms_2d\ndt = -1\n", "positive"),
        ("scenario = mms_2d\nmode = XY\n", "EC or ES"),
        ("scenario = mms_2d\nbc = sideways\n", "boundary kinds"),
        ("scenario = mms_2d\nfamily = other\n", "flux family"),
        ("scenario = mms_2d\nmms_method = guess\n", "mms_method"),
        ("scenario = mms_2d\nprobabilities = 2\n", "[0, 1]"),
        ("scenario = mms_2d\nthreads = -2\n", "threads"),
        ("scenario = mms_2d\nplots = maybe\n", "boolean"),
        ("scenario = mms_2d\nbc = wall wall wall\n", "bc needs 2"),
    ],
)
def test_errors(text, fragment):
    with pytest.raises(ConfigError, match=None) as exc:
        parse_config(text, "x.cfg").scenario_spec()
    assert fragment in str(exc.value)


def test_load_missing(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "none.cfg")


def test_shipped_configs_parse():
    from pathlib import Path

    cfgs = sorted((Path(__file__).parents[1] / "configs").glob("*.cfg"))
    assert len(cfgs) >= 9
    for p in cfgs:
        load_config(p).scenario_spec()


def test_threads_env(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert resolve_threads(3) == 3
    monkeypatch.setenv(THREADS_ENV, "2")
    assert resolve_threads(3) == 2
    monkeypatch.setenv(THREADS_ENV, "x")
    with pytest.raises(ConfigError):
        resolve_threads(0)
    monkeypatch.setenv(THREADS_ENV, "-1")
    with pytest.raises(ConfigError):
        resolve_threads(0)
