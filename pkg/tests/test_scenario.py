import pytest

from pinchmm.model import UserPosition, dbm_to_watt
from pinchmm.scenario import (
    ScenarioGenSpec, build_config, format_config, generate_scenario, load_config,
    parse_config, save_config,
)


def test_defaults():
    cfg = generate_scenario(ScenarioGenSpec())
    assert (cfg.D1, cfg.D2, cfg.t, cfg.fc) == (-10.0, 10.0, 3.0, 28e9)
    assert cfg.sigma2 == pytest.approx(1e-12)
    assert cfg.ptx == pytest.approx(10.0)
    assert cfg.delta == pytest.approx(0.0053534, abs=1e-7)
    assert cfg.num_pinch == 5 and cfg.alpha == 0.01


def test_users_in_rectangle_and_seeded():
    spec = ScenarioGenSpec(rect_width=10, rect_length=40, num_users=200, seed=3)
    a, b = generate_scenario(spec), generate_scenario(spec)
    assert a.users == b.users
    assert all(-20 <= u.x <= 20 and -5 <= u.y <= 5 for u in a.users)
    assert a.service_x == (-20.0, 20.0)


def test_spec_validation():
    with pytest.raises(ValueError):
        ScenarioGenSpec(rect_width=0)
    with pytest.raises(ValueError):
        ScenarioGenSpec(num_users=0)


def test_roundtrip(tmp_path):
    cfg = generate_scenario(ScenarioGenSpec(num_users=4, seed=1), alpha=0.05, feed_x=-3.0)
    path = tmp_path / "s.cfg"
    save_config(cfg, path)
    assert load_config(path) == cfg


def test_parse_and_overrides(tmp_path):
    text = """
    # demo
    ptx_dbm = 30
    sigma2_dbm = -80   # noisy
    alpha = 0.1
    num_pinch = 3
    user = 1.5, -2
    user = -4, 0.5
    """
    raw = parse_config(text)
    assert raw["users"] == [UserPosition(1.5, -2.0), UserPosition(-4.0, 0.5)]
    path = tmp_path / "d.cfg"
    path.write_text(text)
    cfg = load_config(path)
    assert cfg.ptx == pytest.approx(1.0) and cfg.sigma2 == pytest.approx(1e-11)
    assert load_config(path, alpha=0.2, ptx_dbm=40).ptx == pytest.approx(10.0)
    assert load_config(path, alpha=0.2).alpha == 0.2


def test_watt_file_value_loses_to_dbm_flag(tmp_path):
    cfg = build_config([UserPosition(0.0, 0.0)], ptx=2.0)
    path = tmp_path / "w.cfg"
    path.write_text(format_config(cfg))
    assert load_config(path).ptx == 2.0
    assert load_config(path, ptx_dbm=20).ptx == pytest.approx(dbm_to_watt(20))


@pytest.mark.parametrize("text", ["bogus = 1\nuser = 0, 0", "user = 1\n", "alpha\n", "alpha = x\nuser = 0,0"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_config(text)


def test_no_users(tmp_path):
    path = tmp_path / "e.cfg"
    path.write_text("alpha = 0.1\n")
    with pytest.raises(ValueError):
        load_config(path)
