import numpy as np
import pytest

from sqgt.errors import ConfigError
from sqgt.fileio import CSV_HEADER
from sqgt.simulate import SweepConfig, parse_config, rows_to_csv, run_simulation

TINY = """
# tiny smoke sweep
n=12
d=2
m=12
eta=2
q=3,5
gammas=0:0,0.05:0.05
trials=20
iterations=10
seed=99
"""


def test_parse_config_round_trip():
    cfg = parse_config(TINY)
    assert cfg == SweepConfig(
        n=12, d=2, m=12, eta_step=2, q_values=(3, 5),
        gammas=((0.0, 0.0), (0.05, 0.05)), trials=20, iterations=10,
        methods=("top-d", "threshold"), seed=99,
    )


@pytest.mark.parametrize(
    "broken",
    [
        TINY.replace("q=3,5", ""),
        TINY + "bogus=1\n",
        TINY.replace("methods", "x") + "methods=best\n",
        TINY.replace("trials=20", "trials=zero"),
    ],
)
def test_parse_config_errors(broken):
    with pytest.raises(ConfigError):
        parse_config(broken)


def test_csv_deterministic_and_well_formed():
    cfg = parse_config(TINY)
    a = rows_to_csv(run_simulation(cfg, threads=1))
    b = rows_to_csv(run_simulation(cfg, threads=2))
    assert a == b
    lines = a.splitlines()
    assert lines[0] == CSV_HEADER
    # one row per (q, noise, method)
    assert len(lines) == 1 + 2 * 2 * 2


def test_topd_rows_have_equal_rates():
    cfg = parse_config(TINY)
    for row in run_simulation(cfg, threads=1):
        assert 0.0 <= row.p_fn <= 1.0 and 0.0 <= row.p_fp <= 1.0 and 0.0 <= row.p_e <= 1.0
        if row.method == "top-d":
            assert row.p_e == row.p_fn == row.p_fp


def test_individual_testing_is_exact():
    # one subject per test, entry at the first threshold: noiseless BP nails it
    cfg = SweepConfig(
        n=10, d=2, m=10, eta_step=1, q_values=(2,), gammas=((0.0, 0.0),),
        trials=25, iterations=10, methods=("top-d",), seed=3,
    )
    # q=2 with step 1 keeps the multi-level path (levels=1) but a random code
    # may miss subjects; build the identity explicitly through the library
    import sqgt.simulate as sim
    from sqgt.model import CodeParams

    identity = np.eye(10, dtype=np.int64)
    orig = sim._build_code
    sim._build_code = lambda c, q: (identity, CodeParams.equidistant(2, 1, 1, c.d))
    try:
        rows = run_simulation(cfg, threads=1)
    finally:
        sim._build_code = orig
    assert rows[0].p_e == 0.0


def test_error_scaling_with_trials():
    # standard error of the P_e estimate drops like 1/sqrt(trials): compare
    # batch-mean spreads at T and 2T from one long run of per-trial rates
    cfg = SweepConfig(
        n=12, d=2, m=8, eta_step=2, q_values=(5,), gammas=((0.08, 0.08),),
        trials=30, iterations=8, methods=("top-d",), seed=0,
    )
    import dataclasses

    singles = []
    for rep in range(60):
        one = dataclasses.replace(cfg, seed=rep)
        singles.append(run_simulation(one, threads=1)[0].p_e)
    singles = np.array(singles)
    sd_T = singles[:30].std() + singles[30:].std()
    pairs = 0.5 * (singles[::2] + singles[1::2])  # doubled-trial estimates
    sd_2T = pairs[:15].std() + pairs[15:].std()
    ratio = (sd_2T / 2) / (sd_T / 2)
    # 3-sigma band around 1/sqrt(2) for these sample sizes
    assert 0.4 < ratio < 1.1
