import pytest

from branchcount import scenarios
from branchcount.scenarios import RunConfig

FIGURES = ["fig2a", "fig2b", "fig3", "fig4", "over_unity", "fig1_straddle",
           "n3_gibbs", "eq10_exact", "graham_vs_born"]


def test_registry_lists_everything():
    names = scenarios.names()
    assert set(FIGURES) <= set(names)
    assert {"campaign_gibbs", "campaign_hilbert"} <= set(names)


@pytest.mark.parametrize("name", FIGURES)
def test_figure_scenarios_pass(name, schema_validator):
    rep = scenarios.run(name)
    assert rep.passed, [c for c in rep.checks if not c.ok]
    schema_validator(rep.to_dict(), "scenario_report")


@pytest.mark.parametrize("name", ["fig2b", "fig4", "over_unity", "n3_gibbs"])
def test_scenarios_are_deterministic(name):
    a = scenarios.run(name).to_dict()
    b = scenarios.run(name).to_dict()
    a.pop("elapsed_s"), b.pop("elapsed_s")
    assert a == b


def test_unknown_scenario():
    with pytest.raises(KeyError):
        scenarios.run("no_such_figure")


def test_small_campaigns_pass_and_replay():
    cfg = RunConfig(trials=12, seed=5)
    for name in ("campaign_gibbs", "campaign_hilbert", "campaign_exact",
                 "campaign_consistency", "campaign_additivity"):
        rep = scenarios.run(name, cfg)
        assert rep.passed, name
        assert len(rep.rows) == 12
    row = scenarios.gibbs_trial(5, 7, cfg)
    assert row == scenarios.gibbs_trial(5, 7, cfg)
    assert row == scenarios.run("campaign_gibbs", cfg).rows[7]


def test_over_unity_report_carries_flag():
    d = scenarios.run("over_unity").to_dict()
    flagged = [c for c in d["checks"] if isinstance(c["actual"], dict) and c["actual"].get("out_of_range")]
    assert flagged and flagged[0]["actual"]["hi"] == [2, 1]


@pytest.mark.parametrize("kwargs", [dict(eps_amp=-1.0), dict(n_max=0), dict(tol_contain=-1e-9), dict(format="xml")])
def test_run_config_validation(kwargs):
    with pytest.raises(ValueError):
        RunConfig(**kwargs)
