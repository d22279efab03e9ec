import pytest

try:
    import socialfilter as sf
except ImportError:  # running against the build tree
    import _core as sf


def test_worked_example_aggregation():
    # rt = (0.4, 0.648), id = (0.9, 0.8), c = (0.5, 1.0) -> 0.795
    likelihood = sf.aggregate_reports(None, [(1, 0.5, 0.4, 0.9), (2, 1.0, 0.648, 0.8)])
    exact = (0.4 * 0.9 * 0.5 + 0.648 * 0.8 * 1.0) / (0.4 * 0.9 + 0.648 * 0.8)
    assert abs(likelihood - exact) < 1e-9
    assert round(likelihood, 3) == 0.795
    assert sf.decide_block(likelihood, 0.5)
    assert not sf.decide_block(0.5, 0.5)


def test_trust_primitives():
    assert sf.report_similarity(0.5, 1.0) == pytest.approx(0.5)
    assert sf.update_direct_trust(0.8, 0.4, 0.5) == pytest.approx(0.6)
    tg = sf.TrustGraph([1, 2, 3, 4, 5])
    tg.set_direct_trust(3, 5, 0.8)
    tg.set_direct_trust(5, 1, 0.5)
    tg.set_direct_trust(5, 4, 0.9)
    tg.set_direct_trust(4, 2, 0.9)
    assert tg.reporter_trust(3, 1) == pytest.approx(0.4)
    assert tg.reporter_trust(3, 2) == pytest.approx(0.648)


def test_graph_and_identity_scores():
    g = sf.SocialGraph.generate_small_world(64, 6, 0.1, 7)
    assert g.node_count == 64
    spec = sf.SybilRegionSpec(attacker=3, num_sybils=16, attack_edges=2)
    attacked = sf.attach_sybil_region(g, spec, 9)
    assert attacked.node_count == 80
    scores, verifiers = sf.compute_identity_uniqueness(
        attacked, sf.SybilLimitParams(l=16, seed=5)
    )
    assert len(scores) == 80
    assert len(verifiers) == 16
    honest = sum(scores[:64]) / 64
    sybil = sum(scores[64:]) / 16
    assert sybil < honest


def test_ostra_round_trip():
    g = sf.SocialGraph.from_edges(3, [(0, 1), (1, 2)])
    credit = sf.OstraCredit(g, credit_bound=5)
    path = credit.find_social_path(0, 2)
    assert path == [0, 1, 2]
    token = credit.issue_token(path)
    assert token is not None
    credit.classify(token, sf.OstraVerdict.UNWANTED)
    assert credit.balance(0, 1) == -1
    assert credit.balance(1, 0) == 1


def test_simulation_runs_and_is_deterministic():
    config = {
        "graph": {"n": 300, "k": 6, "beta": 0.1},
        "sim_hours": 24,
        "spammer_fraction": 0.01,
        "spam_rate": 100,
        "view_size": 60,
        "pre_trusted_size": 8,
        "instant_classifier_fraction": 0.1,
        "id_r": 16,
        "engine": "both",
        "seed": 11,
    }
    result = sf.run_simulation(config)
    assert result["node_count"] == 300
    engines = {t["engine"] for t in result["timelines"]}
    assert engines == {"socialfilter", "ostra"}
    for timeline in result["timelines"]:
        sent = sum(r[1] for r in timeline["rows"])
        blocked = sum(r[2] for r in timeline["rows"])
        assert blocked <= sent
    sf_timeline = next(t for t in result["timelines"] if t["engine"] == "socialfilter")
    assert sf_timeline["blocked_legit_pct"] == 0.0

    assert sf.simulation_csv(config) == sf.simulation_csv(config)


def test_config_validation_names_the_field():
    config = sf.default_config()
    config.update(graph={"n": 200, "k": 6, "beta": 0.1}, sim_hours=1, id_r=8)
    config["view_size"] = 10**6
    with pytest.raises(ValueError, match="view_size"):
        sf.run_simulation(config)
