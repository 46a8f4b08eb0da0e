"""Interaction strengths and probability estimates."""

from fractions import Fraction

import pytest

import oracles
from csmx.interactions import (
    ForwardKey,
    InteractionEngine,
    StateKey,
    TransitionKey,
    estimate_probabilities,
    forward_strength,
    state_strength,
    transition_strength,
)
from csmx.model import Marker


def test_state_key_rejects_markers_and_identical_artifacts():
    with pytest.raises(ValueError):
        StateKey(0, 0, "a", "b")
    with pytest.raises(ValueError):
        StateKey(0, 1, Marker.NOT_STARTED, "b")


def test_transition_key_requires_movement_on_condition():
    with pytest.raises(ValueError):
        TransitionKey(0, 1, "a", "a", "x", "y")
    key = TransitionKey(0, 1, "a", "b", "x", "x")
    assert key.state_consequence
    assert not key.boundary
    assert TransitionKey(0, 1, "a", "b", Marker.NOT_STARTED, "x").boundary


def test_forward_key_requires_consequence_movement():
    with pytest.raises(ValueError):
        ForwardKey(0, 1, "a", "x", "x")
    assert not ForwardKey(0, 1, "a", "x", "y").boundary
    assert ForwardKey(0, 1, "a", "x", Marker.FINISHED).boundary


def test_single_case_state_strengths(single_case_log):
    # lab spends 6 days in C: 4 with the patient in W, 2 in Y
    assert state_strength(StateKey(1, 0, "C", "W"), single_case_log) == Fraction(4, 6)
    assert state_strength(StateKey(1, 0, "C", "Y"), single_case_log) == Fraction(2, 6)
    assert state_strength(StateKey(1, 0, "C", "X"), single_case_log) == 0


def test_single_case_transition_strength(single_case_log):
    key = TransitionKey(1, 0, "B", "C", "W", "W")
    assert transition_strength(key, single_case_log) == Fraction(1, 2)


def test_single_case_forward_strengths(single_case_log):
    # from (W, C) the lab always moved to D
    assert forward_strength(ForwardKey(0, 1, "W", "C", "D"), single_case_log) == 1
    # from (Y, C) the lab never moved while the patient stayed Y
    assert forward_strength(ForwardKey(0, 1, "Y", "C", "D"), single_case_log) is None


def test_fixture_transition_strength(fixture_log):
    key = TransitionKey(1, 0, "C", "D", "W", "W")
    assert transition_strength(key, fixture_log) == Fraction(100, 190)


def test_fixture_forward_strength_excludes_partner_moves(fixture_log):
    # (Y,C) exits: 70 to (Y,D), 10 to (Y,E), 20 to (Z,D); the last one moves
    # the patient too, so it does not count as "while being in Y"
    key = ForwardKey(0, 1, "Y", "C", "E")
    assert forward_strength(key, fixture_log) == Fraction(10, 80)
    engine = InteractionEngine(fixture_log)
    assert engine.forward_baseline(key) == Fraction(20, 210)


def test_fixture_state_strength(fixture_log):
    assert state_strength(StateKey(1, 0, "C", "W"), fixture_log) == Fraction(110, 210)
    assert state_strength(StateKey(1, 0, "C", "Y"), fixture_log) == Fraction(100, 210)


def test_single_case_probability_estimates(single_case_log):
    est = estimate_probabilities(StateKey(1, 0, "C", "W"), single_case_log)
    assert est.p_x == Fraction(6, 26)
    assert est.p_y == Fraction(11, 26)
    assert est.p_xy == Fraction(4, 26)


def test_estimates_satisfy_confidence_identity(fixture_log):
    engine = InteractionEngine(fixture_log)
    keys = [
        StateKey(1, 0, "C", "W"),
        TransitionKey(1, 0, "C", "D", "W", "W"),
        ForwardKey(0, 1, "Y", "C", "E"),
    ]
    for key in keys:
        est = engine.estimate(key)
        conf = engine.strength(key)
        assert est.p_xy == conf * est.p_x


def test_undefined_strength_gives_zero_joint_probability(single_case_log):
    key = ForwardKey(0, 1, "Y", "C", "D")
    est = estimate_probabilities(key, single_case_log)
    assert est.p_xy == 0
    assert est.p_x == 0


def test_state_strengths_sum_to_one_under_full_coverage(fixture_log):
    total = sum(
        state_strength(StateKey(1, 0, "C", s), fixture_log)
        for s in ("W", "X", "Y", "Z")
    )
    assert total == 1


def test_transition_strengths_sum_to_one_over_pair_moves(fixture_log):
    # every lab C->D move pairs with exactly one patient move or stay
    keys = [
        TransitionKey(1, 0, "C", "D", "W", "W"),
        TransitionKey(1, 0, "C", "D", "Y", "Y"),
        TransitionKey(1, 0, "C", "D", "Y", "Z"),
    ]
    total = sum(transition_strength(k, fixture_log) for k in keys)
    assert total == 1


def test_boundary_transition_keys_are_scored(fixture_log):
    # the very first composite move pairs lab ⊥->A with patient ⊥->W
    key = TransitionKey(
        1, 0, Marker.NOT_STARTED, "A", Marker.NOT_STARTED, Marker.NOT_STARTED
    )
    with pytest.raises(ValueError):
        # consequence may hold a marker, but the condition slots must move
        TransitionKey(1, 0, "A", "A", "W", "W")
    assert key.boundary
    engine = InteractionEngine(fixture_log)
    assert engine.transition_strength(
        TransitionKey(1, 0, Marker.NOT_STARTED, "A", "W", "W")
    ) == 0


def test_engine_matches_module_level_helpers(fixture_log):
    engine = InteractionEngine(fixture_log)
    skey = StateKey(0, 1, "W", "C")
    tkey = TransitionKey(0, 1, "W", "X", "D", "D")
    fkey = ForwardKey(1, 0, "D", "Y", "Z")
    assert engine.state_strength(skey) == state_strength(skey, fixture_log)
    assert engine.transition_strength(tkey) == transition_strength(tkey, fixture_log)
    assert engine.forward_strength(fkey) == forward_strength(fkey, fixture_log)
    assert engine.estimate(skey) == estimate_probabilities(skey, fixture_log)


def test_engine_agrees_with_reference_oracles():
    for seed in (11, 12, 13):
        log = oracles.random_log(seed)
        engine = InteractionEngine(log)
        for i in range(log.arity):
            for j in range(log.arity):
                if i == j:
                    continue
                for si, sj in sorted(oracles.observed_pair_states(log, i, j)):
                    key = StateKey(i, j, si, sj)
                    assert engine.state_strength(key) == oracles.oracle_state_strength(
                        log, i, j, si, sj
                    )
                    est = engine.estimate(key)
                    px, py, pxy = oracles.oracle_state_estimates(log, i, j, si, sj)
                    assert (est.p_x, est.p_y, est.p_xy) == (px, py, pxy)


def test_partial_coverage_log_scores_and_projects(tmp_path):
    # the shipment artifact starts three (resp. two) days into its case, so
    # regular composite states carry a NOT_STARTED marker in that slot
    path = tmp_path / "orders.csv"
    path.write_text(
        "case_id,artifact,state,timestamp\n"
        "c1,order,created,2020-01-01\n"
        "c1,shipment,sent,2020-01-04\n"
        "c1,order,closed,2020-01-05\n"
        "c2,order,created,2020-02-01\n"
        "c2,shipment,sent,2020-02-03\n"
        "c2,order,closed,2020-02-04\n"
    )
    from csmx.ingest import discover_model, ingest_csv
    from csmx.model import CompositeState, artifact_model, initial_state

    log = ingest_csv(path)
    model = discover_model(log)
    assert CompositeState(("created", Marker.NOT_STARTED)) in model.states

    # the marker-only projection merges into the initial bracket
    single = artifact_model(model, 1)
    assert single.states == {CompositeState(("sent",))}
    assert (initial_state(1), CompositeState(("sent",))) in single.transitions

    engine = InteractionEngine(log)
    # order holds created for 4+3 days, 1+1 of them with the shipment sent
    assert engine.state_strength(StateKey(0, 1, "created", "sent")) == Fraction(2, 7)
    assert engine.state_strength(StateKey(1, 0, "sent", "created")) == 1
    # both closing moves happen while the shipment sits in sent
    key = TransitionKey(0, 1, "created", "closed", "sent", "sent")
    assert engine.transition_strength(key) == 1
