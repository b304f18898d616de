import json

import pytest

from tempo_ef.corpus import (
    FAMILIES,
    FamilyError,
    FamilyParams,
    family,
    family_names,
    game_winner,
    run_claim,
)
from tempo_ef.games import Player
from tempo_ef.words import ConstantSet, as_finite

CLAIMS = [
    ("prop4.2-xfff", {"r": 2, "s": 4}),
    ("prop4.2-until", {"r": 3, "s": 9}),
    ("prop4.8-until", {"r": 2}),
    ("prop5.8-until-zero", {"r": 2}),
    ("prop5.10", {"r": 2}),
    ("lemma4.5", {}),
    ("lemma5.7", {}),
]


def test_family_registry():
    assert family_names() == list(FAMILIES)
    assert len(FAMILIES) == 8


@pytest.mark.parametrize("name,kw", CLAIMS)
@pytest.mark.parametrize("k", [1, 2])
def test_claims_hold(name, kw, k):
    report = run_claim(name, FamilyParams(k=k, **kw))
    assert report.passed, report.render()


@pytest.mark.parametrize("suffix", ["arith", "const", "random"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_dropped_first_point_suffixes(suffix, k):
    params = FamilyParams(r=2, k=k, extra=(("suffix", suffix), ("seed", 3)))
    fam = family("lemma4.3", params)
    # the second word is the first one read from position 1
    assert [fam.w1.point_at(j) for j in range(10)] == [fam.w0.point_at(j + 1) for j in range(10)]
    assert run_claim("lemma4.3", params).passed


def test_hierarchy_spoiler_side():
    fam = family("prop4.8-until", FamilyParams(r=2, k=2))
    assert game_winner(fam, 2) is Player.DUPLICATOR
    assert game_winner(fam, 3) is Player.SPOILER


@pytest.mark.parametrize(
    "name,params",
    [
        ("prop4.2-xfff", FamilyParams(r=2, s=3)),
        ("prop4.2-until", FamilyParams(r=2, s=9)),
        ("prop5.10", FamilyParams(r=2, s=1, k=2)),
        ("prop4.2-xfff", FamilyParams(r=2, s=4, constants=ConstantSet([5]))),
        ("lemma4.3", FamilyParams(r=2, extra=(("suffix", "bogus"),))),
    ],
)
def test_side_conditions_rejected(name, params):
    with pytest.raises(FamilyError):
        family(name, params)


def test_unknown_family():
    with pytest.raises(FamilyError):
        family("prop9.9")


def test_xfff_generator_data():
    fam = family("prop4.2-xfff", FamilyParams(r=2, s=4, k=2))
    assert as_finite(fam.w0, 7).data == [4, 0, 2, 4, 6, 8, 10]
    assert as_finite(fam.w1, 6).data == [4, 2, 4, 6, 8, 10]


def test_report_serialises():
    report = run_claim("lemma4.5", FamilyParams(k=1))
    data = json.loads(json.dumps(report.to_json()))
    assert data["passed"] and data["family"] == "lemma4.5"
    assert "result: pass" in report.render()
