"""Wire formats: round-trips and strict schema rejection."""

import json

import pytest

from vasep.commutative import (
    COVER,
    EXACT,
    LabeledVas,
    commutative_regular_separability,
    merged_alphabet,
    parikh_section,
)
from vasep.errors import SchemaError
from vasep.jsonio import (
    dumps,
    emit_certificate,
    emit_commutative_certificate,
    emit_labeled,
    emit_linear,
    emit_modular,
    emit_problem,
    emit_section,
    emit_sectioned,
    emit_unary,
    emit_vas,
    emit_vass,
    emit_witness,
    parse_certificate,
    parse_commutative_certificate,
    parse_labeled,
    parse_linear,
    parse_modular,
    parse_problem,
    parse_section,
    parse_sectioned,
    parse_unary,
    parse_vas,
    parse_vass,
    read_json,
)
from vasep.linsets import LinearSet, ModularSet, UnarySet, unary_class_of
from vasep.separability import Budgets, decide_separability
from vasep.vas import Vas, normalize_pair
from conftest import (
    evens,
    example1,
    example1_section,
    example2,
    fixture_path,
    odds,
)

FAST = Budgets(states=20_000, max_n=6, max_run_len=5, max_witness_pairs=120,
               pos_quantum=4_000, max_runs=120, run_nodes=20_000)


def reload(emitted):
    return json.loads(dumps(emitted))


def test_vas_roundtrip():
    vas = example1()
    assert parse_vas(reload(emit_vas(vas))) == vas


def test_vass_roundtrip():
    vass = example2()
    back = parse_vass(reload(emit_vass(vass)))
    assert back.states == vass.states
    assert back.source == vass.source
    assert back.transitions == vass.transitions


def test_section_and_sectioned_roundtrip():
    svas = example1_section()
    sec = parse_section(reload(emit_section(svas.section)), 3)
    assert sec == svas.section
    back = parse_sectioned(reload(emit_sectioned(svas)))
    assert back.vas == svas.vas and back.section == svas.section


def test_labeled_roundtrip():
    lv = LabeledVas(Vas(2, (1, 0), [(1, 0), (-1, 1)]), ["a", None],
                    COVER, (0, 2))
    back = parse_labeled(reload(emit_labeled(lv)))
    assert back == lv


def test_set_family_roundtrips():
    ls = LinearSet((1, 2), [(0, 3), (4, 0)])
    assert parse_linear(reload(emit_linear(ls))) == ls
    ms = ModularSet(3, 2, {(0, 1), (2, 2)})
    assert parse_modular(reload(emit_modular(ms))) == ms
    us = UnarySet(2, 1, {unary_class_of((0,), 2), unary_class_of((5,), 2)})
    assert parse_unary(reload(emit_unary(us))) == us


def test_problem_roundtrip_sections():
    data = reload(emit_problem("sections", evens(), odds(), mode="unary"))
    prob = parse_problem(data)
    assert prob["kind"] == "sections" and prob["mode"] == "unary"
    assert prob["a"].vas == evens().vas
    # mode defaults to modular when omitted
    del data["mode"]
    assert parse_problem(data)["mode"] == "modular"


def test_problem_roundtrip_languages():
    lv = LabeledVas(Vas(1, (0,), [(1,)]), ["a"], EXACT, (1,))
    lw = LabeledVas(Vas(1, (0,), [(1,)]), ["a"], EXACT, (0,))
    prob = parse_problem(reload(emit_problem("languages", lv, lw)))
    assert prob["kind"] == "languages" and prob["mode"] == "unary"
    assert prob["a"] == lv and prob["b"] == lw
    bad = reload(emit_problem("languages", lv, lw))
    bad["mode"] = "modular"
    with pytest.raises(SchemaError):
        parse_problem(bad)


def test_certificate_roundtrips():
    for a, b, mode in ((evens(), odds(), "modular"),
                       (evens(), evens(), "modular"),
                       (evens(), evens(), "unary")):
        cert = decide_separability(a, b, mode, FAST)
        ea, eb, _ = normalize_pair(a, b)
        back = parse_certificate(reload(emit_certificate(cert)), ea, eb)
        assert back == cert


def test_commutative_certificate_roundtrip():
    odd = LabeledVas(Vas(1, (0,), [(1,), (-1,)]), ["a", "a"], EXACT, (1,))
    even = LabeledVas(Vas(1, (0,), [(1,), (-1,)]), ["a", "a"], EXACT, (0,))
    ccert = commutative_regular_separability(odd, even, FAST)
    sigma = merged_alphabet(odd, even)
    ea, eb, _ = normalize_pair(parikh_section(odd, sigma),
                               parikh_section(even, sigma))
    back = parse_commutative_certificate(
        reload(emit_commutative_certificate(ccert)), ea, eb)
    assert back == ccert


def test_witness_runs_refire():
    cert = decide_separability(evens(), evens(), "modular", FAST)
    ea, eb, _ = normalize_pair(evens(), evens())
    data = reload(emit_certificate(cert))
    # breaking a run label makes the witness unfireable at parse time
    labels = data["witness_u"]["base_run"]
    data["witness_u"]["base_run"] = [99] + labels
    from vasep.errors import InvalidRun
    with pytest.raises(InvalidRun):
        parse_certificate(data, ea, eb)


def test_unknown_fields_rejected():
    data = reload(emit_vas(example1()))
    data["extra"] = 1
    with pytest.raises(SchemaError) as exc:
        parse_vas(data)
    assert "extra" in str(exc.value)


def test_bool_is_not_int():
    data = reload(emit_vas(example1()))
    data["source"][0] = True
    with pytest.raises(SchemaError):
        parse_vas(data)


def test_missing_field():
    data = reload(emit_vas(example1()))
    del data["transitions"]
    with pytest.raises(SchemaError) as exc:
        parse_vas(data)
    assert "transitions" in str(exc.value)


def test_ragged_dimensions():
    data = reload(emit_vas(example1()))
    data["transitions"][0] = [1, 2]
    with pytest.raises(SchemaError):
        parse_vas(data)


def test_schema_error_paths():
    data = reload(emit_vas(example1()))
    data["transitions"][1] = [0, "x", 0]
    with pytest.raises(SchemaError) as exc:
        parse_vas(data, path="$")
    assert "transitions[1]" in str(exc.value)


def test_bad_descriptor_kind():
    data = reload(emit_unary(UnarySet(2, 1, {unary_class_of((0,), 2)})))
    data["classes"][0][0] = {"medium": 0}
    with pytest.raises(SchemaError):
        parse_unary(data)


def test_modular_requires_reduced_residues():
    data = reload(emit_modular(ModularSet(3, 1, {(1,)})))
    data["residues"][0] = [7]
    with pytest.raises(SchemaError):
        parse_modular(data)


def test_read_json(tmp_path):
    good = tmp_path / "ok.json"
    good.write_text(dumps({"x": 1}))
    assert read_json(str(good)) == {"x": 1}
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(SchemaError):
        read_json(str(bad))


def test_fixture_files_parse():
    for name, kind in (("evens_vs_odds.json", "sections"),
                       ("evens_vs_evens.json", "sections"),
                       ("zero_vs_positives.json", "sections"),
                       ("hardness_reachable.json", "sections"),
                       ("hardness_unreachable.json", "sections"),
                       ("words_odd_vs_even.json", "languages"),
                       ("eps_vs_aplus.json", "languages")):
        prob = parse_problem(read_json(fixture_path(name)))
        assert prob["kind"] == kind
    assert parse_vas(read_json(fixture_path("example1.json"))) == example1()
    vass = parse_vass(read_json(fixture_path("example2_vass.json")))
    assert vass.states == example2().states
