"""The scheme catalog end to end: every circuit against its closed form."""

import json

import pytest

from dickesim.errors import CapacityError, ParameterError
from dickesim.formulas import (
    p_ancilla_optical,
    p_op,
    p_per_level,
    p_single_multiport,
)
from dickesim.schemes import (
    PER_LEVEL_VARIANTS,
    SCHEME_NAMES,
    SIMULATION_N_CAP,
    SchemeSpec,
    build_scheme,
    run_scheme,
)


def test_catalog_names():
    assert SCHEME_NAMES == (
        "operator_all_one",
        "fock_single_mode",
        "prep_single_multiport",
        "prep_per_level",
        "ancilla",
        "appendix_d4",
    )
    assert PER_LEVEL_VARIANTS == ("merged", "separate")


def test_operator_scheme_reference_point():
    report = run_scheme(SchemeSpec("operator_all_one", 4, (2, 2)))
    assert report.probability == pytest.approx(0.09375, abs=1e-12)
    assert report.fidelity == pytest.approx(1.0, abs=1e-10)
    assert report.parallel_factor == 1
    assert report.formula == pytest.approx(0.09375, abs=1e-12)


@pytest.mark.parametrize("scheme", ["operator_all_one", "fock_single_mode"])
@pytest.mark.parametrize("n,k", [(2, (1, 1)), (3, (2, 1)), (3, (1, 1, 1)), (4, (2, 2))])
def test_generic_schemes_hit_the_bound(scheme, n, k):
    report = run_scheme(SchemeSpec(scheme, n, k))
    assert report.probability == pytest.approx(p_op(n), abs=1e-10)
    assert report.fidelity == pytest.approx(1.0, abs=1e-10)


def test_prep_single_multiport_scaling():
    report = run_scheme(SchemeSpec("prep_single_multiport", 3, (2, 1)))
    assert report.parallel_factor == 3
    assert report.probability * 3 == pytest.approx(
        p_single_multiport(3, (2, 1)), abs=1e-12
    )
    assert report.fidelity == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("variant", PER_LEVEL_VARIANTS)
@pytest.mark.parametrize("n,k", [(3, (2, 1)), (4, (2, 2))])
def test_per_level_variants_agree(variant, n, k):
    report = run_scheme(SchemeSpec("prep_per_level", n, k, variant=variant))
    assert report.parallel_factor == min(k)
    assert report.probability * min(k) == pytest.approx(p_per_level(n, k), abs=1e-12)
    assert report.fidelity == pytest.approx(1.0, abs=1e-10)


def test_separate_variant_needs_its_feedforward_phases():
    spec = SchemeSpec("prep_per_level", 3, (2, 1), variant="separate")
    corrected = run_scheme(spec)
    raw = run_scheme(spec, correct_phases=False)
    assert corrected.fidelity == pytest.approx(1.0, abs=1e-10)
    assert raw.fidelity < 1e-6  # phases wreck the overlap entirely here
    # the probability is phase-blind
    assert raw.probability == pytest.approx(corrected.probability, abs=1e-14)


@pytest.mark.parametrize("herald", [1, 2, 3])
def test_heralded_scheme_accepts_every_herald_port(herald):
    spec = SchemeSpec("ancilla", 3, (2, 1), p=0.5, herald_mode=herald)
    report = run_scheme(spec)
    assert report.parallel_factor == 3
    assert report.probability * 3 == pytest.approx(
        p_ancilla_optical(3, 1, 0.5), abs=1e-12
    )
    assert report.fidelity == pytest.approx(1.0, abs=1e-10)
    if herald != 1:
        raw = run_scheme(spec, correct_phases=False)
        assert raw.fidelity < 1.0 - 1e-6


def test_heralded_scheme_defaults_to_the_optimal_transmissivity():
    report = run_scheme(SchemeSpec("ancilla", 3, (1, 1, 1)))
    assert report.p == pytest.approx(1 / 3)
    assert report.fidelity == pytest.approx(1.0, abs=1e-10)


def test_heralded_scheme_with_a_bunched_ancilla_level():
    report = run_scheme(SchemeSpec("ancilla", 4, (2, 2), p=0.5))
    assert report.probability * 4 == pytest.approx(
        p_ancilla_optical(4, 2, 0.5), abs=1e-12
    )
    assert report.fidelity == pytest.approx(1.0, abs=1e-10)


def test_splitter_tree_layout_fixed_point():
    report = run_scheme(SchemeSpec("appendix_d4", 4, (2, 2)))
    assert report.probability == pytest.approx(0.0234375, abs=1e-12)
    assert report.parallel_factor == 2
    assert report.fidelity == pytest.approx(1.0, abs=1e-10)


def test_built_scheme_shapes_are_consistent():
    built = build_scheme(SchemeSpec("ancilla", 3, (2, 1), p=0.5))
    ((occ, _),) = tuple(built.input_state.items())
    assert built.circuit.l_in == occ.max_spatial + 1
    assert built.register == (0, 1, 2)
    assert built.parallel_factor == 3
    assert built.level_phases is not None and 0 in built.level_phases


def test_spec_validation():
    with pytest.raises(ParameterError):
        SchemeSpec("nonsense", 3, (2, 1))
    with pytest.raises(CapacityError):
        SchemeSpec("operator_all_one", SIMULATION_N_CAP + 1, (SIMULATION_N_CAP + 1,))
    with pytest.raises(ParameterError):
        SchemeSpec("operator_all_one", 3, (2, 2))
    with pytest.raises(ParameterError):
        SchemeSpec("fock_single_mode", 3, (2, 1), p=0.5)
    with pytest.raises(ParameterError):
        SchemeSpec("fock_single_mode", 3, (2, 1), herald_mode=2)
    with pytest.raises(ParameterError):
        SchemeSpec("operator_all_one", 3, (2, 1), variant="separate")
    with pytest.raises(ParameterError):
        SchemeSpec("prep_per_level", 3, (3, 0))
    with pytest.raises(ParameterError):
        SchemeSpec("prep_per_level", 3, (2, 1), variant="mixed")
    with pytest.raises(ParameterError):
        SchemeSpec("ancilla", 3, (3,))
    with pytest.raises(ParameterError):
        SchemeSpec("ancilla", 3, (2, 1), p=1.5)
    with pytest.raises(ParameterError):
        SchemeSpec("ancilla", 3, (2, 1), herald_mode=4)
    with pytest.raises(ParameterError):
        SchemeSpec("appendix_d4", 4, (3, 1))


def test_num_ancilla_property():
    assert SchemeSpec("ancilla", 4, (2, 1, 1)).num_ancilla == 2
    assert SchemeSpec("operator_all_one", 4, (2, 2)).num_ancilla == 0


def test_report_serialization_contract():
    report = run_scheme(SchemeSpec("fock_single_mode", 2, (1, 1)))
    payload = report.to_json_dict()
    assert list(payload) == [
        "scheme",
        "n",
        "k",
        "p",
        "probability",
        "parallel_factor",
        "formula",
        "fidelity",
        "state",
    ]
    assert payload["k"] == [1, 1]
    assert payload["p"] is None
    occupations = [term["occupation"] for term in payload["state"]]
    assert occupations == sorted(occupations)
    assert occupations[0] == [[0, 0, 1], [1, 1, 1]]
    total = sum(term["re"] ** 2 + term["im"] ** 2 for term in payload["state"])
    assert total == pytest.approx(1.0)
    json.dumps(payload)  # must be serializable as-is
