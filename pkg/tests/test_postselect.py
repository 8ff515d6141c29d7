"""Detection patterns, qudit extraction, and symmetric target states."""

import cmath
import math

import numpy as np
import pytest

from dickesim.errors import (
    CapacityError,
    DegenerateStateError,
    DimensionMismatch,
    EncodingError,
    EntangledAncillaError,
    ParameterError,
)
from dickesim.evolve import apply_transfer
from dickesim.fock import FockState, Occupation, basis_state
from dickesim.interferometer import beam_splitter
from dickesim.postselect import (
    CountConstraint,
    DickeSpec,
    PostselectionPattern,
    QuditState,
    apply_mode_phases,
    dicke,
    embed_qudits,
    extract_qudits,
    fidelity,
    phase_correction,
    project,
)


def test_pattern_rejects_overlapping_or_invalid_constraints():
    with pytest.raises(ParameterError):
        PostselectionPattern([({0, 1}, 1), ({1, 2}, 1)])
    with pytest.raises(ParameterError):
        PostselectionPattern([((), 1)])
    with pytest.raises(ParameterError):
        PostselectionPattern([({0}, -1)])


def test_strict_accounting_rejects_photons_in_uncovered_modes():
    pattern = PostselectionPattern([({0}, 1)])
    assert pattern.accepts(Occupation({(0, 0): 1}))
    assert not pattern.accepts(Occupation({(0, 0): 1, (1, 0): 1}))
    assert not pattern.accepts(Occupation({(0, 0): 2}))


def test_level_filtered_constraint():
    pattern = PostselectionPattern([CountConstraint(frozenset({0}), 2, level=0)])
    assert pattern.accepts(Occupation({(0, 0): 2}))
    assert not pattern.accepts(Occupation({(0, 0): 1, (0, 1): 1}))


def test_one_photon_per_mode_shorthand():
    pattern = PostselectionPattern.one_photon_per_mode([0, 1])
    assert pattern.total == 2
    assert pattern.accepts(Occupation.from_photons([(0, 0), (1, 1)]))
    assert not pattern.accepts(Occupation({(0, 0): 2}))


def test_projection_probabilities_partition_unity():
    # the three disjoint outcomes of two photons on a balanced splitter
    two = basis_state(Occupation.from_photons([(0, 0), (1, 0)]), 2, 1)
    out = apply_transfer(beam_splitter(0.5), two)
    patterns = [
        PostselectionPattern.one_photon_per_mode([0, 1]),
        PostselectionPattern([({0}, 2)]),
        PostselectionPattern([({1}, 2)]),
    ]
    probs = [project(out, pattern)[1] for pattern in patterns]
    assert probs[0] == pytest.approx(0.0, abs=1e-12)
    assert sum(probs) == pytest.approx(1.0)
    conditioned, prob = project(out, patterns[1])
    assert prob == pytest.approx(0.5)
    assert conditioned.norm_sq() == pytest.approx(1.0)


def test_projecting_to_nothing_yields_a_null_state():
    one = basis_state({(0, 0): 1}, 2, 1)
    conditioned, prob = project(one, PostselectionPattern([({1}, 1)]))
    assert prob == 0.0
    assert len(conditioned) == 0


def test_dicke_spec_validation_and_counts():
    with pytest.raises(ParameterError):
        DickeSpec(3, (2, 2))
    with pytest.raises(ParameterError):
        DickeSpec(0, ())
    assert DickeSpec(4, (2, 2)).num_terms == 6
    assert DickeSpec(3, (1, 1, 1)).levels == 3


def test_dicke_three_qutrits_fully_mixed():
    state = dicke(DickeSpec(3, (1, 1, 1)))
    words = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    for word in words:
        assert state.amplitude(word) == pytest.approx(1 / math.sqrt(6))
    assert state.amplitude((0, 0, 2)) == 0
    assert state.norm_sq() == pytest.approx(1.0)


def test_dicke_two_qubits():
    state = dicke(DickeSpec(2, (1, 1)))
    assert state.amplitude((0, 1)) == pytest.approx(1 / math.sqrt(2))
    assert state.amplitude((1, 0)) == pytest.approx(1 / math.sqrt(2))
    assert state.amplitude((0, 0)) == 0


def test_dicke_permutation_symmetry():
    amps = dicke(DickeSpec(4, (2, 2))).amplitudes.reshape((2, 2, 2, 2))
    assert np.allclose(amps, np.swapaxes(amps, 0, 1))
    assert np.allclose(amps, np.swapaxes(amps, 1, 3))


def test_qudit_indexing_is_big_endian():
    state = dicke(DickeSpec(2, (1, 1)))
    assert state.index((0, 1)) == 1
    assert state.index((1, 0)) == 2
    with pytest.raises(DimensionMismatch):
        state.index((0, 1, 0))
    with pytest.raises(DimensionMismatch):
        state.index((0, 2))


def test_dense_dimension_cap():
    with pytest.raises(CapacityError):
        QuditState(np.zeros(2), 21, 2)
    with pytest.raises(CapacityError):
        dicke(DickeSpec(21, (11, 10)))


def test_extract_reads_words_and_fixes_the_global_phase():
    terms = {
        Occupation.from_photons([(0, 0), (1, 1), (2, 0)]): 1 / math.sqrt(2),
        Occupation.from_photons([(0, 1), (1, 0), (2, 0)]): 1j / math.sqrt(2),
    }
    state = FockState(3, 2, terms)
    qudits = extract_qudits(state, [0, 1])
    assert qudits.amplitude((0, 1)) == pytest.approx(1 / math.sqrt(2))
    assert qudits.amplitude((1, 0)) == pytest.approx(1j / math.sqrt(2))
    # a global phase on the input must not reach the extracted register
    rotated = extract_qudits(state * cmath.exp(0.7j), [0, 1])
    assert np.allclose(rotated.amplitudes, qudits.amplitudes)


def test_extract_rejects_bad_encodings():
    with pytest.raises(EncodingError):
        extract_qudits(basis_state({(0, 0): 2}, 2, 1), [0])
    with pytest.raises(EncodingError):
        extract_qudits(basis_state({(0, 0): 1}, 2, 1), [0, 1])
    with pytest.raises(ParameterError):
        extract_qudits(basis_state({(0, 0): 1}, 2, 1), [0, 0])
    with pytest.raises(DegenerateStateError):
        extract_qudits(FockState.null(2, 1), [0])


def test_extract_rejects_register_entangled_with_the_rest():
    entangled = FockState(
        3,
        2,
        {
            Occupation.from_photons([(0, 0), (1, 1), (2, 0)]): 0.8,
            Occupation.from_photons([(0, 1), (1, 0), (2, 1)]): 0.6,
        },
    )
    with pytest.raises(EntangledAncillaError):
        extract_qudits(entangled, [0, 1])


def test_embed_extract_round_trip():
    original = dicke(DickeSpec(3, (2, 1)))
    fock = embed_qudits(original, [0, 1, 2], modes=4, rest=Occupation({(3, 0): 2}))
    assert fock.photon_number == 5
    back = extract_qudits(fock, [0, 1, 2])
    assert np.allclose(back.amplitudes, original.amplitudes)


def test_fidelity_bounds_and_shape_checks():
    a = dicke(DickeSpec(2, (1, 1)))
    assert fidelity(a, a) == pytest.approx(1.0)
    b = QuditState(np.array([1, 0, 0, 0], dtype=complex), 2, 2)
    assert fidelity(a, b) == pytest.approx(0.0)
    with pytest.raises(DimensionMismatch):
        fidelity(a, dicke(DickeSpec(3, (2, 1))))


def test_phase_correction_goldens():
    assert phase_correction(2, 1) == {0: 1, 1: 1}
    flip = phase_correction(2, 2)
    assert flip[0] == pytest.approx(1.0)
    assert flip[1] == pytest.approx(-1.0)
    quarter = phase_correction(4, 2)
    assert quarter[1] == pytest.approx(cmath.exp(-1j * math.pi / 2))
    assert quarter[3] == pytest.approx(cmath.exp(-3j * math.pi / 2))
    with pytest.raises(ParameterError):
        phase_correction(3, 0)
    with pytest.raises(ParameterError):
        phase_correction(3, 4)


def test_apply_mode_phases_touches_one_level_only():
    state = FockState(
        2,
        2,
        {
            Occupation.from_photons([(0, 0), (1, 1)]): 0.6,
            Occupation.from_photons([(0, 1), (1, 0)]): 0.8,
        },
    )
    flipped = apply_mode_phases(state, {0: -1.0}, level=0)
    assert flipped.amplitude(
        Occupation.from_photons([(0, 0), (1, 1)])
    ) == pytest.approx(-0.6)
    assert flipped.amplitude(
        Occupation.from_photons([(0, 1), (1, 0)])
    ) == pytest.approx(0.8)
    # counts enter as powers of the phase
    bunched = basis_state({(0, 0): 2}, 1, 1)
    assert apply_mode_phases(bunched, {0: 1j}).amplitude({(0, 0): 2}) == pytest.approx(
        -1.0
    )
