import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qfound.decoherence import decay_curve, photon_modes, reduced_after_scattering, spin_block
from qfound.ghz import AllOrNothingState
from qfound.linalg import DimensionError

overlap = st.tuples(st.floats(0, 1), st.floats(0, 2 * math.pi)).map(lambda t: t[0] * complex(math.cos(t[1]), math.sin(t[1])))


@given(overlap)
def test_photon_modes_overlap(g):
    kp, km = photon_modes(g)
    assert np.vdot(km, kp) == pytest.approx(g, abs=1e-12)
    assert np.linalg.norm(km) == pytest.approx(1.0)


@given(st.lists(overlap, min_size=0, max_size=6), st.floats(0, 2 * math.pi))
def test_closed_form_matches_partial_trace(gs, phi):
    st_ = AllOrNothingState.with_phase(2, phi)
    closed = reduced_after_scattering(st_.alpha, st_.beta, gs).matrix
    explicit = spin_block(st_, [photon_modes(g) for g in gs]).matrix
    assert np.abs(closed - explicit).max() < 1e-12


def test_no_photons_keeps_full_coherence():
    rho = reduced_after_scattering(0.6, 0.8, []).matrix
    assert rho[0, 1] == pytest.approx(0.48)


def test_decay_curve():
    curve = decay_curve(0.99, 100)
    assert curve[0, 1] == pytest.approx(0.5)
    assert curve[-1, 1] == pytest.approx(0.5 * 0.99**100, rel=1e-12)
    assert np.all(np.diff(curve[:, 1]) < 0)


def test_bad_inputs():
    with pytest.raises(ValueError):
        photon_modes(1.5)
    with pytest.raises(ValueError):
        reduced_after_scattering(1.0, 1.0, [0.5])
    with pytest.raises(DimensionError):
        spin_block(AllOrNothingState.with_phase(6, 0.0), [photon_modes(0.5)] * 7)
