"""Frequency-bin model checks: builders, reductions, separability signatures."""

import numpy as np
import pytest

from triphoton import (
    DegenerateInputError,
    FilterSpec,
    InvalidArgumentError,
    ModeGrid,
    PhaseMatchConfig,
    PureState,
    TriphotonTensor,
    build_ghz_discrete,
    build_w_discrete,
    negativity,
    purity,
    reduce_ghz_trace_one_degenerate,
    reduce_w_trace3,
)
from triphoton.qubits import DensityMatrix

CFG = PhaseMatchConfig(-20.0, -20.0)
GAUSS = FilterSpec("gaussian", 0.4)
FLAT = FilterSpec("rectangular", 1e9)
TINY_T = PhaseMatchConfig(-1e-6, -1e-6)  # envelope is 1 to ~1e-12 on the grid

# Regression fixture: negativity of the pair state left after tracing the
# third photon, reference configuration, 8 bins over [-1.2, 1.2] rad/ps.
# Frozen from the dense eigensolver under the documented half-up bin ties.
W_NEGATIVITY_8_BINS = 0.014341726097336851


def test_mode_grid_basics():
    g = ModeGrid(5, -1.0, 1.0)
    np.testing.assert_allclose(g.centers(), [-1.0, -0.5, 0.0, 0.5, 1.0])
    assert g.bin_width == pytest.approx(0.5)
    for bad in ((1, -1.0, 1.0), (4, 1.0, -1.0), (4, 0.0, 0.0)):
        with pytest.raises(InvalidArgumentError):
            ModeGrid(*bad)


def test_nearest_bin_edges():
    g = ModeGrid(3, -1.0, 1.0)  # centers -1, 0, 1, width 1
    idx, on = g.nearest_bin(np.array([-1.5, -1.49, 0.2, 1.5, 1.51, -2.0]))
    # exactly half a bin outside stays on the edge bin
    np.testing.assert_array_equal(on, [True, True, True, True, False, False])
    np.testing.assert_array_equal(idx, [0, 0, 1, 2, -1, -1])


def test_build_w_uniform_amplitudes():
    # tiny walk-off and flat filters leave only the conservation mask
    grid = ModeGrid(3, -1.0, 1.0)
    state = build_w_discrete(TINY_T, (FLAT, FLAT, FLAT), grid)
    mags = np.abs(state.amplitudes)
    live = mags > 0
    # |nu1 + nu3| <= 1.5 keeps 7 of the 9 combinations
    assert live.sum() == 7
    assert not live[0, 0] and not live[2, 2]
    np.testing.assert_allclose(mags[live], mags[live][0], rtol=1e-12)
    assert np.sum(mags**2) == pytest.approx(1.0, abs=1e-12)


def test_build_w_off_grid_zeroed():
    grid = ModeGrid(4, -1.0, 1.0)
    state = build_w_discrete(CFG, (GAUSS, GAUSS, GAUSS), grid)
    off = state.partner_bins < 0
    assert np.all(state.amplitudes[off] == 0.0)
    assert off.any()


def test_build_w_degenerate_grid_rejected():
    # a filter whose passband misses every conservation frequency zeroes the state
    far = FilterSpec("rectangular", 0.01, center_offset=50.0)
    with pytest.raises(DegenerateInputError):
        build_w_discrete(CFG, (GAUSS, far, GAUSS), ModeGrid(4, -1.0, 1.0))


def test_build_ghz_single_center_bin():
    grid = ModeGrid(3, -1.0, 1.0)
    state = build_ghz_discrete(TINY_T, (FLAT, FLAT), grid)
    # -2 nu stays on the grid only for the center bin
    np.testing.assert_allclose(np.abs(state.amplitudes), [0.0, 1.0, 0.0], atol=1e-12)


def test_build_ghz_mirror_symmetry():
    grid = ModeGrid(9, -1.2, 1.2)
    state = build_ghz_discrete(CFG, (GAUSS, GAUSS), grid)
    mags = np.abs(state.amplitudes)
    np.testing.assert_allclose(mags, mags[::-1], atol=1e-14)
    assert np.sum(mags**2) == pytest.approx(1.0, abs=1e-12)


def test_reduce_w_single_slice_pure():
    grid = ModeGrid(2, -1.0, 1.0)
    amps = np.zeros((2, 2), dtype=complex)
    amps[0, 0] = np.sqrt(0.4)
    amps[1, 0] = np.sqrt(0.6)
    partner = np.array([[1, -1], [0, -1]])
    state = TriphotonTensor("w111", amps, partner, grid)
    rho = reduce_w_trace3(state)
    assert purity(rho) == pytest.approx(1.0, abs=1e-12)
    # the slice is itself a two-mode pure state; negativities must match
    chi = np.zeros(4, dtype=complex)
    chi[0 * 2 + 1] = amps[0, 0]
    chi[1 * 2 + 0] = amps[1, 0]
    expected = negativity(PureState(chi, (2, 2)).density(), (0,))
    assert negativity(rho, (0,)) == pytest.approx(expected, abs=1e-12)


def test_reduce_w_conservation_alone_entangles():
    grid = ModeGrid(6, -1.0, 1.0)
    state = build_w_discrete(TINY_T, (FLAT, FLAT, FLAT), grid)
    rho = reduce_w_trace3(state)
    assert negativity(rho, (0,)) > 1e-6


def test_reduce_w_regression_value():
    grid = ModeGrid(8, -1.2, 1.2)
    state = build_w_discrete(CFG, (GAUSS, GAUSS, GAUSS), grid)
    value = negativity(reduce_w_trace3(state), (0,))
    assert value == pytest.approx(W_NEGATIVITY_8_BINS, rel=1e-9)
    assert value > 1e-6


def test_reduce_w_global_phase_invariance():
    grid = ModeGrid(5, -1.0, 1.0)
    state = build_w_discrete(CFG, (GAUSS, GAUSS, GAUSS), grid)
    rotated = TriphotonTensor("w111", state.amplitudes * np.exp(0.7j),
                              state.partner_bins, grid)
    a = reduce_w_trace3(state).matrix
    b = reduce_w_trace3(rotated).matrix
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_reduce_ghz_diagonal_and_separable():
    for n in (4, 8, 12):
        grid = ModeGrid(n, -1.2, 1.2)
        state = build_ghz_discrete(CFG, (GAUSS, GAUSS), grid)
        rho = reduce_ghz_trace_one_degenerate(state)
        off = rho.matrix - np.diag(np.diag(rho.matrix))
        assert np.abs(off).max() < 1e-14
        assert negativity(rho, (0,)) <= 1e-10


def test_reduce_ghz_single_bin_pure_product():
    grid = ModeGrid(3, -1.0, 1.0)
    state = build_ghz_discrete(TINY_T, (FLAT, FLAT), grid)
    rho = reduce_ghz_trace_one_degenerate(state)
    assert purity(rho) == pytest.approx(1.0, abs=1e-12)
    assert negativity(rho, (0,)) <= 1e-12


def test_reduce_type_mismatch():
    grid = ModeGrid(3, -1.0, 1.0)
    w_state = build_w_discrete(CFG, (GAUSS, GAUSS, GAUSS), grid)
    ghz_state = build_ghz_discrete(CFG, (GAUSS, GAUSS), grid)
    with pytest.raises(InvalidArgumentError):
        reduce_w_trace3(ghz_state)
    with pytest.raises(InvalidArgumentError):
        reduce_ghz_trace_one_degenerate(w_state)


def test_purity_values():
    grid = ModeGrid(4, -1.0, 1.0)
    # uniform diagonal mixture over n bins has purity 1/n
    amps = np.full(4, 0.5, dtype=complex)
    partner = np.array([3, 2, 1, 0])
    state = TriphotonTensor("ghz12", amps, partner, grid)
    rho = reduce_ghz_trace_one_degenerate(state)
    assert purity(rho) == pytest.approx(0.25, abs=1e-12)
    d = 6
    maximally_mixed = DensityMatrix(np.eye(d, dtype=complex) / d, (2, 3))
    assert purity(maximally_mixed) == pytest.approx(1.0 / d, abs=1e-12)


def test_separability_signatures_across_grid_sizes():
    # the coarsest grids only resolve the surviving entanglement when the
    # span hugs the filter passband, so two spans are exercised
    for n in range(2, 13):
        grid = ModeGrid(n, -0.4, 0.4)
        w_red = reduce_w_trace3(build_w_discrete(CFG, (GAUSS, GAUSS, GAUSS), grid))
        ghz_red = reduce_ghz_trace_one_degenerate(build_ghz_discrete(CFG, (GAUSS, GAUSS), grid))
        assert negativity(w_red, (0,)) > 1e-6
        assert negativity(ghz_red, (0,)) <= 1e-10
    for n in (4, 8, 12):
        grid = ModeGrid(n, -1.2, 1.2)
        w_red = reduce_w_trace3(build_w_discrete(CFG, (GAUSS, GAUSS, GAUSS), grid))
        ghz_red = reduce_ghz_trace_one_degenerate(build_ghz_discrete(CFG, (GAUSS, GAUSS), grid))
        assert negativity(w_red, (0,)) > 1e-6
        assert negativity(ghz_red, (0,)) <= 1e-10


def test_negativity_convergence_smoke():
    # with bins fine enough to resolve the envelope, refining the grid
    # moves the negativity monotonically with shrinking steps
    vals = []
    for n in (4, 8, 16):
        grid = ModeGrid(n, -0.8, 0.8)
        vals.append(negativity(reduce_w_trace3(
            build_w_discrete(CFG, (GAUSS, GAUSS, GAUSS), grid)), (0,)))
    assert vals[0] < vals[1] < vals[2]
    assert abs(vals[2] - vals[1]) < abs(vals[1] - vals[0])


def test_tensor_validation():
    grid = ModeGrid(2, -1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        TriphotonTensor("w111", np.zeros((3, 3), dtype=complex),
                        np.zeros((3, 3), dtype=int), grid)
    amps = np.zeros((2, 2), dtype=complex)
    amps[0, 0] = 1.0
    bad_partner = np.full((2, 2), 5)
    with pytest.raises(InvalidArgumentError):
        TriphotonTensor("w111", amps, bad_partner, grid)
    off_grid_amp = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    partner = np.array([[-1, 0], [0, 0]])
    with pytest.raises(InvalidArgumentError):
        TriphotonTensor("w111", off_grid_amp, partner, grid)
