"""Steady state scenarios."""
import pytest
from pytest_bdd import scenario

FEATURE = "steady_state.feature"


@pytest.mark.acceptance
@scenario(FEATURE, "Envelope detector under a biased sinusoidal current")
def test_envelope_detector_current_drive():
    pass


@pytest.mark.acceptance
@pytest.mark.slow
@scenario(FEATURE, "Envelope detector under a sinusoidal voltage")
def test_envelope_detector_voltage_drive():
    pass


@pytest.mark.acceptance
@scenario(FEATURE, "Parallel RC filter against its phasor solution")
def test_parallel_rc_phasor():
    pass


@pytest.mark.acceptance
@scenario(FEATURE, "Backward Euler error shrinks with the sample count")
def test_backward_euler_convergence():
    pass
