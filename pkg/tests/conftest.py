import numpy as np
import pytest

from monotone_pss.elements import Capacitor, LinearResistor, ShockleyDiode
from monotone_pss.network import Element, Parallel, Series

# Reference envelope detector
N_SAMPLES = 500
PERIOD = 1.0


@pytest.fixture
def rng():
    return np.random.default_rng(20210)


@pytest.fixture
def diode():
    return ShockleyDiode(saturation_current=1e-14, ideality=1.0, thermal_voltage=0.02585)


@pytest.fixture
def rc_filter():
    return Parallel([Element(LinearResistor(1.0), name="R1"), Element(Capacitor(1.0), name="C1")])


@pytest.fixture
def envelope_detector(diode, rc_filter):
    return Series([Element(diode, name="D1"), rc_filter], name="detector")
