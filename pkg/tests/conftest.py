import pytest

from cvqss import DealerConfig, EprSource, NoiseBasis, deal, field_from_mode

SECRET_MEANS = (4.0, 2.0)


@pytest.fixture
def basis():
    return NoiseBasis()


@pytest.fixture
def secret(basis):
    return field_from_mode(basis, basis.vacuum(), *SECRET_MEANS)


def dealt(r, v_m=0.0, source=EprSource.TYPE1, means=SECRET_MEANS):
    """Fresh basis, coherent secret, and dealt shares in one call."""
    b = NoiseBasis()
    psi = field_from_mode(b, b.vacuum(), *means)
    return psi, deal(psi, DealerConfig(r, v_m, source))
