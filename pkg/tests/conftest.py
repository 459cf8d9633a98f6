import pytest
from hypothesis import settings

from chipfire.enumeration import enumerate_stable
from chipfire.labeled import LabeledConfig

settings.register_profile("ci", derandomize=True)
settings.load_profile("ci")


def single_chip_config(placement: dict[int, int]) -> LabeledConfig:
    """Build a one-chip-per-vertex configuration from {vertex: label}."""
    config = LabeledConfig(
        n_chips=len(placement), cells={v: [lab] for v, lab in sorted(placement.items())}
    )
    config.validate()
    return config


@pytest.fixture(scope="session")
def stable3():
    return enumerate_stable(3)
