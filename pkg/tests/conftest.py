from __future__ import annotations

import numpy as np
import pytest
from hydra import compose, initialize
from omegaconf import DictConfig

from yaosweep.cones.family import ConeFamily, build_family, octant_family_2d
from yaosweep.constants import Command
from yaosweep.run_config import RunConfig


@pytest.fixture()
def rng() -> np.random.Generator:
    """A seeded numpy generator, fresh for every test."""
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def unit_test_config() -> DictConfig:
    """A pytest fixture to read in the reduced Hydra config used by the test-suite."""
    with initialize(version_base=None, config_path="../yaosweep/configs"):
        cfg = compose(config_name="unit_test")
    return cfg


@pytest.fixture(scope="session")
def verify_run_config(unit_test_config: DictConfig) -> RunConfig:
    """RunConfig for the verification harness composed from the unit test config."""
    return RunConfig.from_config(Command.verify, unit_test_config)


@pytest.fixture(scope="session")
def family_1d() -> ConeFamily:
    """The two rays of the line."""
    return build_family(1)


@pytest.fixture(scope="session")
def yao_family_2d() -> ConeFamily:
    """The 64-cone family for the plane."""
    return build_family(2)


@pytest.fixture(scope="session")
def octant_family() -> ConeFamily:
    """The classical 8-cone family for the plane."""
    return octant_family_2d()


@pytest.fixture(scope="session")
def yao_family_3d() -> ConeFamily:
    """The family for d=3; only requested by tests marked slow."""
    return build_family(3)
