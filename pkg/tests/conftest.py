import pytest

from pshcert.config import CertifyConfig
from pshcert.constructions import (
    build_plateau,
    build_tapered_form,
    build_thm1,
    build_thm2,
)


@pytest.fixture(scope="session")
def small_cfg():
    return CertifyConfig(samples=300, submean_probes=60, plateau_checks=10)


@pytest.fixture(scope="session")
def plateau(small_cfg):
    return build_plateau(small_cfg.j_max)


@pytest.fixture(scope="session")
def tapered(small_cfg):
    return build_tapered_form(small_cfg.taper_radius, small_cfg.n)


@pytest.fixture(scope="session")
def thm1(small_cfg):
    return build_thm1(small_cfg)


@pytest.fixture(scope="session")
def thm2(small_cfg, plateau, tapered):
    return build_thm2(small_cfg, plateau, tapered)
