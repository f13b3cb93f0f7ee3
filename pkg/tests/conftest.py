from __future__ import annotations

import random
from fractions import Fraction

import pytest

from floersurgery import FiniteUPresentation, load_ambient_file, load_model
from floersurgery.cli import resolve_model_path


@pytest.fixture(scope="session")
def unknot():
    return load_model(resolve_model_path("unknot_s3"))


@pytest.fixture(scope="session")
def trefoil():
    return load_model(resolve_model_path("trefoil_rh_s3"))


@pytest.fixture(scope="session")
def figure8():
    return load_model(resolve_model_path("figure8_s3"))


@pytest.fixture(scope="session")
def sigma237():
    return load_ambient_file(resolve_model_path("sigma237_ambient"))


def sigma237_synthetic_doc() -> dict:
    """Genus-1 model over the sigma237 ambient with V_0 = 0 and the hook
    reduced part a copy of the ambient one, both maps the identity."""
    return {
        "name": "synthetic_sigma237",
        "ambient": {
            "name": "Sigma(2,3,7)",
            "d": "0",
            "b_red": [{"grading": "-1", "parity": 1}],
            "u_matrix": [[0]],
        },
        "genus": 1,
        "V": [0, 0],
        "a_red": {
            "0": {
                "generators": [{"grading": "-1", "parity": 1}],
                "u_matrix": [[0]],
                "v_matrix": [[1]],
                "h_matrix": [[1]],
                "tower_offset": "0",
            }
        },
    }


@pytest.fixture(scope="session")
def sigma237_synthetic():
    return load_model(sigma237_synthetic_doc())


def random_presentation(rng: random.Random, max_dim: int = 12) -> FiniteUPresentation:
    """Random homogeneous nilpotent U-presentation.

    Gradings live on at most two lines (integer and half-integer);
    homogeneity of degree -2 makes any such matrix nilpotent.
    """
    n = rng.randint(0, max_dim)
    gradings = []
    parities = []
    for _ in range(n):
        level = rng.randint(-4, 4)
        offset = rng.choice([Fraction(0), Fraction(1, 2)])
        g = level + offset
        gradings.append(g)
        parities.append(level % 2)
    cols = [0] * n
    for j in range(n):
        for i in range(n):
            if gradings[i] == gradings[j] - 2 and rng.random() < 0.4:
                cols[j] |= 1 << i
    return FiniteUPresentation(tuple(gradings), tuple(parities), tuple(cols))


def rank_profile_matches(pres: FiniteUPresentation, bars) -> bool:
    """Brute-force oracle: rank(U^j) must equal sum_i max(N_i - j, 0),
    and each grading level must carry as many bar slots as basis vectors."""
    for j in range(pres.dim + 1):
        expected = sum(max(b.length - j, 0) for b in bars)
        if pres.u_power_rank(j) != expected:
            return False
    levels: dict = {}
    for g in pres.gradings:
        levels[g] = levels.get(g, 0) + 1
    covered: dict = {}
    for b in bars:
        for step in range(b.length):
            g = b.bottom + 2 * step
            covered[g] = covered.get(g, 0) + 1
    return covered == levels
