"""Random inputs shared by the test modules."""

import random

from stabilis import LinearOperatorSpec, box
from stabilis.multivariate import random_poly


def random_operator(rng: random.Random, kappa, out_degree=2, density=0.5, real=False):
    """Table operator on ``C_kappa`` with sparse random images of degree <= out_degree."""
    n = len(kappa)
    images = {}
    for a in box(kappa):
        if rng.random() < density:
            images[a] = random_poly(rng, (out_degree,) * n, height=4, density=0.4, complex_coeffs=not real)
    return LinearOperatorSpec(n, kappa, images, "table")
