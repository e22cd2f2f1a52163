import numpy as np
import pytest

from mimicfund import build_group, build_market, markowitz

TEXTBOOK_MU = (0.07, 0.14)
TEXTBOOK_SIGMA = ((0.0144, 0.0048), (0.0048, 0.04))


@pytest.fixture
def textbook_market():
    return build_market(TEXTBOOK_MU, TEXTBOOK_SIGMA)


@pytest.fixture
def textbook_ctx(textbook_market):
    return markowitz.context(textbook_market)


@pytest.fixture
def base_group():
    return build_group(alpha=(2.0, 4.0), beta=(0.5, 0.5), phi=(3.0, 3.0))


@pytest.fixture
def returns_csv(tmp_path):
    """A small well-formed return-history CSV; 2 assets, 60 observations."""
    rng = np.random.default_rng(7)
    rows = rng.multivariate_normal(
        mean=[0.005, 0.01], cov=[[0.001, 0.0002], [0.0002, 0.002]], size=60
    )
    path = tmp_path / "returns.csv"
    lines = ["A,B"] + [f"{a:.10f},{b:.10f}" for a, b in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
