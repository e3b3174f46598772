from pathlib import Path

import numpy as np
import pytest

from domavec.catalog import MatrixCatalog
from domavec.lexicon import DimensionSet, RowVocab
from domavec.pipeline import run_build
from domavec.sdw2 import WEIGHT_SCALE, CoocMatrix


def matrix_from_dense(values, name="TEST", kind="noun", row_prefix="w",
                      col_prefix="d"):
    """Wrap a dense array (weights in multiples of 0.001) as a CoocMatrix."""
    values = np.asarray(values, dtype=float)
    n_rows, n_cols = values.shape
    rows = RowVocab(words=tuple(f"{row_prefix}{i:03d}" for i in range(n_rows)),
                    cutoff=n_rows)
    dims = DimensionSet(name=name, kind=kind,
                        labels=tuple(f"{col_prefix}{j:03d}" for j in range(n_cols)))
    cells = {}
    for i in range(n_rows):
        for j in range(n_cols):
            scaled = round(values[i, j] * WEIGHT_SCALE)
            assert abs(scaled - values[i, j] * WEIGHT_SCALE) < 1e-6, \
                "test matrices must hold multiples of 0.001"
            if scaled:
                cells[(i, j)] = scaled
    return CoocMatrix(rows=rows, dims=dims, cells=cells, window=2,
                      weighting="grav-default")


def random_dense(rng, n_rows, n_cols, max_scaled=5000, density=0.6):
    """Random exact-weight matrix: entries are k/1000 with k <= max_scaled."""
    out = np.zeros((n_rows, n_cols))
    for i in range(n_rows):
        for j in range(n_cols):
            if rng.random() < density:
                out[i, j] = rng.randint(0, max_scaled) / 1000.0
    return out


@pytest.fixture
def rng():
    import random
    return random.Random(20240817)


MINI_DIR = Path(__file__).parent / "fixtures" / "mini"


@pytest.fixture(scope="session")
def mini_build(tmp_path_factory):
    """One shared build of the bundled mini corpus; returns its catalog path."""
    out = tmp_path_factory.mktemp("mini-matrices")
    return run_build(MINI_DIR / "corpus.conllu", MINI_DIR / "freq.tsv",
                     MINI_DIR / "recipe.yaml", out)


@pytest.fixture(scope="session")
def mini_catalog(mini_build):
    return MatrixCatalog.load(mini_build)
