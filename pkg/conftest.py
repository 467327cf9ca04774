# conftest.py

import os
import sys

import numpy as np
import pytest

# Los módulos viven en la raíz del repositorio, sin paquete.
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
