import json
from pathlib import Path

import pytest

from modata import catalog, catalog_models, derive, get_model
from modata.numerics import DEFAULT_POLICY


@pytest.fixture(scope="session")
def pol():
    return DEFAULT_POLICY


@pytest.fixture(scope="session")
def entries():
    return catalog()


@pytest.fixture(scope="session")
def models():
    return catalog_models()


@pytest.fixture(scope="session")
def derived():
    """name -> (md, DerivedData) for every catalog entry."""
    return {e.name: (e.md, derive(e.md)) for e in catalog()}


@pytest.fixture(scope="session")
def rings_dir():
    from importlib import resources

    return resources.files("modata") / "data" / "rings"


@pytest.fixture()
def ising_file(tmp_path):
    from modata import save_modular_data

    path = tmp_path / "ising.json"
    save_modular_data(get_model("ising").modular_data, path, exact_t=True)
    return path


@pytest.fixture()
def bad_ising_file(tmp_path, ising_file):
    """Ising S with T_sigma replaced by e^{i pi/4}: the negative control."""
    doc = json.loads(Path(ising_file).read_text())
    doc["T"][1] = {"abs": 1.0, "arg_turns": "1/8"}
    path = tmp_path / "ising_bad.json"
    path.write_text(json.dumps(doc))
    return path
