import numpy as np
import pytest

from geodetect.db.session import build_engine, build_session_factory, get_db, init_db
from geodetect.experiments.repository import ReplicaRepository
from geodetect.experiments.service import ExperimentService
from geodetect.graph.structure import Graph
from geodetect.weights.schemas import WeightSequence


def complete_graph(n: int) -> Graph:
    return Graph.from_edge_list(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def unit_weights(n: int) -> WeightSequence:
    return WeightSequence(values=np.ones(n), tau=2.5, w0=1.0)


def random_graph(rng: np.random.Generator, n: int, edges: int) -> Graph:
    pairs = rng.integers(0, n, size=(edges, 2))
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    return Graph.from_edge_list(n, pairs)


def random_weights(rng: np.random.Generator, n: int) -> WeightSequence:
    return WeightSequence(values=1.0 + rng.pareto(1.5, size=n), tau=2.5, w0=1.0)


@pytest.fixture
def k4() -> Graph:
    return complete_graph(4)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


# ==================== Results Ledger ====================


@pytest.fixture
def db(tmp_path):
    engine = build_engine(tmp_path / "ledger" / "experiments.db")
    init_db(engine)
    with get_db(build_session_factory(engine)) as session:
        yield session
    engine.dispose()


@pytest.fixture
def repository(db) -> ReplicaRepository:
    return ReplicaRepository(db)


@pytest.fixture
def service(repository) -> ExperimentService:
    return ExperimentService(repository)
