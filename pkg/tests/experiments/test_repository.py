from datetime import datetime, timedelta, timezone

from geodetect.experiments.constants import STATUS_FAILED, STATUS_OK
from geodetect.experiments.models import ReplicaRecord


def _record(run_key: str, replica: int, status: str = STATUS_OK, hypothesis: str = "H0") -> ReplicaRecord:
    return ReplicaRecord(
        experiment="custom",
        run_key=run_key,
        hypothesis=hypothesis,
        k=0 if hypothesis == "H0" else 10,
        replica=replica,
        seed=str(replica),
        status=status,
        w_value=None if status == STATUS_FAILED else float(replica),
        triangle_count=None if status == STATUS_FAILED else replica,
        error="boom" if status == STATUS_FAILED else None,
    )


def test_records_are_listed_in_cell_order(repository):
    repository.add_records([
        _record("run", 1, hypothesis="H1"),
        _record("run", 1),
        _record("run", 0),
        _record("other", 0),
    ])
    listed = repository.list_for_run("run")
    assert [(r.hypothesis, r.replica) for r in listed] == [("H0", 0), ("H0", 1), ("H1", 1)]
    assert listed[0].created_at is not None


def test_count_failed(repository):
    repository.add_records([_record("run", 0), _record("run", 1, STATUS_FAILED), _record("run", 2, STATUS_FAILED)])
    assert repository.count_failed("run") == 2
    assert repository.count_failed("missing") == 0


def test_clear_run_only_touches_its_key(repository):
    repository.add_records([_record("run", 0), _record("run", 1), _record("other", 0)])
    assert repository.clear_run("run") == 2
    assert repository.list_for_run("run") == []
    assert len(repository.list_for_run("other")) == 1


def test_large_seed_round_trips(repository):
    seed = (1 << 64) - 1
    record = _record("run", 0)
    record.seed = str(seed)
    repository.add_records([record])
    assert int(repository.list_for_run("run")[0].seed) == seed


def test_records_export_their_columns(repository):
    repository.add_records([_record("run", 3, STATUS_FAILED)])
    (record,) = repository.list_for_run("run")
    assert ReplicaRecord.__tablename__ == "replica_records"
    exported = record.as_dict()
    assert exported["status"] == STATUS_FAILED
    assert exported["error"] == "boom"
    assert exported["w_value"] is None
    assert set(exported) >= {"id", "run_key", "seed", "created_at"}


def test_records_are_stamped_in_utc(repository):
    before = datetime.now(timezone.utc)
    repository.add_records([_record("run", 0)])
    (record,) = repository.list_for_run("run")
    stamped = record.created_at
    if stamped.tzinfo is None:
        stamped = stamped.replace(tzinfo=timezone.utc)
    assert before - timedelta(seconds=1) <= stamped <= datetime.now(timezone.utc) + timedelta(seconds=1)

    default = ReplicaRecord.__table__.c.created_at.default
    assert default.arg(None).tzinfo is timezone.utc
