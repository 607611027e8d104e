from typing import List, Sequence

from sqlalchemy import delete, func, select
from sqlalchemy.orm import Session

from geodetect.experiments.constants import STATUS_FAILED
from geodetect.experiments.models import ReplicaRecord


class ReplicaRepository:
    def __init__(self, db: Session):
        self.db = db

    def add_records(self, records: Sequence[ReplicaRecord]) -> None:
        self.db.add_all(list(records))
        self.db.commit()

    def clear_run(self, run_key: str) -> int:
        result = self.db.execute(delete(ReplicaRecord).filter(ReplicaRecord.run_key == run_key))
        self.db.commit()
        return result.rowcount

    def list_for_run(self, run_key: str) -> List[ReplicaRecord]:
        result = self.db.execute(
            select(ReplicaRecord)
            .filter(ReplicaRecord.run_key == run_key)
            .order_by(ReplicaRecord.hypothesis, ReplicaRecord.k, ReplicaRecord.replica)
        )
        return list(result.scalars().all())

    def count_failed(self, run_key: str) -> int:
        result = self.db.execute(
            select(func.count(ReplicaRecord.id)).filter(
                ReplicaRecord.run_key == run_key,
                ReplicaRecord.status == STATUS_FAILED,
            )
        )
        return int(result.scalar_one())
