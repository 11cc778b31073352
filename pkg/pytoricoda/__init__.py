"""The core toric Oda module."""

import asyncio
import logging

from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from typing import Callable

from pytoricoda.const import DEFAULT_JOBS, DEFAULT_MAX_COEFF, DEFAULT_SEED
from pytoricoda.families import Family, FamilyError, Instance, ScanRecord, evaluate_instance
from pytoricoda.families.mapping import FAMILY_MAP

_LOGGER = logging.getLogger(__name__)


class OdaProbe:
    """The scan entry class."""

    configured_families: dict[str, Family]
    jobs: int = DEFAULT_JOBS

    def __init__(self) -> None:
        self.configured_families = {}

    def instances(self) -> list[Instance]:
        return [i for family in self.configured_families.values() for i in family.instances()]

    def _executor(self) -> Executor:
        if self.jobs == 1:
            return ThreadPoolExecutor(max_workers=1)
        return ProcessPoolExecutor(max_workers=self.jobs)

    async def scan(self, sort: bool = False, on_record: Callable[[ScanRecord], None] | None = None) -> list[ScanRecord]:
        """Evaluate every instance; records arrive in completion order unless sorted."""
        loop = asyncio.get_running_loop()
        semaphore = asyncio.Semaphore(self.jobs)
        records: list[tuple[tuple, ScanRecord]] = []

        async def scan_one(instance: Instance, executor: Executor):
            """Evaluate one instance in the pool."""
            async with semaphore:
                record = await loop.run_in_executor(executor, evaluate_instance, instance)
            if record.error is not None:
                _LOGGER.warning("Instance %s failed: %s", record.descriptor, record.error)
            else:
                _LOGGER.info("Instance %s done in %d us", record.descriptor, record.micros)
            records.append((instance.key, record))
            if on_record is not None and not sort:
                on_record(record)

        with self._executor() as executor:
            await asyncio.gather(*(scan_one(i, executor) for i in self.instances()))
        if sort:
            records.sort(key=lambda item: item[0])
            if on_record is not None:
                for _, record in records:
                    on_record(record)
        return [record for _, record in records]

    @classmethod
    def create(
        cls,
        enabled_families: list[str] | None = None,
        max_coeff: int = DEFAULT_MAX_COEFF,
        seed: int = DEFAULT_SEED,
        jobs: int = DEFAULT_JOBS,
        params: dict[str, dict] | None = None,
    ) -> 'OdaProbe':
        """Start an instance of the probe."""
        if jobs < 1:
            raise FamilyError(f"jobs {jobs} must be positive.")
        self = cls()
        self.jobs = jobs
        params = params or {}
        for family_id in FAMILY_MAP if enabled_families is None else enabled_families:
            if str(family_id) not in FAMILY_MAP:
                raise FamilyError(f"Family {family_id} is not valid for this application.", family_id)
            self.configured_families[family_id] = FAMILY_MAP[family_id](
                max_coeff=max_coeff, seed=seed, **params.get(family_id, {})
            )
        return self


def main() -> int:
    """Console entry point."""
    from pytoricoda.cli import main as cli_main  # pylint: disable=import-outside-toplevel

    return cli_main()
