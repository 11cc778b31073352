import logging
import asyncio

from pytoricoda import OdaProbe

_LOGGER = logging.getLogger(__name__)

async def main():
    """Main init."""
    probe = OdaProbe.create(
        enabled_families=["projective", "hirzebruch"],
        max_coeff=2,
        jobs=2,
        params={"hirzebruch": {"max_a": 1}},
    )
    records = await probe.scan(sort=True)
    for record in records:
        _LOGGER.info("Scanned %s: %s", record.descriptor, record.payload)
    failed = [r for r in records if r.error is not None]
    _LOGGER.info("%d instances, %d failed", len(records), len(failed))

    # _LOGGER.info("Threefold test...")
    # probe = OdaProbe.create(enabled_families=["threefold"], max_coeff=1)
    # await probe.scan()

if __name__ == "__main__":
    logging.basicConfig(
        level=logging.DEBUG,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    asyncio.run(main())
