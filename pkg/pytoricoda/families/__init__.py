"""Instance families for scans."""

import itertools
import logging
import random
import time
import traceback

from dataclasses import dataclass
from typing import final

from pytoricoda.const import (
    DEFAULT_MAX_COEFF,
    DEFAULT_SEED,
    PROP_COEFFS,
    PROP_RECORD_COMMAND,
    PROP_RECORD_DESCRIPTOR,
    PROP_RECORD_ERROR,
    PROP_RECORD_FAMILY,
    PROP_RECORD_MICROS,
    PROP_RECORD_PAYLOAD,
)
from pytoricoda.lattice import ToricOdaError
from pytoricoda.oda import order_relations, phi_cokernel, psi_check, tensor_stability
from pytoricoda.toric import Fan, ToricLineBundle, is_nef, polytope_of, tensor

_LOGGER = logging.getLogger(__name__)


class FamilyError(ToricOdaError, ValueError):
    """Unknown family or bad family parameters."""

    def __init__(self, message: str, family: str | None = None) -> None:
        super().__init__(message)
        self.family = family


@dataclass(frozen=True)
class Instance:
    """One pair of nef bundles on a fan; the descriptor replays it."""

    family: str
    fan: Fan
    first: tuple[int, ...]
    second: tuple[int, ...]

    @property
    def key(self) -> tuple:
        return (self.family, self.fan.rays, self.fan.max_cones, self.first, self.second)

    def bundles(self) -> tuple[ToricLineBundle, ToricLineBundle]:
        return ToricLineBundle(self.fan, self.first), ToricLineBundle(self.fan, self.second)

    def descriptor(self) -> dict:
        return {**self.fan.as_dict(), PROP_COEFFS: [list(self.first), list(self.second)]}


@dataclass(frozen=True)
class ScanRecord:
    command: str
    family: str
    descriptor: dict
    payload: dict | None
    micros: int
    error: str | None = None

    def as_dict(self, timing: bool = True) -> dict:
        result = {
            PROP_RECORD_COMMAND: self.command,
            PROP_RECORD_FAMILY: self.family,
            PROP_RECORD_DESCRIPTOR: self.descriptor,
            PROP_RECORD_PAYLOAD: self.payload,
        }
        if self.error is not None:
            result[PROP_RECORD_ERROR] = self.error
        if timing:
            result[PROP_RECORD_MICROS] = self.micros
        return result


def evaluate(instance: Instance) -> dict:
    """Sum-map cokernel of the pair.

    Surfaces also get the translate cover of P_{L1 + L2} by P_{L1}, the three orders between L1
    and L2 and whether the covering order survives twisting both by L1.
    """
    first, second = instance.bundles()
    small, other = polytope_of(first), polytope_of(second)
    phi = phi_cokernel(small, other)
    payload = {"phi": phi.as_dict(), "psi": None, "orders": None, "tensor_stability": None}
    if instance.fan.dim <= 2:
        psi = psi_check(small, polytope_of(tensor(first, second)))
        if psi.covered and phi.dim_coker:
            raise AssertionError(f"Translates cover but the sum map misses {sorted(phi.missed)}.")
        payload["psi"] = psi.as_dict()
        payload["orders"] = order_relations(first, second).as_dict()
        payload["tensor_stability"] = tensor_stability(first, second, first).as_dict()
    return payload


def evaluate_instance(instance: Instance, command: str = "oda scan") -> ScanRecord:
    """Evaluate in a worker; failures become error records."""
    start = time.perf_counter_ns()
    try:
        payload, error = evaluate(instance), None
    except (ToricOdaError, AssertionError, ArithmeticError) as err:
        payload, error = None, f"{type(err).__name__}: {err}"
        _LOGGER.debug("Instance failed: %s", traceback.format_exc())
    micros = (time.perf_counter_ns() - start) // 1000
    return ScanRecord(command, instance.family, instance.descriptor(), payload, micros, error)


class Family:
    """Base family, all instance generators inherit this."""

    family_id: str = ""
    parameters: dict[str, int] = {}

    def __init__(self, max_coeff: int = DEFAULT_MAX_COEFF, seed: int = DEFAULT_SEED, limit: int | None = None, **params) -> None:
        unknown = set(params) - set(self.parameters)
        if unknown:
            raise FamilyError(f"Unknown parameters {sorted(unknown)} for family {self.family_id}.", self.family_id)
        if max_coeff < 0:
            raise FamilyError(f"max_coeff {max_coeff} must be nonnegative.", self.family_id)
        if limit is not None and limit < 1:
            raise FamilyError(f"limit {limit} must be positive.", self.family_id)
        self.max_coeff = max_coeff
        self.seed = seed
        self.limit = limit
        self.params = {**self.parameters, **{k: int(v) for k, v in params.items()}}

    def fans(self) -> list[Fan]:
        """The fans of the family."""
        raise NotImplementedError

    @final
    def bundles(self, fan: Fan) -> list[tuple[int, ...]]:
        """Nef classes with coefficients up to max_coeff, zero on the rays of the first cone."""
        base = set(fan.max_cones[0])
        free = [i for i in range(len(fan.rays)) if i not in base]
        result = []
        for values in itertools.product(range(self.max_coeff + 1), repeat=len(free)):
            if not any(values):
                continue
            coeffs = [0] * len(fan.rays)
            for i, value in zip(free, values):
                coeffs[i] = value
            if is_nef(ToricLineBundle(fan, tuple(coeffs))):
                result.append(tuple(coeffs))
        return result

    @final
    def instances(self) -> list[Instance]:
        found = []
        for fan in self.fans():
            classes = self.bundles(fan)
            found.extend(
                Instance(self.family_id, fan, first, second)
                for first, second in itertools.combinations_with_replacement(classes, 2)
            )
        if self.limit is not None and self.limit < len(found):
            found = random.Random(self.seed).sample(found, self.limit)
        _LOGGER.debug("Family %s produced %d instances", self.family_id, len(found))
        return found


def parse_family_spec(text: str) -> tuple[str, dict[str, int]]:
    """'name' or 'name:key=value,key=value'."""
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise FamilyError(f"Family parameter {item!r} is not key=value.", name)
        try:
            params[key.strip()] = int(value)
        except ValueError as err:
            raise FamilyError(f"Family parameter {key!r} needs an integer, got {value!r}.", name) from err
    return name.strip(), params
