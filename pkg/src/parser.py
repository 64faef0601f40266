"""Schemas of surface definition files, pinned claims and reports.

Surface files are JSON documents (read through YAML, which accepts JSON) that
name a base surface, a cyclic cover of it and a bundle B. Reports hold the
machine section of every command: numbers are decimal strings, rationals are
"p/q", keys are sorted, so identical runs give identical bytes.
"""

import json
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from rich import print

from src.config import EngineConfig
from src.covers import CyclicCover, PullbackClass, make_cover
from src.errors import InvalidModelError, SpecFileError
from src.lattice import BaseSurface
from src.records import Inapplicable, RuleOutcome, fmt_exact


class BaseSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["hirzebruch", "plane"] = Field(description="The base surface")
    e: int = Field(0, description="Twist of F_e; omitted for the plane")


class CoverSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    degree: int = Field(description="Cover degree d >= 2")
    branch_class: List[int] = Field(description="Coordinates of L; the branch divisor lies in |dL|")


class SurfaceSpecFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = Field(None, description="Label used in reports")
    base: BaseSpec
    cover: CoverSpec
    bundle: List[int] = Field(description="Coordinates of the base class whose pullback is B")
    n_max: Optional[int] = Field(None, ge=2, description="Overrides the engine's n_max")
    r_cap: Optional[int] = Field(None, ge=3, description="Overrides the engine's r_cap")

    def build(self) -> Tuple[CyclicCover, PullbackClass]:
        try:
            S = BaseSurface(kind=self.base.kind, e=self.base.e)
            X = make_cover(S, self.cover.degree, S.cls(*self.cover.branch_class))
            return X, X.pb(*self.bundle)
        except ValidationError as e:
            raise InvalidModelError(_validation_problems(e)[0]) from e

    def engine_config(self, base: EngineConfig) -> EngineConfig:
        return base.merged(n_max=self.n_max, r_cap=self.r_cap)


class PinnedClaim(BaseModel):
    """One expected value for a model, computed at verification time by the named probe."""

    model_config = ConfigDict(extra="forbid")

    id: str = Field(description="Unique within its model; used by --corrupt")
    claim: str = Field(description="The claim in words")
    probe: str = Field(description="Name of the quantity to compute")
    args: Dict[str, Any] = Field(default_factory=dict, description="Probe arguments")
    expected: Any = Field(description="The pinned value")


class Record(BaseModel):
    """One row of the machine section."""

    model_config = ConfigDict(frozen=True)

    kind: str
    subject: str
    data: Dict[str, Any] = Field(default_factory=dict)


class Report(BaseModel):
    command: str
    exit_code: int = 0
    records: List[Record] = Field(default_factory=list)
    failures: List[str] = Field(default_factory=list)

    def add(self, kind: str, subject: str, **data: Any) -> Record:
        record = Record(kind=kind, subject=subject, data=stringify(data))
        self.records.append(record)
        return record

    def fail(self, message: str, code: int = 1) -> None:
        self.failures.append(message)
        self.exit_code = max(self.exit_code, code)


def stringify(value: Any) -> Any:
    """Integers and rationals become exact decimal strings, recursively."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction)):
        return fmt_exact(value)
    if isinstance(value, BaseModel):
        return stringify(value.model_dump())
    if isinstance(value, dict):
        return {str(k): stringify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [stringify(v) for v in value]
    return str(value) if not isinstance(value, str) else value


def outcome_rows(outcomes: List[RuleOutcome]) -> List[Dict[str, Any]]:
    return [
        {
            "rule_id": o.rule_id,
            "level": o.level,
            "applicable": o.applicable,
            "n": o.n,
            "r_bound": o.r_bound,
            "blocking": o.blocking,
        }
        for o in outcomes
    ]


def inapplicable_data(result: Inapplicable) -> Dict[str, Any]:
    return {
        "reason": result.reason,
        "blocking": result.blocking,
        "appendix": outcome_rows(result.appendix),
    }


def _validation_problems(e: ValidationError) -> List[str]:
    return [
        f"{'.'.join(str(x) for x in err['loc']) or '<root>'}: {err['msg']}" for err in e.errors()
    ]


def load_surface_spec(path: str) -> SurfaceSpecFile:
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise SpecFileError(path, [str(e)]) from e
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark else ""
        raise SpecFileError(path, [f"{where}{getattr(e, 'problem', None) or e}"]) from e
    if not isinstance(data, dict):
        raise SpecFileError(path, ["<root>: expected a mapping"])
    try:
        return SurfaceSpecFile(**data)
    except ValidationError as e:
        raise SpecFileError(path, _validation_problems(e)) from e


def load_claims(path: str) -> List[PinnedClaim]:
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
        return [PinnedClaim(**c) for c in data]
    except (OSError, yaml.YAMLError, TypeError) as e:
        raise SpecFileError(path, [str(e)]) from e
    except ValidationError as e:
        raise SpecFileError(path, _validation_problems(e)) from e


def serialize_report(report: Report) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2)


def parse_report(text: str) -> Report:
    return Report.model_validate_json(text)


if __name__ == "__main__":
    spec = SurfaceSpecFile(
        name="double plane",
        base=BaseSpec(kind="plane"),
        cover=CoverSpec(degree=2, branch_class=[5]),
        bundle=[1],
    )
    X, B = spec.build()
    report = Report(command="demo")
    report.add("model", spec.name, cover=X.label(), B=B)
    text = serialize_report(report)
    print(text)
    print(parse_report(text) == report)
