from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class EngineConfig(BaseModel):
    """Search bounds of the certification engine.

    Values come from the defaults below, then the optional keys of a surface
    file, then command line flags. The environment is never read.
    """

    model_config = ConfigDict(frozen=True)

    n_max: int = Field(64, ge=2, description="Largest n tried by the nef / slope searches")
    r_cap: Optional[int] = Field(
        None, ge=3, description="Largest r scanned by min_r_for_Np; defaults to 3 + 4*n_max"
    )
    direct_limit: int = Field(
        128,
        ge=1,
        description="Largest l for which h^1(lB) is computed directly before propagating",
    )
    slope_cap: int = Field(
        1000,
        ge=2,
        description="Denominator N of the bound (N-1)/N used when B^2 >= B.K",
    )

    @model_validator(mode="before")
    @classmethod
    def _fill_r_cap(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("r_cap") is None:
            n_max = data.get("n_max", cls.model_fields["n_max"].default)
            if isinstance(n_max, int):
                data = {**data, "r_cap": 3 + 4 * n_max}
        return data

    def merged(self, **overrides: Optional[int]) -> "EngineConfig":
        """Returns a copy with every non-None override applied."""
        data = self.model_dump()
        explicit = {k: v for k, v in overrides.items() if v is not None}
        if "n_max" in explicit and "r_cap" not in explicit:
            data["r_cap"] = None
        data.update(explicit)
        return EngineConfig(**data)


DEFAULT_CONFIG = EngineConfig()
