"""
Pydantic models for experiment configuration, reports and JSON snapshots of structures.
"""

from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from pmaplab.core.prob import ThetaVector
from pmaplab.core.settings import GRID_LOG2_MAX, GRID_LOG2_MIN


class Tail(str, Enum):
    """
    Shape of the non-hub part of a hub family.
    """

    UNIFORM = "uniform"


class ExperimentId(str, Enum):
    """
    Experiment catalog entries.
    """

    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    E4 = "E4"
    E5 = "E5"
    E6 = "E6"
    E7 = "E7"
    E8 = "E8"


WeightSpec = Union[Literal["p", "uniform"], List[float]]

# Sizes at which the catalog thresholds are meant to hold; a config overrides any of them.
ACCEPTANCE_DEFAULTS: Dict[ExperimentId, Dict[str, Any]] = {
    ExperimentId.E3: {"n": 50, "theta": [0.5], "replications": 1000},
    ExperimentId.E4: {"n": 3000, "theta": [0.5], "replications": 5000, "leaves": 2000},
    ExperimentId.E5: {"n": 10_000, "theta": [], "replications": 10_000},
    ExperimentId.E6: {"n": 5000, "theta": [0.6], "replications": 10_000},
    ExperimentId.E7: {"sizes": [4], "replications": 1_000_000},
    ExperimentId.E8: {"n": 5000, "theta": [0.5], "replications": 10_000},
}


class FamilySpec(BaseModel):
    """
    Parameters of a hub family p_n.
    """

    theta: List[float] = Field([], description="Hub weights theta_1 >= ... >= theta_I")
    n: int = Field(..., gt=0, description="Number of vertices")
    tail: Tail = Field(Tail.UNIFORM, description="Shape of the tail")

    model_config = {
        "json_schema_extra": {
            "example": {
                "theta": [0.5],
                "n": 101,
                "tail": "uniform",
            }
        }
    }

    def theta_vector(self) -> ThetaVector:
        """Validated theta vector."""
        return ThetaVector(tuple(self.theta))


class ExperimentConfig(BaseModel):
    """
    One run of the experiment catalog.
    """

    experiment: ExperimentId = Field(..., description="Catalog entry to run")
    n: int = Field(50, gt=0, description="Size of the discrete structures")
    theta: List[float] = Field([], description="Hub weights of the family")
    sizes: List[int] = Field([], description="Sizes swept by the exact experiments")
    base_p: List[float] = Field(
        [0.4, 0.3, 0.2, 0.1], description="Probability vector of the exact experiments"
    )
    q: WeightSpec = Field("uniform", description="Law used to order basins")
    w: WeightSpec = Field("p", description="Weights of the height walks")
    seed: Optional[int] = Field(None, description="Master seed; settings default when absent")
    replications: int = Field(1000, ge=1, description="Number of replications")
    grid_log2: int = Field(
        14, ge=GRID_LOG2_MIN, le=GRID_LOG2_MAX, description="Limit grid has 2**grid_log2 cells"
    )
    leaves: int = Field(2000, ge=2, description="Leaves of the stick-breaking tree")
    workers: Optional[int] = Field(None, ge=1, description="Worker processes")
    output: Optional[str] = Field(None, description="CSV path for per-replication rows")

    model_config = {
        "json_schema_extra": {
            "example": {
                "experiment": "E3",
                "n": 50,
                "theta": [0.5],
                "q": "uniform",
                "w": "p",
                "seed": 7,
                "replications": 1000,
                "grid_log2": 14,
                "output": "results/e3.csv",
            }
        }
    }

    @model_validator(mode="before")
    @classmethod
    def acceptance_defaults(cls, data: Any) -> Any:
        """Fill the acceptance sizes of the chosen experiment where the config is silent."""
        if not isinstance(data, dict):
            return data
        try:
            experiment = ExperimentId(data.get("experiment"))
        except ValueError:
            return data
        return {**ACCEPTANCE_DEFAULTS.get(experiment, {}), **data}

    @field_validator("sizes")
    @classmethod
    def sizes_positive(cls, value: List[int]) -> List[int]:
        """Reject non-positive sizes."""
        if any(size < 1 for size in value):
            raise ValueError("sizes must be positive")
        return value

    def family(self) -> FamilySpec:
        """Family spec of this run."""
        return FamilySpec(theta=self.theta, n=self.n)


class ExperimentReport(BaseModel):
    """
    Summary of one experiment run.
    """

    experiment: ExperimentId = Field(..., description="Catalog entry")
    passed: bool = Field(..., description="Whether every threshold held")
    replications: int = Field(..., description="Replications performed")
    statistics: Dict[str, float] = Field({}, description="Summary statistics")
    thresholds: Dict[str, float] = Field({}, description="Acceptance thresholds")
    output: Optional[str] = Field(None, description="CSV written, if any")


class MappingPayload(BaseModel):
    """
    Mapping snapshot; labels are 1-based.
    """

    image: List[int] = Field(..., description="image[i-1] = m(i)")


class TreePayload(BaseModel):
    """
    Rooted tree snapshot; labels are 1-based and the root's parent is 0.
    """

    root: int = Field(..., ge=1, description="Root label")
    parent: List[int] = Field(..., description="parent[i-1] = parent of i, 0 for the root")


class SampleFile(BaseModel):
    """
    Batch of sampled structures together with the law they were drawn from.
    """

    family: FamilySpec
    seed: int
    p: List[float]
    mappings: List[MappingPayload] = Field([], description="Sampled p-mappings")
    trees: List[TreePayload] = Field([], description="Sampled p-trees")


class StepFunctionPayload(BaseModel):
    """
    Step function snapshot.
    """

    widths: List[float]
    values: List[float]
    tags: Optional[List[int]] = Field(None, description="Vertex shown on each step, 1-based")
    marks: Dict[str, List[float]] = Field({}, description="Named time marks such as D, g, d")


class JumpPayload(BaseModel):
    """
    Jump of a grid path.
    """

    index: int
    size: float


class GridPathPayload(BaseModel):
    """
    Path sampled on the grid k/m, k = 0..m.
    """

    m: int
    values: List[float]
    jumps: List[JumpPayload] = []


class NodePayload(BaseModel):
    """
    Node of an edge-weighted tree.
    """

    id: int
    label: str


class EdgeTreePayload(BaseModel):
    """
    Edge-weighted rooted tree snapshot; edges are [parent, child, length].
    """

    nodes: List[NodePayload]
    edges: List[Tuple[int, int, float]]

    model_config = {
        "json_schema_extra": {
            "example": {
                "nodes": [
                    {"id": 0, "label": "root"},
                    {"id": 1, "label": ""},
                    {"id": 2, "label": "1+"},
                    {"id": 3, "label": "2+"},
                ],
                "edges": [[0, 1, 0.4], [1, 2, 0.9], [1, 3, 0.3]],
            }
        }
    }


class CheckSuite(str, Enum):
    """
    Self-check suites.
    """

    BIJECTION = "bijection"
    LEMJ = "lemj"
    JOYAL = "joyal"
    INVARIANTS = "invariants"


class CheckReport(BaseModel):
    """
    Outcome of a self-check suite.
    """

    suite: CheckSuite = Field(..., description="Suite that ran")
    passed: bool = Field(..., description="Whether no check failed")
    instances: int = Field(..., description="Randomized instances examined")
    failures: List[str] = Field([], description="Description of every failed check")
