import os
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple

from dotenv import load_dotenv
from pydantic import BaseModel, Field, model_validator

load_dotenv()

LOG_LEVEL = os.getenv("KGCORE_LOG", "WARNING").upper()
DEFAULT_THREADS = int(os.getenv("KGCORE_THREADS", "1"))
LABEL_TYPE = os.getenv("KGCORE_LABEL_TYPE", "str")
PRECOMPUTE_COOCCURRENCE = os.getenv("KGCORE_PRECOMPUTE", "0") == "1"

INDEX_MAGIC = "KGIDX"
INDEX_VERSION = 1
INDEX_SUFFIX = ".kgidx"

BYTES_PER_ENTRY = 8
CONSTRUCTION_RUNS = 3
SUITE_SIZE = 100
DEFAULT_SCALE_SIZES = (10000, 20000, 40000, 80000)
DEFAULT_EDGES_PER_NODE = 2
QUARTILES = (25, 50, 75)
SIZE_WINDOWS = 10
SIZE_LB_RANGE = (30, 100)
SIZE_SPAN_RANGE = (10, 100)

NodeSet = FrozenSet[int]
Position = Tuple[int, int]


class Variant(str, Enum):
    NAIVE = "NAIVE"
    LSE_H = "LSE_H"
    LSE_HV = "LSE_HV"
    LSE_HVD = "LSE_HVD"

    @property
    def cli_name(self) -> str:
        return self.value.lower().replace("_", "-")

    @classmethod
    def from_cli(cls, name: str) -> "Variant":
        return cls(name.upper().replace("-", "_"))


ALL_VARIANTS = [Variant.NAIVE, Variant.LSE_H, Variant.LSE_HV, Variant.LSE_HVD]


class JaccardMode(str, Enum):
    """Which leaf sets the diagonal overlap is measured over."""

    NAIVE = "naive"
    HV = "hv"


class KGCoreError(Exception):
    pass


class DatasetParseError(KGCoreError, ValueError):
    def __init__(self, line: int, token: str, reason: str = "malformed label") -> None:
        super().__init__(f"line {line}: {reason}: {token!r}")
        self.line = line
        self.token = token


class IndexFormatError(KGCoreError, ValueError):
    def __init__(self, offset: int, reason: str) -> None:
        super().__init__(f"byte {offset}: {reason}")
        self.offset = offset
        self.reason = reason


class UnsupportedVersionError(IndexFormatError):
    pass


class FingerprintMismatchError(IndexFormatError):
    pass


class Query(BaseModel):
    k: int = Field(ge=1, description="Minimum number of qualified neighbours")
    g: int = Field(ge=1, description="Minimum co-occurrence count per neighbour")


class SizeQuery(BaseModel):
    lb: int = Field(ge=0, description="Inclusive lower bound on core size")
    ub: int = Field(ge=0, description="Inclusive upper bound on core size")

    @model_validator(mode="after")
    def _ordered(self) -> "SizeQuery":
        if self.lb > self.ub:
            raise ValueError(f"lb ({self.lb}) must not exceed ub ({self.ub})")
        return self


class GenConfig(BaseModel):
    n: int = Field(ge=1, description="Node count")
    m: int = Field(ge=0, description="Edge count")
    cmin: int = Field(default=2, ge=1, description="Smallest hyperedge cardinality")
    cmax: int = Field(default=5, ge=1, description="Largest hyperedge cardinality")
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def _cardinality_range(self) -> "GenConfig":
        if self.cmax < self.cmin:
            raise ValueError(f"cmax ({self.cmax}) must be >= cmin ({self.cmin})")
        if self.cmax > self.n:
            raise ValueError(f"cmax ({self.cmax}) exceeds node count ({self.n})")
        return self


class IndexStats(BaseModel):
    variant: Variant
    total_entries: int = Field(description="NodeId occurrences across leaves and aux depths")
    approx_bytes: int
    leaf_count: int
    empty_leaf_count: int
    aux_count: int = Field(description="Aux positions with at least one nonempty depth")
    aux_depth_records: int = 0
    mean_aux_depth: float = 0.0
    mean_aux_size: float = 0.0

    @property
    def empty_leaf_ratio(self) -> float:
        return self.empty_leaf_count / self.leaf_count if self.leaf_count else 0.0

    @property
    def aux_leaf_ratio(self) -> float:
        return self.aux_count / self.leaf_count if self.leaf_count else 0.0


class JaccardReport(BaseModel):
    variant: Variant
    mode: JaccardMode = JaccardMode.HV
    per_position: Dict[str, float] = Field(default_factory=dict, description="'k,g' -> Jaccard")
    mean: float = 0.0
    count: int = 0


class QuerySuite(BaseModel):
    queries: List[Query]
    sizes: List[int]
    short: bool = Field(default=False, description="Fewer nonempty cores than requested")


class BenchReport(BaseModel):
    dataset: str = ""
    nodes: int = 0
    edges: int = 0
    threads: int = 1
    construction_seconds: Dict[str, float] = Field(default_factory=dict)
    query_seconds: Dict[str, float] = Field(default_factory=dict)
    peeling_seconds: float = 0.0
    suite_size: int = 0
    suite_short: bool = False
    entries: Dict[str, int] = Field(default_factory=dict)

    def speedup(self, variant: Variant) -> Optional[float]:
        seconds = self.query_seconds.get(variant.value)
        if not seconds:
            return None
        return self.peeling_seconds / seconds


class ScalePoint(BaseModel):
    n: int
    nodes: int
    edges: int
    per_query_seconds: Dict[str, float] = Field(default_factory=dict)
    peeling_seconds: float = Field(default=0.0, description="Mean peeling time over the same quartile queries")


class SizeWindow(BaseModel):
    lb: int
    ub: int
    pairs: int = 0
    index_seconds: float = 0.0
    peeling_seconds: float = 0.0


class SizeBenchReport(BaseModel):
    dataset: str = ""
    nodes: int = 0
    edges: int = 0
    variant: Variant = Variant.LSE_HVD
    seed: int = 0
    windows: List[SizeWindow] = Field(default_factory=list)
    index_seconds: float = 0.0
    peeling_seconds: float = 0.0
    mean_pairs: float = 0.0

    @property
    def speedup(self) -> Optional[float]:
        if not self.index_seconds:
            return None
        return self.peeling_seconds / self.index_seconds
