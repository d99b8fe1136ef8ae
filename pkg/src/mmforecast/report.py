"""Machine-readable pipeline report with a stable JSON encoding."""
import json
import math
from dataclasses import dataclass, field
from datetime import date

import numpy as np

SIGNIFICANT_DIGITS = 10


def normalize(obj):
    """Convert to plain JSON types; floats rounded to 10 significant digits, non-finite to None."""
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [normalize(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        x = float(f"{x:.{SIGNIFICANT_DIGITS}g}")
        return 0.0 if x == 0 else x
    if isinstance(obj, date):
        return obj.isoformat()
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")


@dataclass
class PipelineReport:
    meta: dict = field(default_factory=dict)
    stages: dict = field(default_factory=dict)
    skipped: dict = field(default_factory=dict)

    def add(self, stage, payload):
        self.stages[stage] = normalize(payload)

    def skip(self, stage, reason):
        self.skipped[stage] = str(reason)

    def has(self, stage):
        return stage in self.stages

    def to_dict(self):
        return {"meta": normalize(self.meta), "stages": self.stages, "skipped": self.skipped}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(data["meta"], data["stages"], data["skipped"])

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
