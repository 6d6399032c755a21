"""Flat tabular datasets with a metadata header, serialized as CSV or JSON.

CSV layout::

    # key: value          (metadata, insertion order)
    col_a,col_b,...
    1.0000000000000000,...  (17 significant digits, bit-exact round trip)
"""

import io
import json
from dataclasses import dataclass, field

import numpy as np


def format_float(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class Dataset:
    columns: list
    data: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = list(self.columns)
        self.data = np.asarray(self.data, dtype=float).reshape(-1, len(self.columns))

    def __len__(self):
        return self.data.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.column(name)

    def to_csv(self, comments=()) -> str:
        out = io.StringIO()
        for key, value in self.metadata.items():
            out.write(f"# {key}: {value}\n")
        for line in comments:
            out.write(f"# {line}\n")
        out.write(",".join(self.columns) + "\n")
        for row in self.data:
            out.write(",".join(format_float(x) for x in row) + "\n")
        return out.getvalue()

    def to_json(self, comments=()) -> str:
        payload = {"metadata": dict(self.metadata), "columns": self.columns, "data": self.data.tolist()}
        if comments:
            payload["comments"] = list(comments)
        return json.dumps(payload, indent=1) + "\n"

    def dumps(self, fmt: str = "csv", comments=()) -> str:
        if fmt == "csv":
            return self.to_csv(comments)
        if fmt == "json":
            return self.to_json(comments)
        raise ValueError(f"unknown format {fmt!r}")

    @classmethod
    def from_csv(cls, text: str) -> "Dataset":
        metadata = {}
        lines = text.splitlines()
        body = []
        for line in lines:
            if line.startswith("#"):
                key, sep, value = line[1:].strip().partition(": ")
                if sep:
                    metadata[key] = value
            elif line.strip():
                body.append(line)
        columns = body[0].split(",")
        rows = [[float(x) for x in line.split(",")] for line in body[1:]]
        return cls(columns, np.array(rows, dtype=float).reshape(-1, len(columns)), metadata)

    @classmethod
    def from_json(cls, text: str) -> "Dataset":
        payload = json.loads(text)
        columns = payload["columns"]
        data = np.array(payload["data"], dtype=float).reshape(-1, len(columns))
        return cls(columns, data, payload.get("metadata", {}))

    @classmethod
    def loads(cls, text: str, fmt: str = "csv") -> "Dataset":
        return cls.from_json(text) if fmt == "json" else cls.from_csv(text)
