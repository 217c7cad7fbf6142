"""Row-oriented experiment results shared by the pipeline modules."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ExperimentResult:
    """Columns plus one dict per sweep point, with free-form metadata."""

    kind: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add_row(self, **values):
        missing = set(self.columns) - set(values)
        if missing:
            raise ValueError(f"row is missing columns {sorted(missing)}")
        self.rows.append({c: values[c] for c in self.columns})
